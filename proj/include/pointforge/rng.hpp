#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace pointforge {

/// Deterministic random source. Only the raw mt19937_64 stream is consumed and
/// all scalar transforms are spelled out here, so sequences are identical
/// across platforms and standard libraries (std::*_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; one spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  Eigen::VectorXcd gaussian_vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = complex_normal();
    return v;
  }

  /// Haar-uniform unit vector.
  Eigen::VectorXcd unit_vector(Eigen::Index n) {
    Eigen::VectorXcd v = gaussian_vector(n);
    double nrm = v.norm();
    while (nrm < 1e-30) {
      v = gaussian_vector(n);
      nrm = v.norm();
    }
    return v / nrm;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 step, used to derive stream seeds.
inline std::uint64_t seed_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent sub-stream seed for (base, a, b), e.g. per state and restart.
inline std::uint64_t sub_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return seed_mix(seed_mix(base + 0x100000001b3ULL * a) + b);
}

}  // namespace pointforge
