#include "pointforge/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <vector>

namespace pointforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log(n!) in long double, table built once. 4096 covers j up to ~1000.
const long double* log_factorial_table() {
  static std::array<long double, 4096> table;
  static std::once_flag flag;
  std::call_once(flag, [] {
    table[0] = 0.0L;
    for (std::size_t n = 1; n < table.size(); ++n)
      table[n] = table[n - 1] + std::log(static_cast<long double>(n));
  });
  return table.data();
}

long double lf(int n) { return log_factorial_table()[n]; }

// Halve a twice-scaled quantity that must be an even integer by the caller's
// selection-rule checks.
int halve(int twice) { return twice / 2; }

int parity_sign(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

void check_label(HalfInteger j, HalfInteger m, const char* who) {
  if (j.twice() < 0)
    throw InputError(std::string(who) + ": negative j = " + j.str());
  if (m.abs() > j)
    throw InputError(std::string(who) + ": |m| > j for j = " + j.str() + ", m = " + m.str());
  if ((j.twice() - m.twice()) % 2 != 0)
    throw InputError(std::string(who) + ": j = " + j.str() + " and m = " + m.str() +
                     " differ by a non-integer");
}

// Sorted compensated sum; terms alternate in sign, so add small ones first.
long double neumaier_sum(std::vector<long double>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](long double a, long double b) { return std::fabs(a) < std::fabs(b); });
  long double sum = 0.0L, comp = 0.0L;
  for (const long double t : terms) {
    const long double s = sum + t;
    if (std::fabs(sum) >= std::fabs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

}  // namespace

double wigner_3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                 HalfInteger m1, HalfInteger m2, HalfInteger m3) {
  check_label(j1, m1, "wigner_3j");
  check_label(j2, m2, "wigner_3j");
  check_label(j3, m3, "wigner_3j");

  const int tj1 = j1.twice(), tj2 = j2.twice(), tj3 = j3.twice();
  const int tm1 = m1.twice(), tm2 = m2.twice(), tm3 = m3.twice();

  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if ((tj1 + tj2 + tj3) % 2 != 0) return 0.0;
  if (tj3 > tj1 + tj2 || tj3 < std::abs(tj1 - tj2)) return 0.0;

  const int a1 = halve(tj1 + tj2 - tj3);
  const int a2 = halve(tj1 - tj2 + tj3);
  const int a3 = halve(-tj1 + tj2 + tj3);

  const long double log_pre =
      0.5L * (lf(a1) + lf(a2) + lf(a3) - lf(halve(tj1 + tj2 + tj3) + 1) +
              lf(halve(tj1 + tm1)) + lf(halve(tj1 - tm1)) +
              lf(halve(tj2 + tm2)) + lf(halve(tj2 - tm2)) +
              lf(halve(tj3 + tm3)) + lf(halve(tj3 - tm3)));

  const int b1 = halve(tj1 - tm1);      // k <= b1
  const int b2 = halve(tj2 + tm2);      // k <= b2
  const int c1 = halve(tj3 - tj2 + tm1);  // k >= -c1
  const int c2 = halve(tj3 - tj1 - tm2);  // k >= -c2
  const int k_min = std::max({0, -c1, -c2});
  const int k_max = std::min({a1, b1, b2});
  if (k_max < k_min) return 0.0;

  long double max_log = -1e30L;
  std::vector<long double> logs(k_max - k_min + 1);
  for (int k = k_min; k <= k_max; ++k) {
    logs[k - k_min] = log_pre - lf(k) - lf(a1 - k) - lf(b1 - k) - lf(b2 - k) -
                      lf(c1 + k) - lf(c2 + k);
    max_log = std::max(max_log, logs[k - k_min]);
  }
  std::vector<long double> terms(logs.size());
  for (int k = k_min; k <= k_max; ++k)
    terms[k - k_min] = parity_sign(k) * std::exp(logs[k - k_min] - max_log);

  const long double sum = neumaier_sum(terms);
  const int phase = parity_sign(halve(tj1 - tj2 - tm3));
  return static_cast<double>(phase * std::exp(max_log) * sum);
}

double wigner_d(HalfInteger j, HalfInteger mp, HalfInteger m, double beta) {
  check_label(j, mp, "wigner_d");
  check_label(j, m, "wigner_d");
  if ((mp.twice() - m.twice()) % 2 != 0)
    throw InputError("wigner_d: m' = " + mp.str() + " and m = " + m.str() +
                     " differ by a non-integer");

  const int tj = j.twice(), tmp = mp.twice(), tm = m.twice();
  const int jpm = halve(tj + tm), jmm = halve(tj - tm);
  const int jpmp = halve(tj + tmp), jmmp = halve(tj - tmp);
  const int dm = halve(tmp - tm);  // m' - m

  const long double log_pre = 0.5L * (lf(jpm) + lf(jmm) + lf(jpmp) + lf(jmmp));
  const long double c = std::cos(0.5L * static_cast<long double>(beta));
  const long double s = std::sin(0.5L * static_cast<long double>(beta));

  const int s_min = std::max(0, -dm);
  const int s_max = std::min(jpm, jmmp);
  if (s_max < s_min) return 0.0;

  std::vector<long double> terms;
  terms.reserve(s_max - s_min + 1);
  for (int k = s_min; k <= s_max; ++k) {
    const int cos_pow = jpm + jmmp - 2 * k;
    const int sin_pow = dm + 2 * k;
    const long double mag =
        std::exp(log_pre - lf(jpm - k) - lf(k) - lf(dm + k) - lf(jmmp - k));
    terms.push_back(parity_sign(dm + k) * mag * std::pow(c, cos_pow) * std::pow(s, sin_pow));
  }
  return static_cast<double>(neumaier_sum(terms));
}

std::complex<double> spin_weighted_Y(HalfInteger s, HalfInteger l, HalfInteger m,
                                     double theta, double phi) {
  check_label(l, m, "spin_weighted_Y");
  if (s.abs() > l)
    throw InputError("spin_weighted_Y: |s| > l for s = " + s.str() + ", l = " + l.str());
  if ((l.twice() - s.twice()) % 2 != 0)
    throw InputError("spin_weighted_Y: l = " + l.str() + " and s = " + s.str() +
                     " differ by a non-integer");

  const double norm = std::sqrt((l.twice() + 1.0) / (4.0 * kPi));
  const double d = wigner_d(l, m, -s, theta);
  const double mphi = 0.5 * m.twice() * phi;
  return norm * d * std::complex<double>(std::cos(mphi), std::sin(mphi));
}

double triple_integral(HalfInteger s1, HalfInteger l1, HalfInteger m1,
                       HalfInteger l2, HalfInteger m2,
                       HalfInteger s3, HalfInteger l3, HalfInteger m3) {
  if (std::abs(s1.twice()) > 1 || std::abs(s3.twice()) > 1)
    throw InputError("triple_integral: spin weights limited to {0, +-1/2}, got s1 = " +
                     s1.str() + ", s3 = " + s3.str());
  if (!l2.is_integer() || !m2.is_integer())
    throw InputError("triple_integral: middle factor must have integer labels, got l2 = " +
                     l2.str() + ", m2 = " + m2.str());
  check_label(l1, m1, "triple_integral");
  check_label(l2, m2, "triple_integral");
  check_label(l3, m3, "triple_integral");
  if (s1.abs() > l1 || s3.abs() > l3)
    throw InputError("triple_integral: |s| > l");
  if ((l1.twice() - s1.twice()) % 2 != 0 || (l3.twice() - s3.twice()) % 2 != 0)
    throw InputError("triple_integral: l and s differ by a non-integer");

  if (s1 != s3) return 0.0;  // net spin weight of the integrand is nonzero

  const double norm = std::sqrt((l1.twice() + 1.0) * (l2.twice() + 1.0) *
                                (l3.twice() + 1.0) / (4.0 * kPi));
  const int phase = parity_sign(halve(s1.twice() + m1.twice()));
  const double w_m = wigner_3j(l1, l2, l3, -m1, m2, m3);
  if (w_m == 0.0) return 0.0;
  const double w_s = wigner_3j(l1, l2, l3, s1, HalfInteger::whole(0), -s3);
  return phase * norm * w_m * w_s;
}

}  // namespace pointforge
