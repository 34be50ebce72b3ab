#include "pointforge/forge.hpp"

#include <chrono>
#include <cmath>

#include "pointforge/geometries.hpp"
#include "pointforge/rng.hpp"

namespace pointforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

int estimate_state_count(int m, double volume, double cutoff) {
  if (m < 1) throw InputError("estimate_state_count: dimension must be >= 1");
  if (!(volume > 0.0)) throw InputError("estimate_state_count: volume must be positive");
  if (!(cutoff > 1.0)) throw InputError("estimate_state_count: cutoff must exceed 1");
  const double eta0 = m * 2.0 * std::log(cutoff) / (cutoff * cutoff);
  const double unit_ball = std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
  const double n = volume / (unit_ball * std::pow(eta0, m / 2.0));
  if (!(n >= 1.0)) return 1;
  return static_cast<int>(std::ceil(n));
}

MetricGraph forge(const TruncatedTriple& t, const ForgeConfig& cfg, ForgeReport* report) {
  const auto start = std::chrono::steady_clock::now();
  t.validate();

  int sdim = cfg.spectral_dim;
  double volume = cfg.volume;
  if (sdim <= 0 || volume <= 0.0) {
    const GeometryKind kind = geometry_kind(t.name);
    const int rank_s = (kind == GeometryKind::Circle) ? 1 : 2;
    const WeylEstimate est = weyl_estimate(t, rank_s);
    if (sdim <= 0) sdim = t.spectral_dim_hint.value_or(est.rounded_dimension);
    if (volume <= 0.0) volume = est.volume;
  }
  const int n = cfg.state_count ? *cfg.state_count : estimate_state_count(sdim, volume, t.cutoff);
  if (n < 1) throw InputError("forge: state count must be >= 1");

  MetricGraph g;
  g.geometry = t.name;
  g.embedding_dim = t.embedding_dim;
  g.dispersions.resize(n);
  g.degenerate.resize(n);

  ForgeReport local_report;
  ForgeReport& rep = report ? *report : local_report;
  rep = ForgeReport{};
  rep.state_count = n;
  rep.spectral_dim = sdim;
  rep.volume = volume;

  EnergyParams params;
  params.g_e = cfg.g_e;
  for (int s = 0; s < n; ++s) {
    MinimizeOptions mo = cfg.minimize;
    mo.seed = sub_seed(cfg.seed, 0xf0a9eULL, static_cast<std::uint64_t>(s));
    const MinimizeResult res = minimize_state(t, params, mo);

    g.states.push_back(res.state);
    g.barycenter_coords.push_back(res.report.mean_phi);
    g.dispersions[s] = res.report.eta;
    g.degenerate[s] = res.report.degenerate ? 1 : 0;
    params.existing.push_back(res.report.mean_phi);

    rep.states.push_back(StateLog{s, res.energy, res.report.eta, res.grad_norm,
                                  res.iterations, res.reseeds_used, res.converged});
    rep.all_states_converged = rep.all_states_converged && res.converged;
  }

  g.distances = distance_matrix(t, g.states, cfg.sdp, cfg.threads, &rep.distances);
  rep.all_pairs_converged = rep.distances.all_converged();
  rep.max_triangle_violation = max_triangle_violation(g.distances);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  g.validate();
  return g;
}

}  // namespace pointforge
