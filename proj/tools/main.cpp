// pointforge command-line pipeline: build truncated triples, generate
// localized states, solve pairwise truncated distances, and embed the
// resulting metric graphs. Every output embeds the configuration that
// produced it; explicit seeds make every command reproducible.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pointforge/connes.hpp"
#include "pointforge/errors.hpp"
#include "pointforge/forge.hpp"
#include "pointforge/geometries.hpp"
#include "pointforge/localization.hpp"
#include "pointforge/mds.hpp"
#include "pointforge/triple.hpp"

using nlohmann::json;
using namespace pointforge;

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << body;
  if (!out) throw IoError("write failed for " + path);
}

CutoffConvention parse_convention(const std::string& s) {
  if (s == "paper") return CutoffConvention::PaperS2;
  if (s == "strict") return CutoffConvention::StrictAbs;
  throw InputError("unknown cutoff convention '" + s + "' (expected paper|strict)");
}

// manifold distance of two stored coordinate means; nan when a mean is too
// short to project back to the model space
double barycenter_geodesic(GeometryKind kind, const RVector& a, const RVector& b) {
  if (a.norm() < 1e-8 || b.norm() < 1e-8) return std::nan("");
  switch (kind) {
    case GeometryKind::Circle: {
      double gap = std::abs(std::atan2(a[1], a[0]) - std::atan2(b[1], b[0]));
      return std::min(gap, 2.0 * kPi - gap);
    }
    case GeometryKind::Sphere:
    case GeometryKind::SphereDc:
      return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0));
    case GeometryKind::Unknown:
      return std::nan("");
  }
  return std::nan("");
}

double bound_slack(double eta_a, const RVector& a, double eta_b, const RVector& b) {
  return eta_a + (1.0 - a.squaredNorm()) + eta_b + (1.0 - b.squaredNorm());
}

// --- build ------------------------------------------------------------

struct BuildArgs {
  std::string geometry;
  double cutoff = 0.0;
  std::string convention = "paper";
  double coupling = 0.5;
  int max_algebra_l = -1;
  std::string out;
};

int cmd_build(const BuildArgs& a) {
  TruncatedTriple t;
  if (a.geometry == "circle") {
    t = build_circle(a.cutoff);
  } else if (a.geometry == "sphere") {
    t = build_sphere(a.cutoff, parse_convention(a.convention), a.max_algebra_l);
  } else if (a.geometry == "sphere-dc") {
    t = build_dc_perturbation(
        build_sphere(a.cutoff, parse_convention(a.convention), a.max_algebra_l), a.coupling);
  } else {
    throw InputError("unknown geometry '" + a.geometry + "' (expected circle|sphere|sphere-dc)");
  }
  save_triple(a.out, t);
  std::cout << "geometry " << t.name << ": dim H = " << t.dim()
            << ", algebra basis = " << t.algebra_basis.size() << "\n";
  std::cout << "wrote " << a.out << "\n";
  return kExitOk;
}

// --- forge ------------------------------------------------------------

struct SolverArgs {
  double sdp_tol = 1e-6;
  int sdp_max_iter = 20000;
  double rho = 0.0;
  double over_relax = 1.8;
  int threads = 0;
};

SdpOptions sdp_options(const SolverArgs& s) {
  SdpOptions o;
  o.tol = s.sdp_tol;
  o.max_iter = s.sdp_max_iter;
  o.rho = s.rho;
  o.over_relax = s.over_relax;
  return o;
}

json solver_json(const SolverArgs& s) {
  return json{{"sdp_tol", s.sdp_tol},
              {"sdp_max_iter", s.sdp_max_iter},
              {"rho", s.rho},
              {"over_relax", s.over_relax},
              {"threads", s.threads}};
}

struct ForgeArgs {
  std::string triple_path;
  std::string out;
  std::string report_path;
  int states = 0;  // 0: covering estimate
  double g_e = 0.1;
  std::uint64_t seed = 1;
  int spectral_dim = 0;
  double volume = 0.0;
  int max_iterations = 500;
  double grad_tol = 1e-8;
  int restarts = 3;
  int max_reseeds = 5;
  SolverArgs solver;
};

json forge_config_json(const ForgeArgs& a) {
  json cfg{{"command", "forge"},        {"triple", a.triple_path},
           {"states", a.states},        {"g_e", a.g_e},
           {"seed", a.seed},            {"spectral_dim", a.spectral_dim},
           {"volume", a.volume},        {"max_iterations", a.max_iterations},
           {"grad_tol", a.grad_tol},    {"restarts", a.restarts},
           {"max_reseeds", a.max_reseeds}};
  cfg["solver"] = solver_json(a.solver);
  return cfg;
}

json report_json(const ForgeReport& rep) {
  json states = json::array();
  for (const auto& s : rep.states)
    states.push_back(json{{"index", s.index},
                          {"energy", s.energy},
                          {"eta", s.eta},
                          {"grad_norm", s.grad_norm},
                          {"iterations", s.iterations},
                          {"reseeds", s.reseeds},
                          {"converged", s.converged}});
  return json{{"state_count", rep.state_count},
              {"spectral_dim", rep.spectral_dim},
              {"volume", rep.volume},
              {"states", states},
              {"distance_pairs", rep.distances.pairs.size()},
              {"distance_maxiter_pairs", rep.distances.max_iter_count},
              {"distance_total_iterations", rep.distances.total_iterations},
              {"distance_wall_seconds", rep.distances.wall_seconds},
              {"max_triangle_violation", rep.max_triangle_violation},
              {"wall_seconds", rep.wall_seconds},
              {"all_states_converged", rep.all_states_converged},
              {"all_pairs_converged", rep.all_pairs_converged}};
}

int cmd_forge(const ForgeArgs& a) {
  const TruncatedTriple t = load_triple(a.triple_path);
  ForgeConfig cfg;
  if (a.states > 0) cfg.state_count = a.states;
  cfg.g_e = a.g_e;
  cfg.seed = a.seed;
  cfg.spectral_dim = a.spectral_dim;
  cfg.volume = a.volume;
  cfg.threads = a.solver.threads;
  cfg.minimize.max_iterations = a.max_iterations;
  cfg.minimize.grad_tol = a.grad_tol;
  cfg.minimize.restarts = a.restarts;
  cfg.minimize.max_reseeds = a.max_reseeds;
  cfg.minimize.seed = a.seed;
  cfg.sdp = sdp_options(a.solver);

  ForgeReport rep;
  const MetricGraph g = forge(t, cfg, &rep);
  save_graph(a.out, g, forge_config_json(a).dump());

  const std::string report_path =
      a.report_path.empty() ? a.out + ".report.json" : a.report_path;
  json report = report_json(rep);
  report["config"] = forge_config_json(a);
  write_text(report_path, report.dump(2) + "\n");

  std::cout << "forged " << g.count() << " states on " << t.name << " (cutoff " << t.cutoff
            << "), " << g.distances.packed().size() << " distances, wall " << rep.wall_seconds
            << " s\n";
  std::cout << "wrote " << a.out << " and " << report_path << "\n";
  if (!rep.all_states_converged || !rep.all_pairs_converged) {
    std::cerr << "warning: non-converged "
              << (rep.all_states_converged ? "distance pairs" : "state minimizations")
              << " are flagged in the report\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// --- distances ---------------------------------------------------------

struct DistancesArgs {
  std::string triple_path;
  std::string graph_path;
  std::string out;
  std::string csv;
  SolverArgs solver;
};

int cmd_distances(const DistancesArgs& a) {
  const TruncatedTriple t = load_triple(a.triple_path);
  MetricGraph g = load_graph(a.graph_path);
  if (g.count() < 2) throw InputError("distances: graph has fewer than two states");

  json cfg{{"command", "distances"},
           {"triple", a.triple_path},
           {"graph", a.graph_path},
           {"solver", solver_json(a.solver)}};

  DistanceRunStats stats;
  g.distances = distance_matrix(t, g.states, sdp_options(a.solver), a.solver.threads, &stats);
  g.geometry = t.name;
  save_graph(a.out, g, cfg.dump());
  if (!a.csv.empty()) write_distance_csv(a.csv, g.distances, cfg.dump());

  std::cout << "solved " << stats.pairs.size() << " pairs on " << t.name << " in "
            << stats.wall_seconds << " s (max triangle violation "
            << max_triangle_violation(g.distances) << ")\n";
  std::cout << "wrote " << a.out << (a.csv.empty() ? "" : " and " + a.csv) << "\n";
  if (!stats.all_converged()) {
    std::cerr << "warning: " << stats.max_iter_count << " pairs hit the iteration cap\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// --- embed -------------------------------------------------------------

struct EmbedArgs {
  std::string graph_path;
  std::string out_prefix;
  int dim = 3;
  std::string weights = "locality";
  double tol = 1e-9;
  int max_iter = 10000;
  std::uint64_t seed = 1;
  bool random_init = false;
};

int cmd_embed(const EmbedArgs& a) {
  const MetricGraph g = load_graph(a.graph_path);
  const int n = g.count();
  StressProblem p;
  p.distances = g.distances.full();
  if (a.weights == "locality") {
    p.weights = locality_weights(p.distances);
  } else if (a.weights == "uniform") {
    p.weights = RMatrix::Ones(n, n) - RMatrix::Identity(n, n);
  } else {
    throw InputError("unknown weight family '" + a.weights + "' (expected locality|uniform)");
  }
  p.dim = a.dim;

  EmbedOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  opts.seed = a.seed;
  opts.classical_init = !a.random_init;
  const EmbeddingResult r = smacof(p, opts);
  const RVector radii = centroid_radii(r.coords);

  json cfg{{"command", "embed"},   {"graph", a.graph_path}, {"dim", a.dim},
           {"weights", a.weights}, {"tol", a.tol},          {"max_iter", a.max_iter},
           {"seed", a.seed},       {"random_init", a.random_init}};

  std::ostringstream csv;
  csv << "# config " << cfg.dump() << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < a.dim; ++j) csv << (j ? "," : "") << r.coords(i, j);
    csv << "\n";
  }
  write_text(a.out_prefix + ".csv", csv.str());

  json coords = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < a.dim; ++j) row.push_back(r.coords(i, j));
    coords.push_back(row);
  }
  json out{{"config", cfg},
           {"coords", coords},
           {"stress", r.stress},
           {"iterations", r.iterations},
           {"converged", r.converged},
           {"radii", {{"min", radii.minCoeff()},
                      {"mean", radii.mean()},
                      {"max", radii.maxCoeff()}}}};
  write_text(a.out_prefix + ".json", out.dump(2) + "\n");

  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set view equal xyz\n"
     << "set title 'embedding of " << a.graph_path << "'\n"
     << "splot '" << a.out_prefix << ".csv' using 1:2:" << (a.dim >= 3 ? "3" : "(0)")
     << " with points pt 7 title 'states'\n"
     << "pause -1\n";
  write_text(a.out_prefix + ".gp", gp.str());

  std::cout << "embedded " << n << " points in R^" << a.dim << ": stress " << r.stress
            << ", radii min " << radii.minCoeff() << " mean " << radii.mean() << " max "
            << radii.maxCoeff() << "\n";
  std::cout << "wrote " << a.out_prefix << ".csv/.json/.gp\n";
  if (!r.converged) {
    std::cerr << "warning: majorization hit the iteration cap\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// --- dispersion-scan ----------------------------------------------------

struct ScanArgs {
  std::string geometry = "sphere";
  std::string convention = "paper";
  std::string cutoffs;
  std::string out;
  int m = 0;  // 0: the triple's spectral dimension hint
};

int cmd_dispersion_scan(const ScanArgs& a) {
  std::vector<double> cutoffs;
  std::stringstream list(a.cutoffs);
  for (std::string item; std::getline(list, item, ',');) {
    if (item.empty()) continue;
    cutoffs.push_back(std::stod(item));
  }
  if (cutoffs.empty()) throw InputError("dispersion-scan: empty cutoff list");
  for (double c : cutoffs)
    if (c <= 1.0) throw InputError("dispersion-scan: cutoff must exceed 1");

  std::vector<double> etas;
  for (double c : cutoffs) {
    TruncatedTriple t;
    VectorState h = [&] {
      if (a.geometry == "circle") {
        t = build_circle(c);
        return heat_state(t, (RVector(1) << 0.0).finished(), 0,
                          a.m > 0 ? std::optional<int>(a.m) : std::nullopt);
      }
      if (a.geometry == "sphere") {
        t = build_sphere(c, parse_convention(a.convention), 0);
        return heat_state(t, (RVector(2) << 1.0, 2.0).finished(), 0,
                          a.m > 0 ? std::optional<int>(a.m) : std::nullopt);
      }
      throw InputError("unknown geometry '" + a.geometry + "' (expected circle|sphere)");
    }();
    etas.push_back(dispersion(t, h).eta);
  }

  // least squares for eta = a log(cutoff)/cutoff^2
  double sxx = 0.0, sxy = 0.0;
  std::vector<double> xs;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    const double x = std::log(cutoffs[i]) / (cutoffs[i] * cutoffs[i]);
    xs.push_back(x);
    sxx += x * x;
    sxy += x * etas[i];
  }
  const double slope = sxy / sxx;
  double max_resid = 0.0;
  for (std::size_t i = 0; i < cutoffs.size(); ++i)
    max_resid = std::max(max_resid, std::abs(etas[i] - slope * xs[i]) / etas[i]);
  const bool degenerate_fit = cutoffs.size() < 2;

  json cfg{{"command", "dispersion-scan"}, {"geometry", a.geometry},
           {"convention", a.convention},   {"cutoffs", cutoffs},
           {"m", a.m},                     {"out", a.out}};

  std::ostringstream csv;
  csv << "# config " << cfg.dump() << "\n";
  csv << "# fit slope=" << slope << " max_rel_residual=" << max_resid
      << (degenerate_fit ? " degenerate=1" : "") << "\n";
  csv << "cutoff,eta,fit,rel_residual\n";
  for (std::size_t i = 0; i < cutoffs.size(); ++i)
    csv << cutoffs[i] << "," << etas[i] << "," << slope * xs[i] << ","
        << std::abs(etas[i] - slope * xs[i]) / etas[i] << "\n";
  write_text(a.out, csv.str());

  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set logscale y\n"
     << "set xlabel 'cutoff'\nset ylabel 'dispersion'\n"
     << "plot '" << a.out << "' using 1:2 with points pt 7 title 'measured', \\\n"
     << "     " << slope << "*log(x)/x**2 title 'fit'\n"
     << "pause -1\n";
  write_text(a.out + ".gp", gp.str());

  std::cout << "dispersion fit: slope " << slope << ", max relative residual " << max_resid
            << (degenerate_fit ? " (degenerate: single point)" : "") << "\n";
  std::cout << "wrote " << a.out << " and " << a.out << ".gp\n";
  return kExitOk;
}

// --- bounds --------------------------------------------------------------

struct BoundsArgs {
  std::string triple_path;
  std::string graph_path;
  std::string out;
  int sweep = 5;
  SolverArgs solver;
};

struct BoundsRow {
  std::string a, b;
  double d_tilde = 0.0, d_m = 0.0, lower = 0.0;
  bool flagged = false;
};

void write_bounds(const BoundsArgs& a, const json& cfg, const std::vector<BoundsRow>& rows) {
  std::ostringstream csv;
  csv << "# config " << cfg.dump() << "\n";
  csv << "a,b,d_tilde,d_geodesic,lower_bound,signed_error,flagged\n";
  for (const auto& r : rows)
    csv << r.a << "," << r.b << "," << r.d_tilde << "," << r.d_m << "," << r.lower << ","
        << r.d_tilde - r.d_m << "," << (r.flagged ? 1 : 0) << "\n";
  write_text(a.out, csv.str());

  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set xlabel 'separation'\nset ylabel 'distance'\n"
     << "plot '" << a.out << "' using 2:3 with linespoints title 'truncated', \\\n"
     << "     '" << a.out << "' using 2:4 with linespoints title 'geodesic', \\\n"
     << "     '" << a.out << "' using 2:5 with linespoints title 'lower bound'\n"
     << "pause -1\n";
  write_text(a.out + ".gp", gp.str());
}

int cmd_bounds(const BoundsArgs& a) {
  if (a.graph_path.empty() == a.triple_path.empty())
    throw InputError("bounds: pass exactly one of --graph (stored pairs) or --triple (sweep)");

  std::vector<BoundsRow> rows;
  json cfg{{"command", "bounds"}, {"out", a.out}};
  bool converged = true;

  if (!a.graph_path.empty()) {
    const MetricGraph g = load_graph(a.graph_path);
    cfg["graph"] = a.graph_path;
    const GeometryKind kind = geometry_kind(g.geometry);
    for (int i = 0; i < g.count(); ++i) {
      for (int j = i + 1; j < g.count(); ++j) {
        BoundsRow r;
        r.a = std::to_string(i);
        r.b = std::to_string(j);
        r.d_tilde = g.distances(i, j);
        r.d_m = barycenter_geodesic(kind, g.barycenter_coords[i], g.barycenter_coords[j]);
        r.flagged = !std::isfinite(r.d_m) || g.degenerate[i] || g.degenerate[j];
        const double slack = bound_slack(g.dispersions[i], g.barycenter_coords[i],
                                         g.dispersions[j], g.barycenter_coords[j]);
        r.lower = r.d_m - kPi / 2 * std::sqrt(std::max(0.0, slack));
        rows.push_back(r);
      }
    }
  } else {
    const TruncatedTriple t = load_triple(a.triple_path);
    if (geometry_kind(t.name) != GeometryKind::Sphere &&
        geometry_kind(t.name) != GeometryKind::SphereDc)
      throw InputError("bounds: the heat-state sweep needs a sphere triple");
    if (a.sweep < 1) throw InputError("bounds: sweep must be >= 1");
    cfg["triple"] = a.triple_path;
    cfg["sweep"] = a.sweep;
    cfg["solver"] = solver_json(a.solver);

    // antipodal-to-nearby pairs along the equator: (phi = 0, phi = pi/2^k)
    const auto comms = std::make_shared<CommutatorSet>(t);
    const VectorState h0 = heat_state(t, (RVector(2) << kPi / 2, 0.0).finished());
    const DispersionReport rep0 = dispersion(t, h0);
    for (int k = 0; k < a.sweep; ++k) {
      const double gamma = kPi / double(1 << k);
      const VectorState h1 = heat_state(t, (RVector(2) << kPi / 2, gamma).finished());
      const DispersionReport rep1 = dispersion(t, h1);
      const SdpSolution s =
          solve_distance(build_problem(comms, t.algebra_basis, h0, h1), sdp_options(a.solver));
      converged = converged && s.status == SolveStatus::Optimal;
      BoundsRow r;
      r.a = "0";
      std::ostringstream g;
      g << gamma;
      r.b = g.str();
      r.d_tilde = s.value;
      r.d_m = barycenter_geodesic(GeometryKind::Sphere, rep0.mean_phi, rep1.mean_phi);
      r.flagged = !std::isfinite(r.d_m) || s.status != SolveStatus::Optimal;
      const double slack = bound_slack(rep0.eta, rep0.mean_phi, rep1.eta, rep1.mean_phi);
      r.lower = r.d_m - kPi / 2 * std::sqrt(std::max(0.0, slack));
      rows.push_back(r);
    }
  }

  write_bounds(a, cfg, rows);
  int positive = 0;
  for (const auto& r : rows)
    if (r.d_tilde - r.d_m > 0.0) ++positive;
  std::cout << "bounds: " << rows.size() << " pairs, signed error positive on " << positive
            << "\n";
  std::cout << "wrote " << a.out << " and " << a.out << ".gp\n";
  if (!converged) {
    std::cerr << "warning: some sweep solves hit the iteration cap\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// --- weyl ----------------------------------------------------------------

struct WeylArgs {
  std::string triple_path;
  int rank = 0;  // 0: 1 for circles, 2 otherwise
};

int cmd_weyl(const WeylArgs& a) {
  const TruncatedTriple t = load_triple(a.triple_path);
  const int rank =
      a.rank > 0 ? a.rank : (geometry_kind(t.name) == GeometryKind::Circle ? 1 : 2);
  const WeylEstimate est = weyl_estimate(t, rank);
  std::cout << "dimension estimate " << est.dimension << " (rounds to "
            << est.rounded_dimension << "), volume " << est.volume << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointforge: finite metric spaces from truncated spectral triples"};
  app.require_subcommand(1);

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "construct a truncated triple and save it");
  build->add_option("geometry", build_args.geometry, "circle|sphere|sphere-dc")->required();
  build->add_option("--cutoff", build_args.cutoff, "spectral cutoff")->required();
  build->add_option("--convention", build_args.convention, "sphere cutoff convention");
  build->add_option("--c", build_args.coupling, "Dirac perturbation coupling (sphere-dc)");
  build->add_option("--max-algebra-l", build_args.max_algebra_l,
                    "cap the harmonic degree of the sphere algebra basis");
  build->add_option("--out", build_args.out, "output triple JSON")->required();

  ForgeArgs forge_args;
  auto* forge_cmd =
      app.add_subcommand("forge", "generate localized states and their distance matrix");
  forge_cmd->add_option("--triple", forge_args.triple_path, "input triple JSON")->required();
  forge_cmd->add_option("--out", forge_args.out, "output graph JSON")->required();
  forge_cmd->add_option("--report", forge_args.report_path,
                        "run report path (default: <out>.report.json)");
  forge_cmd->add_option("--states", forge_args.states,
                        "state count override (default: covering estimate)");
  forge_cmd->add_option("--g-e", forge_args.g_e, "repulsion coupling");
  forge_cmd->add_option("--seed", forge_args.seed, "random seed");
  forge_cmd->add_option("--spectral-dim", forge_args.spectral_dim,
                        "spectral dimension override");
  forge_cmd->add_option("--volume", forge_args.volume, "volume override");
  forge_cmd->add_option("--max-iterations", forge_args.max_iterations,
                        "minimizer iteration cap");
  forge_cmd->add_option("--grad-tol", forge_args.grad_tol, "minimizer gradient tolerance");
  forge_cmd->add_option("--restarts", forge_args.restarts, "minimizer restarts");
  forge_cmd->add_option("--max-reseeds", forge_args.max_reseeds,
                        "extra starts when no restart converged");

  DistancesArgs dist_args;
  auto* dist = app.add_subcommand(
      "distances", "recompute pairwise distances of saved states on another triple");
  dist->add_option("--triple", dist_args.triple_path, "triple JSON to solve on")->required();
  dist->add_option("--graph", dist_args.graph_path, "graph JSON providing the states")
      ->required();
  dist->add_option("--out", dist_args.out, "output graph JSON")->required();
  dist->add_option("--csv", dist_args.csv, "optional distance-matrix CSV");

  EmbedArgs embed_args;
  auto* embed = app.add_subcommand("embed", "stress-majorization embedding of a graph");
  embed->add_option("--graph", embed_args.graph_path, "input graph JSON")->required();
  embed->add_option("--out", embed_args.out_prefix, "output prefix (.csv/.json/.gp)")
      ->required();
  embed->add_option("--dim", embed_args.dim, "target dimension");
  embed->add_option("--weights", embed_args.weights, "locality|uniform");
  embed->add_option("--tol", embed_args.tol, "relative stress tolerance");
  embed->add_option("--max-iter", embed_args.max_iter, "iteration cap");
  embed->add_option("--seed", embed_args.seed, "seed for the random-init fallback");
  embed->add_flag("--random-init", embed_args.random_init,
                  "skip the classical-scaling start");

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("dispersion-scan",
                                  "heat-state dispersion across cutoffs with the fit");
  scan->add_option("--geometry", scan_args.geometry, "circle|sphere");
  scan->add_option("--convention", scan_args.convention, "sphere cutoff convention");
  scan->add_option("--cutoffs", scan_args.cutoffs, "comma-separated cutoff list")->required();
  scan->add_option("--m", scan_args.m, "spectral dimension for the heat time");
  scan->add_option("--out", scan_args.out, "output CSV")->required();

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand(
      "bounds", "truncated distance vs geodesic distance of barycenters, with lower bounds");
  bounds->add_option("--graph", bounds_args.graph_path, "post-process a stored graph");
  bounds->add_option("--triple", bounds_args.triple_path,
                     "sweep heat states along a great circle of this sphere triple");
  bounds->add_option("--sweep", bounds_args.sweep, "number of sweep pairs");
  bounds->add_option("--out", bounds_args.out, "output CSV")->required();

  WeylArgs weyl_args;
  auto* weyl = app.add_subcommand("weyl", "spectral dimension and volume estimates");
  weyl->add_option("--triple", weyl_args.triple_path, "input triple JSON")->required();
  weyl->add_option("--rank", weyl_args.rank, "spinor rank (default by geometry)");

  for (auto* cmd : {forge_cmd, dist, bounds}) {
    auto* solver = cmd == forge_cmd   ? &forge_args.solver
                   : cmd == dist      ? &dist_args.solver
                                      : &bounds_args.solver;
    cmd->add_option("--sdp-tol", solver->sdp_tol, "distance solver tolerance");
    cmd->add_option("--sdp-max-iter", solver->sdp_max_iter, "distance solver iteration cap");
    cmd->add_option("--rho", solver->rho, "splitting penalty (0: auto)");
    cmd->add_option("--over-relax", solver->over_relax, "splitting over-relaxation");
    cmd->add_option("--threads", solver->threads,
                    "worker cap (0: POINTFORGE_THREADS or hardware)");
  }

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(build)) return cmd_build(build_args);
    if (app.got_subcommand(forge_cmd)) return cmd_forge(forge_args);
    if (app.got_subcommand(dist)) return cmd_distances(dist_args);
    if (app.got_subcommand(embed)) return cmd_embed(embed_args);
    if (app.got_subcommand(scan)) return cmd_dispersion_scan(scan_args);
    if (app.got_subcommand(bounds)) return cmd_bounds(bounds_args);
    if (app.got_subcommand(weyl)) return cmd_weyl(weyl_args);
    return kExitInput;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
