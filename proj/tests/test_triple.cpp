#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pointforge/errors.hpp"
#include "pointforge/geometries.hpp"
#include "pointforge/rng.hpp"
#include "pointforge/triple.hpp"

using namespace pointforge;

namespace {

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

CVector basis_vector(Eigen::Index dim, Eigen::Index k) {
  CVector v = CVector::Zero(dim);
  v[k] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("HermitianMatrix rejects non-Hermitian and non-square input") {
  CMatrix bad(2, 2);
  bad << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(2, 0);
  CHECK_THROWS_AS(HermitianMatrix{bad}, InputError);

  CHECK_THROWS_AS(HermitianMatrix{CMatrix::Zero(2, 3)}, InputError);

  // a defect at the 1e-13 level is attributed to rounding and accepted
  CMatrix ok(2, 2);
  ok << Complex(1, 0), Complex(0.5, 1e-13), Complex(0.5, 0), Complex(2, 0);
  CHECK_NOTHROW(HermitianMatrix{ok});
}

TEST_CASE("VectorState enforces unit norm") {
  CVector v = basis_vector(4, 1);
  CHECK_NOTHROW(VectorState{v});
  CHECK_THROWS_AS(VectorState{CVector(2.0 * v)}, InputError);
  CHECK_THROWS_AS(VectorState{CVector()}, InputError);
  CHECK_THROWS_AS(VectorState::normalized(CVector(0.0 * v)), InputError);

  VectorState s = VectorState::normalized(CVector(Complex(3.0, 4.0) * v));
  CHECK(s.vec().norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("state_expectation basics") {
  Rng rng(7);
  CVector raw(5);
  for (Eigen::Index i = 0; i < 5; ++i) raw[i] = Complex(rng.normal(), rng.normal());
  VectorState v = VectorState::normalized(raw);

  HermitianMatrix id{CMatrix(CMatrix::Identity(5, 5))};
  HermitianMatrix zero{CMatrix(CMatrix::Zero(5, 5))};
  CHECK(state_expectation(v, id) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(state_expectation(v, zero) == 0.0);

  HermitianMatrix small{CMatrix(CMatrix::Identity(3, 3))};
  CHECK_THROWS_AS(state_expectation(v, small), InputError);
}

TEST_CASE("basis states see the zero diagonal of the truncated circle cosine") {
  auto t = build_circle(2.0);
  // algebra_basis[0] is the identity, [1] the cosine of the angle; the cosine
  // truncates to half the sum of the two shift operators, which has no diagonal
  VectorState e0{basis_vector(t.dim(), 0)};
  CHECK(state_expectation(e0, t.algebra_basis[1]) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(state_expectation(e0, t.algebra_basis[0]) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("expectations are real and bounded by the operator norm") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix g(8, 8);
    for (Eigen::Index j = 0; j < 8; ++j)
      for (Eigen::Index i = 0; i < 8; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
    HermitianMatrix a{CMatrix(0.5 * (g + g.adjoint()))};

    CVector raw(8);
    for (Eigen::Index i = 0; i < 8; ++i) raw[i] = Complex(rng.normal(), rng.normal());
    VectorState v = VectorState::normalized(raw);

    const double val = state_expectation(v, a);
    const RVector ev = herm_eigenvalues(a.mat());
    CHECK(val >= ev.minCoeff() - 1e-12);
    CHECK(val <= ev.maxCoeff() + 1e-12);
  }
}

TEST_CASE("triple round-trip is bit-exact") {
  auto t = build_circle(3.0);
  t.spectral_dim_hint = 1;
  const std::string path = temp_path("pf_triple_roundtrip.json");
  save_triple(path, t);
  auto u = load_triple(path);

  CHECK(u.name == t.name);
  CHECK(u.cutoff == t.cutoff);
  CHECK(u.embedding_dim == t.embedding_dim);
  REQUIRE(u.spectral_dim_hint.has_value());
  CHECK(*u.spectral_dim_hint == 1);
  REQUIRE(u.dim() == t.dim());
  CHECK((u.dirac_eigenvalues - t.dirac_eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(u.algebra_basis.size() == t.algebra_basis.size());
  for (std::size_t i = 0; i < t.algebra_basis.size(); ++i)
    CHECK((u.algebra_basis[i].mat() - t.algebra_basis[i].mat()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(u.phi.size() == t.phi.size());
  for (std::size_t i = 0; i < t.phi.size(); ++i) {
    CHECK((u.phi[i].mat() - t.phi[i].mat()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((u.phi_sq[i].mat() - t.phi_sq[i].mat()).cwiseAbs().maxCoeff() == 0.0);
  }
  std::remove(path.c_str());
}

TEST_CASE("sphere round-trip preserves every matrix entry") {
  auto t = build_sphere(2.0, CutoffConvention::StrictAbs);
  const std::string path = temp_path("pf_sphere_roundtrip.json");
  save_triple(path, t);
  auto u = load_triple(path);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.algebra_basis.size(); ++i)
    worst = std::max(worst,
                     (u.algebra_basis[i].mat() - t.algebra_basis[i].mat()).cwiseAbs().maxCoeff());
  CHECK(worst == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("malformed triple files are rejected") {
  auto t = build_circle(2.0);
  const std::string path = temp_path("pf_triple_tamper.json");

  SUBCASE("non-Hermitian entry") {
    save_triple(path, t);
    std::string body = slurp(path);
    // dirac eigenvalues of the K=2 circle are -2,-1,0,1,2 scattered in the file;
    // instead of string surgery, rebuild the file with a poisoned basis element
    const std::string clean = "\"algebra_basis\":[[[[1.0,0.0]";
    auto pos = body.find(clean);
    REQUIRE(pos != std::string::npos);
    // first element, entry (0,0): make it complex-valued on the diagonal
    body.replace(pos, clean.size(), "\"algebra_basis\":[[[[0.0,0.7]");
    spit(path, body);
    CHECK_THROWS_AS(load_triple(path), InputError);
  }

  SUBCASE("phi and phi_sq lengths disagree") {
    TruncatedTriple broken = t;
    broken.phi_sq.pop_back();
    CHECK_THROWS_AS(save_triple(path, broken), InputError);
  }

  SUBCASE("missing field") {
    spit(path, "{\"format_version\":1,\"name\":\"circle\"}");
    CHECK_THROWS_AS(load_triple(path), InputError);
  }

  SUBCASE("unsupported format_version") {
    save_triple(path, t);
    std::string body = slurp(path);
    auto pos = body.find("\"format_version\":1");
    REQUIRE(pos != std::string::npos);
    body.replace(pos, 18, "\"format_version\":9");
    spit(path, body);
    CHECK_THROWS_AS(load_triple(path), InputError);
  }

  SUBCASE("not JSON at all") {
    spit(path, "not json {");
    CHECK_THROWS_AS(load_triple(path), IoError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_triple(temp_path("pf_definitely_absent.json")), IoError);
  }
  std::remove(path.c_str());
}

TEST_CASE("triple validation catches inconsistent structures") {
  auto t = build_circle(2.0);

  SUBCASE("eigenvalue above the cutoff bound") {
    t.dirac_eigenvalues[0] = 100.0;
    CHECK_THROWS_AS(t.validate(), InputError);
  }
  SUBCASE("algebra element of the wrong dimension") {
    t.algebra_basis.push_back(HermitianMatrix{CMatrix(CMatrix::Identity(2, 2))});
    CHECK_THROWS_AS(t.validate(), InputError);
  }
  SUBCASE("phi count not matching embedding_dim") {
    t.embedding_dim = 3;
    CHECK_THROWS_AS(t.validate(), InputError);
  }
  SUBCASE("nonpositive cutoff") {
    t.cutoff = 0.0;
    CHECK_THROWS_AS(t.validate(), InputError);
  }
}

TEST_CASE("SymmetricDistances stores each pair once") {
  SymmetricDistances d(4);
  d.set(2, 0, 1.5);
  CHECK(d(0, 2) == 1.5);
  CHECK(d(2, 0) == 1.5);
  CHECK(d(1, 1) == 0.0);
  CHECK(d.packed().size() == 6);
  CHECK_THROWS_AS(d.set(0, 4, 1.0), InputError);
  CHECK_THROWS_AS(d.set(0, 0, 1.0), InputError);  // nonzero diagonal
  CHECK_NOTHROW(d.set(3, 3, 0.0));
  CHECK_THROWS_AS(SymmetricDistances::from_packed(3, {1.0, 2.0}), InputError);

  RMatrix m = d.full();
  CHECK(m(0, 2) == 1.5);
  CHECK(m(2, 0) == 1.5);
  CHECK(m.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("max_triangle_violation flags the worst broken triple") {
  SymmetricDistances d(3);
  d.set(0, 1, 1.0);
  d.set(1, 2, 1.0);
  d.set(0, 2, 2.5);
  CHECK(max_triangle_violation(d) == doctest::Approx(0.5).epsilon(1e-15));
  d.set(0, 2, 1.9);
  CHECK(max_triangle_violation(d) == 0.0);
}

TEST_CASE("metric graph round-trip and validation") {
  Rng rng(3);
  MetricGraph g;
  g.geometry = "circle";
  g.embedding_dim = 2;
  for (int i = 0; i < 3; ++i) {
    CVector raw(4);
    for (Eigen::Index k = 0; k < 4; ++k) raw[k] = Complex(rng.normal(), rng.normal());
    g.states.push_back(VectorState::normalized(raw));
    RVector b(2);
    b << rng.normal(), rng.normal();
    g.barycenter_coords.push_back(b);
  }
  g.dispersions = RVector::Constant(3, 0.25);
  g.degenerate = {0, 0, 1};
  g.distances = SymmetricDistances(3);
  g.distances.set(0, 1, 0.5);
  g.distances.set(0, 2, 0.75);
  g.distances.set(1, 2, 1.0);

  const std::string path = temp_path("pf_graph_roundtrip.json");
  save_graph(path, g, "{\"seed\":3}");
  auto h = load_graph(path);
  CHECK(h.geometry == g.geometry);
  CHECK(h.count() == 3);
  CHECK(h.degenerate[2] == 1);
  for (int i = 0; i < 3; ++i) {
    CHECK((h.states[i].vec() - g.states[i].vec()).norm() == 0.0);
    CHECK((h.barycenter_coords[i] - g.barycenter_coords[i]).norm() == 0.0);
  }
  CHECK((h.dispersions - g.dispersions).norm() == 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(h.distances(i, j) == g.distances(i, j));
  std::remove(path.c_str());

  SUBCASE("mismatched field lengths refuse to serialize") {
    g.dispersions = RVector::Zero(2);
    CHECK_THROWS_AS(save_graph(path, g), InputError);
  }
  SUBCASE("negative distance is invalid") {
    g.distances.set(0, 1, -0.1);
    CHECK_THROWS_AS(g.validate(), InputError);
  }
  SUBCASE("config must be JSON") {
    CHECK_THROWS_AS(save_graph(path, g, "not json"), InputError);
  }
}

TEST_CASE("distance CSV layout") {
  SymmetricDistances d(3);
  d.set(0, 1, 0.5);
  d.set(0, 2, 1.25);
  d.set(1, 2, 2.0);
  const std::string path = temp_path("pf_dist.csv");
  write_distance_csv(path, d, "{\"n\":3}");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# config {\"n\":3}");
  std::getline(in, line);
  CHECK(line == "0,1,2");
  std::getline(in, line);
  CHECK(line == "0,0.5,1.25");
  std::getline(in, line);
  CHECK(line == "0.5,0,2");
  std::getline(in, line);
  CHECK(line == "1.25,2,0");
  std::remove(path.c_str());
}

TEST_CASE("geometry names map to kinds") {
  CHECK(geometry_kind("circle") == GeometryKind::Circle);
  CHECK(geometry_kind("sphere") == GeometryKind::Sphere);
  CHECK(geometry_kind("sphere-dc-0.5") == GeometryKind::SphereDc);
  CHECK(geometry_kind("torus") == GeometryKind::Unknown);
}
