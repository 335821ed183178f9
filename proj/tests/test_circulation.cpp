#include <cmath>
#include <random>

#include "doctest.h"

#include "genus/circulation.hpp"
#include "genus/error.hpp"
#include "genus/generators.hpp"
#include "test_support.hpp"

using namespace genus;

namespace {

CombinatorialMap triangle() { return sphere_cycle(3); }

EdgeVector unit(int m, EdgeId e) {
  EdgeVector x = EdgeVector::Zero(m);
  x[e] = 1.0;
  return x;
}

EdgeVector random_vector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  EdgeVector x(m);
  for (int i = 0; i < m; ++i) x[i] = normal(rng);
  return x;
}

// (L + J) pi = rhs checked entrywise from the edge list, not via the library.
void check_harmonic(const CombinatorialMap& map, const HarmonicPotential& pi) {
  const int n = map.node_count();
  Eigen::VectorXd residual = Eigen::VectorXd::Constant(n, pi.values.sum());
  for (const auto& [t, h] : map.edges()) {
    const double flow = pi.values[h] - pi.values[t];
    residual[h] += flow;
    residual[t] -= flow;
  }
  residual[pi.pole_b] -= 1.0;
  residual[pi.pole_a] += 1.0;
  CHECK(residual.cwiseAbs().maxCoeff() <= 1e-10 * n);
  CHECK(std::abs(pi.values.sum()) <= 1e-12);
}

}  // namespace

TEST_CASE("harmonic_potential examples") {
  const auto k3 = triangle();
  const auto pi = harmonic_potential(k3, 0, 1);
  CHECK(pi.values[0] == doctest::Approx(-1.0 / 3));
  CHECK(pi.values[1] == doctest::Approx(1.0 / 3));
  CHECK(pi.values[2] == doctest::Approx(0.0).epsilon(1e-12));
  check_harmonic(k3, pi);

  const auto edge = single_edge();
  const auto pe = harmonic_potential(edge, edge.tail(0), edge.head(0));
  CHECK(pe.values[edge.tail(0)] == doctest::Approx(-0.5));
  CHECK(pe.values[edge.head(0)] == doctest::Approx(0.5));

  const auto grid = torus_grid(3);
  const auto ab = harmonic_potential(grid, 2, 7);
  const auto ba = harmonic_potential(grid, 7, 2);
  CHECK((ab.values + ba.values).cwiseAbs().maxCoeff() < 1e-14);
  check_harmonic(grid, ab);
  CHECK_THROWS_AS(harmonic_potential(grid, 3, 3), Error);
  CHECK_THROWS_AS(harmonic_potential(grid, 0, 9), Error);
}

TEST_CASE("harmonic potentials on random maps") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto map = testing::random_map(seed, 2 + static_cast<int>(seed % 8), static_cast<int>(seed % 5));
    check_harmonic(map, harmonic_potential(map, 0, map.node_count() - 1));
    if (map.face_count() > 1) {
      const auto star = dual_harmonic_potential(map, 0, 1);
      check_harmonic(dual(map), star);
    }
  }
}

TEST_CASE("decompose examples") {
  std::mt19937_64 rng(11);
  const auto grid = planar_grid(3);
  const auto x = random_vector(rng, grid.edge_count());
  CHECK(decompose(grid, x).x3.cwiseAbs().maxCoeff() < 1e-12);

  const auto torus = canonical_polygon(1);
  const auto d = decompose(torus, unit(2, 0));
  CHECK(d.x3 == unit(2, 0));
  CHECK(d.x1.isZero());
  CHECK(d.x2.isZero());

  const auto t3 = torus_grid(3);
  const EdgeVector dv = coboundary(t3, 4);
  const auto dd = decompose(t3, dv);
  CHECK((dd.x1 - dv).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(dd.x2.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(dd.x3.cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(decompose(t3, EdgeVector::Zero(3)), Error);
}

TEST_CASE("decomposition properties") {
  std::mt19937_64 rng(5);
  auto corpus = standard_corpus();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    corpus.emplace_back("random", testing::random_map(seed, 3 + static_cast<int>(seed), static_cast<int>(seed)));
  }
  for (const auto& [name, map] : corpus) {
    CAPTURE(name);
    const CirculationSpace space(map);
    const Eigen::MatrixXd oracle = testing::oracle_smooth_projector(map);
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_vector(rng, map.edge_count());
      const auto d = space.decompose(x);
      const double n2 = x.squaredNorm();
      CHECK((x - d.x1 - d.x2 - d.x3).norm() <= 1e-9 * x.norm());
      CHECK(std::abs(d.x1.dot(d.x2)) <= 1e-9 * n2);
      CHECK(std::abs(d.x1.dot(d.x3)) <= 1e-9 * n2);
      CHECK(std::abs(d.x2.dot(d.x3)) <= 1e-9 * n2);
      // x1 in A, x2 in B: x3 and x2 are circulations, x3 and x1 are dual circulations.
      CHECK((space.node_incidence().transpose() * (d.x2 + d.x3)).norm() <= 1e-9 * x.norm());
      CHECK((space.face_incidence().transpose() * (d.x1 + d.x3)).norm() <= 1e-9 * x.norm());
      CHECK((d.x3 - oracle * x).cwiseAbs().maxCoeff() <= 1e-9 * x.norm());
      const auto p = space.project_smooth(x);
      CHECK((space.project_smooth(p) - p).cwiseAbs().maxCoeff() <= 1e-12 * x.norm());
    }
    const MapStats s = map.stats();
    CHECK(numerical_rank(space.node_incidence(), 1e-9) == s.n - 1);
    CHECK(numerical_rank(space.face_incidence(), 1e-9) == s.f - 1);
    CHECK((space.node_incidence().transpose() * space.face_incidence()).isZero());
    CHECK((space.node_laplacian() * Eigen::VectorXd::Ones(s.n)).isZero());
    CHECK((space.face_laplacian() * Eigen::VectorXd::Ones(s.f)).isZero());
  }
}

TEST_CASE("project_smooth examples") {
  const auto grid = planar_grid(4);
  for (EdgeId e = 0; e < grid.edge_count(); ++e) CHECK(project_smooth(grid, unit(grid.edge_count(), e)).norm() < 1e-12);
  const auto torus = canonical_polygon(1);
  CHECK(project_smooth(torus, unit(2, 1)) == unit(2, 1));
}

TEST_CASE("closed form matches the projection") {
  auto corpus = standard_corpus();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    corpus.emplace_back("random", testing::random_map(seed, 2 + static_cast<int>(seed), 2 + static_cast<int>(seed)));
  }
  for (const auto& [name, map] : corpus) {
    CAPTURE(name);
    const CirculationSpace space(map);
    for (EdgeId b = 0; b < map.edge_count(); ++b) {
      const EdgeVector eta = space.smooth_projection_of_edge(b);
      const EdgeVector closed = smooth_projection_closed_form(map, b);
      CHECK((eta - closed).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("smooth_basis dimension and properties") {
  CHECK(smooth_basis(planar_grid(3)).dimension == 0);
  CHECK(smooth_basis(torus_grid(3)).dimension == 2);
  CHECK(smooth_basis(canonical_polygon(2)).dimension == 4);
  for (const auto& [name, map] : standard_corpus()) {
    CAPTURE(name);
    const CirculationSpace space(map);
    const SmoothBasis basis = smooth_basis(space);
    CHECK(basis.dimension == 2 * map.genus());
    REQUIRE(basis.vectors.cols() == basis.dimension);
    const Eigen::MatrixXd gram = basis.vectors.transpose() * basis.vectors;
    CHECK(testing::max_abs(gram - Eigen::MatrixXd::Identity(basis.dimension, basis.dimension)) < 1e-12);
    CHECK(testing::max_abs(space.node_incidence().transpose() * basis.vectors) <= 1e-9);
    CHECK(testing::max_abs(space.face_incidence().transpose() * basis.vectors) <= 1e-9);
    const ProbeSet probe = neighbourhood_probe(map, 0);
    CHECK(basis.restrict_to(probe).rows() == probe.m0());
  }
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto map = testing::random_map(seed, 1 + static_cast<int>(seed % 6), static_cast<int>(seed % 10));
    CHECK(smooth_basis(map).dimension == 2 * map.genus());
  }
}

TEST_CASE("smooth basis rank mismatch is reported") {
  const auto map = torus_grid(3);
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(map.edge_count(), map.edge_count());
  try {
    smooth_basis_from_projections(map, eta);
    FAIL("accepted a rank-deficient projection set");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankMismatch);
  }
}

TEST_CASE("eigengap examples") {
  const auto edge = eigengap(single_edge());
  CHECK(edge.lambda_node == doctest::Approx(1.0));
  CHECK(edge.mu == doctest::Approx(1.0));
  const auto k4 = eigengap(tetrahedron());
  CHECK(k4.lambda_node == doctest::Approx(1.0 / 3));
  // The planar K4 is self-dual, so the face gap equals the node gap.
  CHECK(k4.lambda_face == doctest::Approx(1.0 / 3));
  for (const auto& [name, map] : standard_corpus()) {
    CAPTURE(name);
    const auto gap = eigengap(map);
    CHECK(gap.mu > 0.0);
    CHECK(gap.mu <= 1.0 + 1e-12);
    CHECK(gap.mu == std::min(gap.lambda_node, gap.lambda_face));
  }
}

TEST_CASE("eigengap agrees with an independent assembly") {
  // A = (1/n) sum_v delta_v delta_v^T / d_v, smallest positive eigenvalue.
  for (const char* spec : {"torus_grid:3", "planar_grid:3", "subdivided:canonical_polygon:1"}) {
    CAPTURE(spec);
    const auto map = generate(spec);
    const Eigen::MatrixXd m = testing::incidence_matrix(map, false);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(map.edge_count(), map.edge_count());
    for (NodeId v = 0; v < map.node_count(); ++v) {
      const double d = m.col(v).squaredNorm();
      if (d > 0) a += m.col(v) * m.col(v).transpose() / d;
    }
    a /= map.node_count();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    double smallest = 1.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double ev = solver.eigenvalues()[i];
      if (ev > 1e-9 * solver.eigenvalues().maxCoeff()) smallest = std::min(smallest, ev);
    }
    CHECK(eigengap(map).lambda_node == doctest::Approx(smallest).epsilon(1e-9));
  }
}

TEST_CASE("smooth_representative examples") {
  const auto t3 = torus_grid(3);
  const SmoothBasis basis = smooth_basis(t3);
  const EdgeVector smooth = basis.vectors.col(0);
  CHECK((smooth_representative(t3, smooth) - smooth).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(smooth_representative(t3, boundary(t3, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(smooth_representative(t3, coboundary(t3, 0)), Error);

  // Two parallel meridians: the vertical cycles at columns 0 and 1.
  auto meridian = [&](int column) {
    EdgeVector phi = EdgeVector::Zero(t3.edge_count());
    for (EdgeId e = 0; e < t3.edge_count(); ++e) {
      const NodeId t = t3.tail(e), h = t3.head(e);
      if (t % 3 == column && h % 3 == column) phi[e] = (h == (t + 3) % 9) ? 1.0 : -1.0;
    }
    return phi;
  };
  const EdgeVector phi0 = meridian(0), phi1 = meridian(1);
  REQUIRE(phi0.cwiseAbs().sum() == 3.0);
  REQUIRE((t3.edge_count() > 0));
  const EdgeVector s0 = smooth_representative(t3, phi0);
  const EdgeVector s1 = smooth_representative(t3, phi1);
  CHECK(s0.norm() > 0.1);
  CHECK((s0 - s1).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((smooth_representative(t3, s0) - s0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("numerical rank") {
  Eigen::MatrixXd a(3, 3);
  a << 1, 0, 0, 0, 1e-12, 0, 0, 0, 0;
  CHECK(numerical_rank(a, 1e-9) == 1);
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 4), 1e-9) == 4);
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(2, 2), 1e-9) == 0);
}
