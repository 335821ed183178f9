#include "doctest.h"

#include "genus/error.hpp"
#include "genus/generators.hpp"
#include "genus/verify.hpp"
#include "test_support.hpp"

using namespace genus;

TEST_CASE("min_vertex_cut examples") {
  const auto c6 = sphere_cycle(6);
  const auto cut = min_vertex_cut(c6, {0}, {3});
  CHECK(cut.size == 2);
  CHECK(separates(c6, {0}, {3}, cut.cut));

  const auto k4 = tetrahedron();
  try {
    min_vertex_cut(k4, {0}, {1});
    FAIL("adjacent nodes were separated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSeparable);
  }

  const auto grid = planar_grid(4);
  const auto corner = min_vertex_cut(grid, {0}, {15});
  CHECK(corner.size == 2);
  CHECK(testing::brute_force_cut(grid, {0}, {15}, 3) == 2);

  CHECK_THROWS_AS(min_vertex_cut(grid, {}, {3}), Error);
  CHECK_THROWS_AS(min_vertex_cut(grid, {1, 2}, {2}), Error);
  CHECK_THROWS_AS(min_vertex_cut(grid, {0}, {16}), Error);
}

TEST_CASE("min_vertex_cut agrees with brute force") {
  std::vector<CombinatorialMap> maps{planar_grid(3), torus_grid(3), sphere_cycle(7), tetrahedron()};
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    maps.push_back(testing::random_map(seed, 5 + static_cast<int>(seed % 8), 2 + static_cast<int>(seed % 6)));
  }
  int compared = 0;
  for (const auto& map : maps) {
    const int n = map.node_count();
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        const auto brute = testing::brute_force_cut(map, {a}, {b}, 3);
        try {
          const auto cut = min_vertex_cut(map, {a}, {b});
          CHECK(separates(map, {a}, {b}, cut.cut));
          if (brute) {
            CHECK(cut.size == *brute);
            ++compared;
          } else {
            CHECK(cut.size > 3);
          }
        } catch (const Error& e) {
          CHECK(e.kind() == ErrorKind::NotSeparable);
          CHECK_FALSE(brute.has_value());
        }
      }
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("removable targets") {
  // Corner 0 of the 3 x 3 grid against almost everything; its neighbours are targets.
  const auto grid = planar_grid(3);
  CutOptions options;
  options.target_removable = true;
  const auto cut = min_vertex_cut(grid, {0}, {1, 3, 4, 5, 7, 8}, options);
  CHECK(cut.size == 2);
  std::vector<NodeId> rest;
  for (NodeId v : {1, 3, 4, 5, 7, 8}) {
    if (std::find(cut.cut.begin(), cut.cut.end(), v) == cut.cut.end()) rest.push_back(v);
  }
  CHECK(separates(grid, {0}, rest, cut.cut));
}

TEST_CASE("nonvanish_check examples") {
  const auto bouquet = nonvanish_check(canonical_polygon(1));
  CHECK(bouquet.passed);
  CHECK(bouquet.min_norm == doctest::Approx(1.0));
  const auto t3 = nonvanish_check(torus_grid(3));
  CHECK(t3.passed);
  CHECK(t3.exact_checked);
  CHECK(t3.exact_zero_count == 0);
  CHECK(t3.min_norm > 0.1);
  const auto planar = nonvanish_check(planar_grid(3));
  CHECK(planar.vacuous);
  CHECK(planar.passed);
}

TEST_CASE("nonvanish_check reports vanishing projections") {
  // The blob hangs off a cut vertex, so eta vanishes on it.
  const auto blob = generate("blob:2:torus_grid:2");
  NonvanishOptions options;
  options.throw_on_failure = false;
  const auto report = nonvanish_check(blob, options);
  CHECK_FALSE(report.passed);
  CHECK(report.exact_zero_count == 4);
  CHECK(report.witness.contains("edge"));
  try {
    nonvanish_check(blob);
    FAIL("no CheckFailed");
  } catch (const CheckFailed& e) {
    CHECK(nlohmann::json::parse(e.witness()).contains("edge"));
  }
}

TEST_CASE("separation_check examples") {
  const auto t4 = torus_grid(4);
  const auto basis = smooth_basis(t4);
  const EdgeVector full = basis.vectors.col(0) + 0.37 * basis.vectors.col(1);
  const auto report = separation_check(t4, full);
  CHECK(report.components.empty());
  CHECK(report.vanishing.size() + report.support.size() == static_cast<std::size_t>(t4.edge_count()));

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const EdgeVector h = forced_vanishing_circulation(t4, basis, static_cast<NodeId>(seed), seed);
    CHECK(std::abs(h[t4.rotation()[seed][0] / 2]) == 0.0);
    const auto r = separation_check(t4, h);
    CHECK(r.passed);
    for (const auto& c : r.components) CHECK(c.cut.size <= 16);
  }

  CHECK_THROWS_AS(separation_check(t4, EdgeVector::Zero(t4.edge_count())), Error);
  CHECK_THROWS_AS(separation_check(t4, coboundary(t4, 0)), Error);
  CHECK_THROWS_AS(forced_vanishing_circulation(planar_grid(3), smooth_basis(planar_grid(3)), 0, 1), Error);
}

TEST_CASE("separation_check finds vanishing blobs") {
  const auto blob = generate("blob:3:torus_grid:3");
  const auto basis = smooth_basis(blob);
  const auto report = separation_check(blob, basis.vectors.col(0));
  REQUIRE(report.components.size() == 1);
  // The 3 x 3 grid shares one node with the host, which is the whole cut.
  CHECK(report.components[0].nodes.size() == 8);
  CHECK(report.components[0].cut.size == 1);
  CHECK(report.passed);
  CHECK(report.bound == 16);
}

TEST_CASE("probe admissibility") {
  const auto t4 = torus_grid(4);
  CHECK(probe_separation(t4, {5}) == 4);
  CHECK_FALSE(probe_admissible(t4, {5}, 1));
  std::vector<NodeId> almost;
  for (NodeId v = 1; v < 16; ++v) almost.push_back(v);
  CHECK(probe_separation(t4, almost) == -1);
  CHECK_FALSE(probe_admissible(t4, almost, 1));
  CHECK(probe_admissible(t4, {5}, 0));
}

TEST_CASE("convergence_check examples") {
  ConvergenceOptions options;
  options.trials = 200;
  options.times = {0, 5, 20};
  const auto edge = convergence_check(single_edge(), options);
  CHECK(edge.passed);
  CHECK(edge.mean_error[0] == doctest::Approx(edge.initial_error));
  // One balancing round at a uniform endpoint kills the error.
  CHECK(edge.mean_error[1] <= 1e-30);

  options.times = {0, 10, 50};
  const auto t3 = convergence_check(torus_grid(3), options);
  CHECK(t3.passed);
  CHECK(t3.mean_error[0] == doctest::Approx(t3.initial_error));
  CHECK(t3.mean_error[1] <= t3.mean_error[0]);
  CHECK(t3.mean_error[2] <= t3.mean_error[1]);
  CHECK(t3.slack == doctest::Approx(5 / std::sqrt(200.0)));
  options.edge = 99;
  CHECK_THROWS_AS(convergence_check(torus_grid(3), options), Error);
}

TEST_CASE("report serialisation") {
  const auto report = nonvanish_check(torus_grid(2));
  const auto doc = to_json(report);
  CHECK(doc["passed"] == true);
  CHECK(doc["exact_checked"] == true);
  const auto cut = to_json(min_vertex_cut(sphere_cycle(6), {0}, {3}));
  CHECK(cut["size"] == 2);
}
