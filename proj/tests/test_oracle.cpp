#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "common.hpp"
#include "uavrelay/dualhop.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/multihop.hpp"
#include "uavrelay/oracle.hpp"

using namespace uavrelay;

namespace {
double sirs(const Scenario& s, double x, double h) { return std::min(sir_dual_uav(s, x, h), sir_dual_rx(s, x, h)); }
}  // namespace

TEST_CASE("2x2 grid is the best corner") {
  std::mt19937_64 g(1);
  for (int i = 0; i < 50; ++i) {
    auto s = testkit::random_dual(g);
    auto r = grid_search_dual(s, {2, 2});
    double best = std::max({sirs(s, 0, s.h_min), sirs(s, 0, s.h_max), sirs(s, s.D, s.h_min), sirs(s, s.D, s.h_max)});
    CHECK(r.sir == best);
  }
}

TEST_CASE("nested refinement never lowers the maximum") {
  std::mt19937_64 g(2);
  for (int i = 0; i < 20; ++i) {
    auto s = testkit::random_dual(g);
    double prev = 0;
    for (std::size_t n : {3u, 5u, 9u, 17u, 33u, 65u}) {
      auto r = grid_search_dual(s, {n, n});
      CHECK(r.sir >= prev);
      prev = r.sir;
    }
  }
}

TEST_CASE("normalized case peaks at one half") {
  auto s = testkit::special_case(2, 1);
  auto r = grid_search_dual(s, {301, 301});
  CHECK(std::abs(r.sir - 0.5) <= r.slack);
  CHECK(std::abs(r.x - 1) <= 2.0 / 300 + 1e-12);
  CHECK(std::abs(r.h - 1) <= 1.5 / 300 * 2 + 1e-12);
}

TEST_CASE("parallel and serial grid kernels agree bit for bit") {
  std::mt19937_64 g(3);
  for (int i = 0; i < 10; ++i) {
    auto s = testkit::random_dual(g);
    auto a = grid_search_dual(s, {157, 91}), b = grid_search_dual_serial(s, {157, 91});
    CHECK(a.x == b.x);
    CHECK(a.h == b.h);
    CHECK(a.sir == b.sir);
    CHECK(a.slack == b.slack);
  }
  CHECK_THROWS_AS(grid_search_dual(testkit::special_case(2, 1), {1, 5}), DomainError);
}

TEST_CASE("exhaustive search basics") {
  auto s = testkit::fifth();
  s.D = 60;
  s.msi_x = 30;
  s.msi_y = 40;
  auto r = exhaustive_min_uavs(PlannerKind::deterministic, s, 20, 1e-9, 4, 16);
  CHECK(r.found);
  CHECK(r.n == 1);
  CHECK_THROWS_AS(exhaustive_min_uavs(PlannerKind::deterministic, s, 20, 1.0, 9, 16), DomainError);
  CHECK_THROWS_AS(exhaustive_min_uavs(PlannerKind::stochastic, s, 20, 1.0, 4, 16), DomainError);

  // unreachable target: the answer is unknown, not a number
  auto none = exhaustive_min_uavs(PlannerKind::deterministic, s, 20, 1e9, 3, 8);
  CHECK(!none.found);

  // the witness placement really meets the target
  double gamma = feasibility_bound(s, 20) * 0.3;
  auto w = exhaustive_min_uavs(PlannerKind::deterministic, s, 20, gamma, 8, 32);
  REQUIRE(w.found);
  auto rep = sir_multihop(s, Placement::from_positions(w.positions, s.D, std::vector<double>(w.n, 20)));
  CHECK(rep.system_sir >= gamma * (1 - 1e-9));
}

TEST_CASE("random baseline is reproducible") {
  auto s = testkit::fifth();
  auto a = random_placement_baseline(s, 5, 1, 42), b = random_placement_baseline(s, 5, 1, 42);
  CHECK(a.samples == b.samples);
  CHECK(a.min == a.max);
  auto p1 = random_placement(s, 5, 42, 0), p2 = random_placement(s, 5, 42, 0);
  CHECK(p1.hop_distances == p2.hop_distances);
  CHECK(random_placement(s, 5, 43, 0).hop_distances != p1.hop_distances);

  auto par = random_placement_baseline(s, 8, 500, 7), ser = random_placement_baseline_serial(s, 8, 500, 7);
  CHECK(par.samples == ser.samples);
  CHECK(par.mean == ser.mean);
  CHECK(par.min <= par.mean);
  CHECK(par.mean <= par.max);

  // d_min honored between UAVs
  s.d_min = 60;
  auto tight = random_placement(s, 8, 9, 3);
  for (std::size_t k = 1; k + 1 < tight.hop_distances.size(); ++k) CHECK(tight.hop_distances[k] >= 60);
  CHECK_THROWS_AS(random_placement_baseline(s, 5, 0, 1), DomainError);
}

TEST_CASE("band altitude is drawn when none is fixed") {
  auto s = testkit::fifth();
  s.h_min = 10;
  s.h_max = 50;
  bool varied = false;
  double first = random_placement(s, 3, 1, 0).altitudes[0];
  for (std::size_t t = 1; t < 20; ++t) {
    double h = random_placement(s, 3, 1, t).altitudes[0];
    CHECK(h >= 10);
    CHECK(h <= 50);
    varied = varied || h != first;
  }
  CHECK(varied);
}

TEST_CASE("planners dominate the random baseline") {
  std::mt19937_64 g(4);
  for (int i = 0; i < 10; ++i) {
    auto s = testkit::random_dual(g);
    double h = s.h_min;
    double x = optimal_x_fixed_h(s, h);
    BaselineOptions o;
    o.altitude = h;
    auto b = random_placement_baseline(s, 1, 1000, 100 + i, o);
    CHECK(sirs(s, x, h) >= b.max);
  }
  auto s = testkit::fifth();
  for (std::size_t n : {5u, 20u}) {
    auto d = distributed_max_sir(s, 20, n, 0.1);
    BaselineOptions o;
    o.altitude = 20;
    auto b = random_placement_baseline(s, n, 1000, 5, o);
    CHECK(sir_multihop(s, d.placement).system_sir >= b.max);
  }
}

TEST_CASE("centralized search brackets the design threshold") {
  auto s = testkit::fifth();
  for (std::size_t n : {3u, 10u}) {
    double g = centralized_max_gamma(s, 20, n);
    CHECK(design_min_uavs(s, 20, g).uav_count() <= n);
    CHECK(design_min_uavs(s, 20, g * (1 + 1e-6)).uav_count() > n);
  }
}
