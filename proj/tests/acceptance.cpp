// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "common.hpp"
#include "uavrelay/cli.hpp"
#include "uavrelay/dualhop.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/multihop.hpp"
#include "uavrelay/multisource.hpp"
#include "uavrelay/oracle.hpp"
#include "uavrelay/stochastic.hpp"

using namespace uavrelay;
using testkit::log_uni;
using testkit::uni;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

double sirs(const Scenario& s, double x, double h) { return std::min(sir_dual_uav(s, x, h), sir_dual_rx(s, x, h)); }

Scenario small_instance(std::mt19937_64& g) {
  Scenario s;
  s.d_min = uni(g, 2, 10);
  s.D = s.d_min * uni(g, 5, 20);
  s.msi_x = uni(g, 0, s.D);
  s.msi_y = uni(g, 0, s.D);
  s.p_tx = log_uni(g, 0.5, 50);
  s.p_uav = log_uni(g, 0.5, 50);
  s.p_msi = log_uni(g, 0.5, 50);
  s.h_min = s.h_max = uni(g, 2, 20);
  s.channel = testkit::table_channel();
  return s;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// 1
Verdict normalized_identity() {
  std::mt19937_64 g(101);
  double worst_disc = 0, worst_lambda = 0;
  for (int i = 0; i < 1000; ++i) {
    double D = uni(g, 1, 2000), X = uni(g, 0, D), x = uni(g, 0, D);
    auto s = testkit::special_case(D, X);
    double want = 4 * x * x * (D - X) * (D - X);
    double got = locus_coefficients(s, x).disc;
    if (want > 0) worst_disc = std::max(worst_disc, std::abs(got - want) / want);
    double lp = -x * x + 2 * x * D - D * X;
    auto L = locus_lambda(s, x);
    if (!L.real) return {false, "discriminant reported negative"};
    // relative to D^2 when lambda itself crosses zero
    worst_lambda = std::max(worst_lambda, std::abs(L.plus - lp) / std::max(std::abs(lp), 1e-12 * D * D));
  }
  return {worst_disc <= 1e-9 && worst_lambda <= 1e-9,
          fmt("worst rel error disc %.2e, lambda+ %.2e", worst_disc, worst_lambda)};
}

// 2
Verdict theorems_vs_grids() {
  std::mt19937_64 g(102);
  int bad_joint = 0, bad_x = 0, bad_h = 0;
  for (int i = 0; i < 200; ++i) {
    auto s = testkit::random_dual(g);
    s.p_tx = log_uni(g, 0.1, 100);
    auto opt = optimal_position(s);
    auto grid = grid_search_dual(s, {500, 500});
    if (opt.report.system_sir < grid.sir - grid.slack) ++bad_joint;
    double h = uni(g, s.h_min, s.h_max), x = uni(g, 0, s.D);
    auto gx = grid_search_x(s, h, 10000);
    if (sirs(s, optimal_x_fixed_h(s, h), h) < gx.sir - gx.slack - 1e-12 * gx.sir) ++bad_x;
    auto gh = grid_search_h(s, x, 10000);
    if (sirs(s, x, optimal_h_fixed_x(s, x)) < gh.sir - gh.slack - 1e-12 * gh.sir) ++bad_h;
  }
  return {bad_joint + bad_x + bad_h == 0,
          fmt("200 scenarios; below grid: joint %g, fixed-h %g, fixed-x %g", bad_joint, bad_x, bad_h)};
}

// 3
Verdict case_vs_roots() {
  std::mt19937_64 g(103);
  int checked = 0, bad = 0, filtered = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = testkit::random_dual(g);
    double h = uni(g, s.h_min, s.h_max);
    auto c = classify_case_fixed_h(s, h);
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::abs(b); };
    if (near(c.ratio, c.c1) || (c.has_c2 && near(c.ratio, c.c2)) || (c.has_c3 && near(c.ratio, c.c3)) ||
        near(c.psi_x, s.D)) {
      ++filtered;
      continue;
    }
    auto n = quartic_roots_fixed_h(s, h).size();
    ++checked;
    if ((c.case_id == 1 || c.case_id == 3) && n != 0) ++bad;
    if (c.case_id == 2 && n != 1) ++bad;
    if (c.case_id == 4 && n < 1) ++bad;
  }
  return {bad == 0, fmt("%g pairs checked, %g on the margin, %g disagreements", checked, filtered, bad)};
}

// 4
Verdict design_vs_exhaustive() {
  std::mt19937_64 g(104);
  int compared = 0, bad_valid = 0, bad_min = 0, margin = 0;
  for (int i = 0; i < 2000 && compared < 50; ++i) {
    auto s = small_instance(g);
    double h = s.h_min, gamma = feasibility_bound(s, h) * uni(g, 0.05, 0.9);
    DesignResult d;
    try {
      d = design_min_uavs(s, h, gamma);
      // a 5% change in the target that moves N means the lattice cannot settle it
      if (design_min_uavs(s, h, gamma * 1.05).uav_count() != d.uav_count()) {
        ++margin;
        continue;
      }
    } catch (const InfeasibleTarget&) {
      continue;
    }
    ++compared;
    for (double v : sir_multihop(s, d.placement).per_link)
      if (v < gamma * (1 - 1e-9)) ++bad_valid;
    auto ex = exhaustive_min_uavs(PlannerKind::deterministic, s, h, gamma, 8, 64);
    bool match = ex.found ? ex.n == d.uav_count() : d.uav_count() > 8;
    if (!match) ++bad_min;
  }
  return {compared == 50 && bad_valid == 0 && bad_min == 0,
          fmt("%g instances, %g link violations, %g count mismatches, %g skipped on the 5%% margin", compared,
              bad_valid, bad_min, margin)};
}

// 5
Verdict distributed_guarantee() {
  std::mt19937_64 g(105);
  int compared = 0, bad = 0, bad_iters = 0, fewer = 0;
  for (int i = 0; i < 2000 && compared < 30; ++i) {
    auto s = small_instance(g);
    std::size_t n = 1 + std::size_t(uni(g, 0, 4));
    if (double(n - 1) * s.d_min > s.D) continue;
    DistributedResult r;
    try {
      r = distributed_max_sir(s, s.h_min, n, 0.1);
    } catch (const InfeasibleTarget&) {
      continue;
    }
    double best = centralized_max_gamma(s, s.h_min, n);
    // the sweep admits fewer than N UAVs; the algorithm always flies exactly N
    if (design_min_uavs(s, s.h_min, best).uav_count() != n) {
      ++fewer;
      continue;
    }
    ++compared;
    if (r.gamma_final < best - 0.1 - 1e-9 * best) ++bad;
    // the first round is iteration zero; the bound counts the decrements after it
    if (r.trace.iterations.size() - 1 > std::size_t(std::floor(r.gamma0 / 0.1))) ++bad_iters;
  }
  auto s = testkit::fifth();
  std::vector<double> finals;
  for (std::size_t n : {10u, 25u, 50u}) finals.push_back(distributed_max_sir(s, 20, n, 0.1).gamma_final);
  bool mono = finals[0] <= finals[1] && finals[1] <= finals[2];
  return {compared == 30 && bad == 0 && bad_iters == 0 && mono,
          fmt("%g instances, %g below optimum - eps, %g over the iteration bound, %g skipped (optimum uses fewer UAVs)",
              compared, bad, bad_iters, fewer) +
              fmt("; reference scenario gamma_final %.4g, %.4g, %.4g for N = 10, 25, 50", finals[0], finals[1],
                  finals[2])};
}

// 6
Verdict figure_shapes() {
  const double gamma = std::pow(10.0, 0.5);
  auto n_at = [&](double X, double p_u) { return design_min_uavs(testkit::fourth(X, 400, p_u), 20, gamma).uav_count(); };
  std::size_t left = n_at(100, 1), mid = n_at(500, 1), right = n_at(900, 1);
  bool a = left > mid && right > mid;

  std::vector<std::size_t> ns;
  for (double p : {0.5, 1.0, 2.0, 4.0}) ns.push_back(n_at(500, p));
  bool b = ns[0] >= ns[1] && ns[1] >= ns[2] && ns[2] >= ns[3];

  auto s = testkit::fifth();
  s.msi_y = 150;
  s.h_min = 10;
  s.h_max = 500;
  std::vector<double> hs, v;
  for (double h = 10; h <= 500; h += 35) {
    hs.push_back(h);
    v.push_back(distributed_max_sir(s, h, 50, 0.1).gamma_final);
  }
  std::size_t peak = std::max_element(v.begin(), v.end()) - v.begin();
  bool c = v[1] > v[0] && v[v.size() - 1] < v[v.size() - 2];

  return {a && b && c,
          std::string("(a) ") + (a ? "pass" : "FAIL") + fmt(": N = %g / %g / %g at X = 100 / 500 / 900 m", left, mid, right) +
              "; (b) " + (b ? "pass" : "FAIL") +
              fmt(": N = %g, %g, %g, %g", ns[0], ns[1], ns[2], ns[3]) + " for p_u = 0.5, 1, 2, 4 W; (c) " +
              (c ? "pass" : "FAIL") + fmt(": peak %.4g at h = %g m", v[peak], hs[peak])};
}

// 7
Verdict refinement_gain() {
  auto s = testkit::fifth();
  s.msi_y = 150;
  s.h_min = 10;
  s.h_max = 500;
  auto start = distributed_max_sir(s, 220, 50, 0.1).placement;
  RefineOptions o;
  o.eps_h = 10;
  o.iterations = 30;
  auto r = refine_altitudes(s, start, o);
  bool mono = true;
  for (std::size_t i = 1; i < r.sir_history.size(); ++i) mono = mono && r.sir_history[i] >= r.sir_history[i - 1];
  double gain = r.sir_history.back() / r.sir_history.front() - 1;
  return {mono && gain >= 0.15, std::string(mono ? "monotone" : "NOT monotone") +
                                    fmt(", SIR_S %.4g -> %.4g, gain %.1f%% (floor 15%%)", r.sir_history.front(),
                                        r.sir_history.back(), 100 * gain)};
}

// 8
Verdict beta_closed_form() {
  auto reference = [](double a, double b, double i_max) {
    boost::math::quadrature::tanh_sinh<double> q;
    const double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto lo = [&](double y) { return std::exp((a - 2) * std::log(y) + (b - 1) * std::log1p(-y) - lb); };
    auto hi = [&](double t) { return std::exp((a - 2) * std::log(-std::expm1(std::log(t) / b)) - lb) / b; };
    return (q.integrate(lo, 0.0, 0.5) + q.integrate(hi, 0.0, std::pow(2.0, -b))) / i_max;
  };
  std::mt19937_64 g(108);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    double a = uni(g, 1.1, 20), b = uni(g, 0.2, 20), im = log_uni(g, 0.01, 100);
    double want = reference(a, b, im);
    worst = std::max(worst, std::abs(beta_upsilon(a, b, im) - want) / want);
  }
  bool exact = beta_upsilon(2, 1, 1) == 2 && beta_upsilon(3, 1, 1) == 1.5;
  return {worst <= 1e-6 && exact, fmt("worst rel error %.2e over 50 draws; (2,1) -> %g, (3,1) -> %g", worst,
                                      beta_upsilon(2, 1, 1), beta_upsilon(3, 1, 1))};
}

// 9
Verdict stochastic_minimality() {
  std::mt19937_64 g(109);
  int compared = 0, bad = 0;
  for (int i = 0; i < 2000 && compared < 20; ++i) {
    Scenario s;
    s.D = uni(g, 100, 300);
    s.h_min = s.h_max = 10;
    s.d_min = uni(g, 1, 5);
    s.p_tx = log_uni(g, 0.5, 5);
    s.channel = ChannelParams::from_coefficients(1.0, 1.0, 1.0);
    auto m = InterferenceModel::beta({{0, uni(g, 1.5, 6), uni(g, 0.5, 5)}}, log_uni(g, 1e-5, 1e-3));
    double gamma = uni(g, 2, 30);
    StochasticDesign d;
    try {
      d = design_min_uavs_stochastic(m, s, 10, gamma);
      if (d.uav_count() > 6) continue;
      if (design_min_uavs_stochastic(m, s, 10, gamma * 1.05).uav_count() != d.uav_count()) continue;
    } catch (const InfeasibleTarget&) {
      continue;
    }
    auto ex = exhaustive_min_uavs(PlannerKind::stochastic, s, 10, gamma, 8, 64, &m);
    ++compared;
    if (!ex.found || ex.n != d.uav_count()) ++bad;
  }
  return {compared == 20 && bad == 0, fmt("%g i.i.d. instances, %g mismatches", compared, bad)};
}

// 10
Verdict baseline_dominance() {
  int below = 0, points = 0;
  double total_gain = 0;
  for (auto [pt, pu] : {std::pair{1.0, 1.0}, {5.0, 2.0}}) {
    Scenario s;
    s.D = 35;
    s.msi_x = 30;
    s.msi_y = 30;
    s.p_msi = 20;
    s.p_tx = pt;
    s.p_uav = pu;
    s.h_min = 10;
    s.h_max = 50;
    s.channel = testkit::table_channel();
    for (double h = 10; h <= 50; h += 5) {
      double planner = sirs(s, optimal_x_fixed_h(s, h), h);
      BaselineOptions o;
      o.altitude = h;
      auto b = random_placement_baseline(s, 1, 1000, 2024 + std::uint64_t(h), o);
      if (planner < b.max) ++below;
      total_gain += planner / b.mean - 1;
      ++points;
    }
  }
  double mean_gain = total_gain / points;
  return {below == 0 && mean_gain > 0,
          fmt("%g altitude points, %g below the best random draw, mean gain over the random mean %.1f%%", points,
              below, 100 * mean_gain)};
}

// 11
Verdict msi_fit() {
  Scenario s = testkit::fifth();
  s.D = 100;
  s.msi_x = 50;
  s.msi_y = 40;
  s.h_min = 10;
  s.h_max = 50;
  auto one = fit_hypothetical_msi({{30, 20, 4}}, s);
  bool identity = one.residual <= 1e-9 * one.scale && std::abs(one.x_h - 30) < 1e-6 && std::abs(one.y_h - 20) < 1e-6 &&
                  std::abs(one.p_h - 4) < 1e-6;
  auto pair = fit_hypothetical_msi({{70, 10, 2}, {70, 10, 2}}, s);
  bool summed = std::abs(pair.p_h - 4) < 1e-6 && pair.residual <= 1e-9 * pair.scale;
  bool shrinking = true;
  double prev = 1e300;
  for (double sep : {40.0, 30.0, 20.0, 10.0, 5.0}) {
    auto m = fit_hypothetical_msi({{50 - sep / 2, 20, 3}, {50 + sep / 2, 20, 3}}, s);
    shrinking = shrinking && m.residual < prev;
    prev = m.residual;
  }
  return {identity && summed && shrinking,
          fmt("single-source residual/scale %.1e, pair power %.6g, homotopy ", one.residual / one.scale, pair.p_h) +
              (shrinking ? "strictly decreasing" : "NOT decreasing")};
}

// 12
Verdict replay_identity() {
  const std::string data = UAV_TEST_DATA;
  const std::string fifth = data + "/fifth.yaml", special = data + "/special.yaml";
  const std::string beta = data + "/beta_field.json", sources = data + "/sources.yaml";
  std::vector<std::vector<std::string>> cmds = {
      {"dualhop-opt", "--scenario", special},
      {"dualhop-locus", "--scenario", special, "--samples", "50"},
      {"multihop-design", "--scenario", fifth, "--gamma", "5db"},
      {"multihop-design", "--scenario", fifth, "--gamma-sweep", "0db:6db:4"},
      {"multihop-distributed", "--scenario", fifth, "--n-uavs", "10", "--epsilon", "0.1"},
      {"refine-altitudes", "--scenario", fifth, "--n-uavs", "5", "--iterations", "3"},
      {"stochastic-single", "--scenario", beta, "--epsilon", "0.5"},
      {"stochastic-design", "--scenario", beta, "--gamma", "x100"},
      {"stochastic-distributed", "--scenario", beta, "--n-uavs", "40", "--epsilon", "0.5"},
      {"msi-fit", "--scenario", sources, "--grid", "32x8"},
      {"oracle-grid", "--scenario", special, "--grid", "50x50"},
      {"oracle-exhaustive", "--scenario", special, "--gamma", "x0.1", "--n-max", "3", "--per-hop-grid", "8"},
      {"baseline-random", "--scenario", fifth, "--n-uavs", "5", "--trials", "200", "--seed", "7"},
      {"baseline-random", "--scenario", special, "--n-uavs", "1", "--trials", "200", "--seed", "8"},
      {"sweep", "--scenario", fifth, "--vary", "p_uav_w=0.5:2:3", "--inner", "multihop-design --gamma x2"},
  };
  int ok = 0, failed_run = 0, mismatch = 0;
  std::string first_problem;
  const auto dir = std::filesystem::temp_directory_path();
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto first = cli::run(cmds[i]);
    if (first.exit_code != cli::kExitOk) {
      ++failed_run;
      if (first_problem.empty()) first_problem = cmds[i][0] + ": " + first.record["error"].dump();
      continue;
    }
    auto path = (dir / ("uavplan_accept_" + std::to_string(i) + ".json")).string();
    std::ofstream(path) << first.record.dump(2);
    auto again = cli::run({"replay", path});
    std::filesystem::remove(path);
    if (again.exit_code == cli::kExitOk && again.csv == first.csv) {
      ++ok;
    } else {
      ++mismatch;
      if (first_problem.empty()) first_problem = cmds[i][0] + " replay differs";
    }
  }
  std::string detail = fmt("%g of %g records replayed identically", ok, double(cmds.size()));
  if (!first_problem.empty()) detail += "; first problem: " + first_problem;
  return {ok == int(cmds.size()), detail};
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;  // 0 when unconstrained
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "normalized-case identities", 1, normalized_identity},
      {2, "closed-form optima vs grid oracles", 60, theorems_vs_grids},
      {3, "case label vs quartic root count", 0, case_vs_roots},
      {4, "multi-hop design validity and minimality", 120, design_vs_exhaustive},
      {5, "distributed algorithm guarantee", 0, distributed_guarantee},
      {6, "figure shapes", 0, figure_shapes},
      {7, "altitude refinement gain", 300, refinement_gain},
      {8, "Beta closed form", 0, beta_closed_form},
      {9, "stochastic design minimality", 0, stochastic_minimality},
      {10, "random baseline dominance", 0, baseline_dominance},
      {11, "hypothetical MSI fit", 0, msi_fit},
      {12, "replay reproducibility", 0, replay_identity},
  };
  int failures = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_s == 0 || secs < c.limit_s;
    bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str(), secs,
                in_time ? "" : ", over the time limit");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(all.size()) - failures, all.size());
  return failures ? 1 : 0;
}
