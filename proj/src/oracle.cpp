#include "uavrelay/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "oracle_detail.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/multihop.hpp"

namespace uavrelay {

GridResult grid_search_dual(const Scenario& s, const GridSpec& g) {
  detail::check_grid(s, g);
  std::vector<double> v(g.nx * g.nh);
  const long cells = long(v.size());
#pragma omp parallel for schedule(static)
  for (long c = 0; c < cells; ++c) {
    std::size_t i = std::size_t(c) / g.nh, j = std::size_t(c) % g.nh;
    v[c] = detail::dual_value(s, detail::grid_coord(0, s.D, i, g.nx),
                              detail::grid_coord(s.h_min, s.h_max, j, g.nh));
  }
  return detail::reduce_grid(s, g, v);
}

namespace {
GridResult line_search(std::size_t n, double lo, double hi, const std::function<double(double)>& f) {
  if (n < 2) throw DomainError("grid search: need at least 2 samples");
  GridResult r;
  r.sir = -1;
  double prev = 0, grad = 0;
  const double step = (hi - lo) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double t = detail::grid_coord(lo, hi, i, n), v = f(t);
    if (v > r.sir) r.sir = v, r.x = t;
    if (i > 0 && step > 0) grad = std::max(grad, std::abs(v - prev) / step);
    prev = v;
  }
  r.slack = step * grad;
  return r;
}
}  // namespace

GridResult grid_search_x(const Scenario& s, double h, std::size_t n) {
  auto r = line_search(n, 0, s.D, [&](double x) { return detail::dual_value(s, x, h); });
  r.h = h;
  return r;
}

GridResult grid_search_h(const Scenario& s, double x, std::size_t n) {
  auto r = line_search(n, s.h_min, s.h_max, [&](double h) { return detail::dual_value(s, x, h); });
  r.h = r.x;
  r.x = x;
  return r;
}

ExhaustiveResult exhaustive_min_uavs(PlannerKind kind, const Scenario& s, double h, double gamma,
                                     std::size_t n_max, std::size_t per_hop_grid,
                                     const InterferenceModel* field) {
  if (n_max > 8) throw DomainError("exhaustive_min_uavs: n_max above 8 is not searched");
  if (n_max < 1 || per_hop_grid < 1) throw DomainError("exhaustive_min_uavs: empty search");
  if (kind == PlannerKind::stochastic && !field)
    throw DomainError("exhaustive_min_uavs: stochastic search needs an interference field");
  const std::size_t L = per_hop_grid * n_max;
  std::vector<double> xs(L + 1), ups(L + 1, 1.0);
  for (std::size_t j = 0; j <= L; ++j) xs[j] = detail::grid_coord(0, s.D, j, L + 1);
  if (field)
    for (std::size_t j = 0; j <= L; ++j) ups[j] = field->upsilon(xs[j]);
  const double ups_d = field ? field->upsilon(s.D) : 1.0;
  const double eta = s.channel.eta_nlos, mu = s.channel.mu_los;
  const double target = gamma * (1 - 1e-12);

  auto first = [&](std::size_t j) {
    if (kind == PlannerKind::stochastic) return ups[j] * s.p_tx / (eta * (xs[j] * xs[j] + h * h));
    return chain_link_sir(s, {0, xs[j], s.D}, {0, h, 0}, 1);
  };
  auto last = [&](std::size_t j) {
    double d = s.D - xs[j];
    if (kind == PlannerKind::stochastic) return ups_d * s.p_uav / (eta * (d * d + h * h));
    return chain_link_sir(s, {0, xs[j], s.D}, {0, h, 0}, 2);
  };
  auto middle = [&](std::size_t i, std::size_t j) {
    double d = xs[j] - xs[i];
    if (kind == PlannerKind::stochastic) return ups[j] * s.p_uav / (mu * d * d);
    return chain_link_sir(s, {0, xs[i], xs[j], s.D}, {0, h, h, 0}, 2);
  };

  ExhaustiveResult r;
  r.n_max = n_max;
  // parent[n][j]: previous lattice index of UAV n sitting at j, or -1 when unreachable
  std::vector<std::vector<long>> parent(n_max + 1, std::vector<long>(L + 1, -1));
  for (std::size_t j = 0; j <= L; ++j)
    if (first(j) >= target) parent[1][j] = long(j);
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t j = 0; j <= L; ++j) {
      if (parent[n][j] < 0 || last(j) < target) continue;
      r.found = true;
      r.n = n;
      r.positions.resize(n);
      std::size_t at = j;
      for (std::size_t k = n; k >= 1; --k) {
        r.positions[k - 1] = xs[at];
        at = std::size_t(parent[k][at]);
      }
      return r;
    }
    if (n == n_max) break;
    for (std::size_t i = 0; i <= L; ++i) {
      if (parent[n][i] < 0) continue;
      for (std::size_t j = i + 1; j <= L; ++j) {
        if (parent[n + 1][j] >= 0) continue;
        if (xs[j] - xs[i] < s.d_min * (1 - 1e-12)) continue;
        if (middle(i, j) >= target) parent[n + 1][j] = long(i);
      }
    }
  }
  return r;
}

BaselineStats random_placement_baseline(const Scenario& s, std::size_t n, std::size_t trials,
                                        std::uint64_t seed, const BaselineOptions& o) {
  if (trials < 1) throw DomainError("baseline: need at least one trial");
  std::vector<double> v(trials);
  bool failed = false;
  std::string what;
#pragma omp parallel for schedule(static)
  for (long t = 0; t < long(trials); ++t) {
    try {
      v[t] = detail::baseline_trial(s, n, seed, std::size_t(t), o);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        what = e.what();
      }
    }
  }
  if (failed) throw DomainError(what);
  return detail::summarize(std::move(v), seed);
}

namespace {
double bisect_gamma(double hi, double rel_tol, const std::function<bool(double)>& ok) {
  // log-space bisection on [hi * 1e-12, hi]
  double lo = hi * 1e-12;
  if (!ok(lo)) throw InfeasibleTarget("centralized search: nothing feasible above 1e-12 of the cap");
  if (ok(hi)) return hi;
  while (hi / lo - 1 > rel_tol) {
    double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}
}  // namespace

double centralized_max_gamma(const Scenario& s, double h, std::size_t n, double rel_tol) {
  auto caps = feasibility_caps(s, h);
  return bisect_gamma(caps.bound, rel_tol, [&](double g) {
    try {
      return design_min_uavs(s, h, g).uav_count() <= n;
    } catch (const InfeasibleTarget&) {
      return false;
    }
  });
}

double centralized_max_egamma(const InterferenceModel& m, const Scenario& s, double h,
                              std::size_t n, double rel_tol) {
  const double cap = m.upsilon(s.D) * s.p_uav / (s.channel.eta_nlos * h * h);
  return bisect_gamma(cap, rel_tol, [&](double g) {
    try {
      return design_min_uavs_stochastic(m, s, h, g).uav_count() <= n;
    } catch (const InfeasibleTarget&) {
      return false;
    }
  });
}

}  // namespace uavrelay
