#include <algorithm>
#include <cmath>

#include "oracle_detail.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/random.hpp"

namespace uavrelay {

namespace detail {

GridResult reduce_grid(const Scenario& s, const GridSpec& g, const std::vector<double>& v) {
  const double hlo = s.h_min, hhi = s.h_max;
  GridResult r;
  r.sir = -1;
  std::size_t bi = 0, bj = 0;
  // row-major in x then h, so the first strict maximum is the tie-break winner
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nh; ++j)
      if (v[i * g.nh + j] > r.sir) r.sir = v[i * g.nh + j], bi = i, bj = j;
  r.x = grid_coord(0, s.D, bi, g.nx);
  r.h = grid_coord(hlo, hhi, bj, g.nh);
  const double dx = g.nx > 1 ? s.D / double(g.nx - 1) : 0;
  const double dh = g.nh > 1 ? (hhi - hlo) / double(g.nh - 1) : 0;
  double gx = 0, gh = 0;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nh; ++j) {
      if (i + 1 < g.nx && dx > 0) gx = std::max(gx, std::abs(v[(i + 1) * g.nh + j] - v[i * g.nh + j]) / dx);
      if (j + 1 < g.nh && dh > 0) gh = std::max(gh, std::abs(v[i * g.nh + j + 1] - v[i * g.nh + j]) / dh);
    }
  r.slack = std::hypot(dx, dh) * std::hypot(gx, gh);
  return r;
}

Placement draw(const Scenario& s, std::size_t n, std::uint64_t seed, std::size_t trial,
               const BaselineOptions& o) {
  auto g = trial_stream(seed, trial);
  const double h = o.altitude ? *o.altitude : s.h_min + (s.h_max - s.h_min) * uniform01(g);
  std::vector<double> hops(n + 1);
  for (std::size_t attempt = 0; attempt < o.max_rejections; ++attempt) {
    // symmetric Dirichlet(1) through normalized exponentials
    double sum = 0;
    for (auto& e : hops) sum += (e = -std::log1p(-uniform01(g)));
    for (auto& e : hops) e *= s.D / sum;
    bool ok = true;
    for (std::size_t k = 1; k < n; ++k) ok = ok && hops[k] >= s.d_min;
    if (ok) return Placement::uniform(hops, h);
  }
  throw DomainError("random placement: d_min leaves too little room for N UAVs");
}

double baseline_trial(const Scenario& s, std::size_t n, std::uint64_t seed, std::size_t trial,
                      const BaselineOptions& o) {
  return sir_multihop(s, draw(s, n, seed, trial, o)).system_sir;
}

BaselineStats summarize(std::vector<double> samples, std::uint64_t seed) {
  BaselineStats b;
  b.trials = samples.size();
  b.seed = seed;
  b.distribution = "dirichlet(1) hops, shared altitude";
  double sum = 0;
  b.min = samples.front();
  b.max = samples.front();
  for (double v : samples) {
    sum += v;
    b.min = std::min(b.min, v);
    b.max = std::max(b.max, v);
  }
  b.mean = sum / double(samples.size());
  b.samples = std::move(samples);
  return b;
}

}  // namespace detail

Placement random_placement(const Scenario& s, std::size_t n, std::uint64_t seed,
                           std::size_t trial, const BaselineOptions& o) {
  return detail::draw(s, n, seed, trial, o);
}

GridResult grid_search_dual_serial(const Scenario& s, const GridSpec& g) {
  detail::check_grid(s, g);
  std::vector<double> v(g.nx * g.nh);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nh; ++j)
      v[i * g.nh + j] = detail::dual_value(s, detail::grid_coord(0, s.D, i, g.nx),
                                           detail::grid_coord(s.h_min, s.h_max, j, g.nh));
  return detail::reduce_grid(s, g, v);
}

BaselineStats random_placement_baseline_serial(const Scenario& s, std::size_t n,
                                               std::size_t trials, std::uint64_t seed,
                                               const BaselineOptions& o) {
  if (trials < 1) throw DomainError("baseline: need at least one trial");
  std::vector<double> v(trials);
  for (std::size_t t = 0; t < trials; ++t) v[t] = detail::baseline_trial(s, n, seed, t, o);
  return detail::summarize(std::move(v), seed);
}

}  // namespace uavrelay
