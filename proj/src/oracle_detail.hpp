#pragma once
// shared pieces of the parallel and serial oracle kernels
#include <vector>

#include "uavrelay/errors.hpp"
#include "uavrelay/oracle.hpp"

namespace uavrelay::detail {

inline double dual_value(const Scenario& s, double x, double h) {
  return std::min(sir_dual_uav(s, x, h), sir_dual_rx(s, x, h));
}

inline double grid_coord(double lo, double hi, std::size_t i, std::size_t n) {
  return i + 1 == n ? hi : lo + (hi - lo) * double(i) / double(n - 1);
}

// one sample is allowed only on a degenerate axis
inline void check_grid(const Scenario& s, const GridSpec& g) {
  if (g.nx < 2 || g.nh < 1 || (g.nh < 2 && s.h_max > s.h_min))
    throw DomainError("grid search: need at least 2 samples per non-degenerate axis");
}

// argmax with (value desc, x asc, h asc) tie-break and the Lipschitz slack
GridResult reduce_grid(const Scenario& s, const GridSpec& g, const std::vector<double>& v);

double baseline_trial(const Scenario& s, std::size_t n, std::uint64_t seed, std::size_t trial,
                      const BaselineOptions& o);
BaselineStats summarize(std::vector<double> samples, std::uint64_t seed);

}  // namespace uavrelay::detail
