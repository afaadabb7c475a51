#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavrelay/channel.hpp"
#include "uavrelay/stochastic.hpp"

namespace uavrelay {

struct GridSpec {
  std::size_t nx = 500, nh = 500;
};

struct GridResult {
  double x = 0, h = 0, sir = 0;
  // cell diagonal times the largest finite-difference gradient seen on the grid
  double slack = 0;
};

// argmax of SIR_S over an nx x nh lattice of [0,D] x [h_min,h_max]; ties go to smaller x, then h
GridResult grid_search_dual(const Scenario& s, const GridSpec& g);
GridResult grid_search_dual_serial(const Scenario& s, const GridSpec& g);

// 1-D versions for the fixed-altitude and fixed-position problems
GridResult grid_search_x(const Scenario& s, double h, std::size_t n);
GridResult grid_search_h(const Scenario& s, double x, std::size_t n);

enum class PlannerKind { deterministic, stochastic };

struct ExhaustiveResult {
  bool found = false;  // false: the answer is unknown above n_max
  std::size_t n = 0;
  std::size_t n_max = 0;
  std::vector<double> positions;  // one witness placement
};

// Smallest N with a lattice placement meeting gamma on every link. The lattice has
// per_hop_grid * n_max + 1 points on [0, D]; all UAVs fly at h.
ExhaustiveResult exhaustive_min_uavs(PlannerKind kind, const Scenario& s, double h, double gamma,
                                     std::size_t n_max, std::size_t per_hop_grid,
                                     const InterferenceModel* field = nullptr);

struct BaselineStats {
  double mean = 0, max = 0, min = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;  // system SIR per trial, by trial index
  std::string distribution;
};

struct BaselineOptions {
  std::optional<double> altitude;  // unset: one shared altitude uniform in the band
  std::size_t max_rejections = 10000;
};

BaselineStats random_placement_baseline(const Scenario& s, std::size_t n, std::size_t trials,
                                        std::uint64_t seed, const BaselineOptions& o = {});
BaselineStats random_placement_baseline_serial(const Scenario& s, std::size_t n,
                                               std::size_t trials, std::uint64_t seed,
                                               const BaselineOptions& o = {});
// the placement drawn for one trial
Placement random_placement(const Scenario& s, std::size_t n, std::uint64_t seed,
                           std::size_t trial, const BaselineOptions& o = {});

// largest gamma whose minimum-UAV design needs at most n UAVs (bisection)
double centralized_max_gamma(const Scenario& s, double h, std::size_t n, double rel_tol = 1e-10);
double centralized_max_egamma(const InterferenceModel& m, const Scenario& s, double h,
                              std::size_t n, double rel_tol = 1e-10);

}  // namespace uavrelay
