#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "uavrelay/channel.hpp"

namespace uavrelay {

struct FeasibilityCaps {
  double tx = 0, middle = 0, rx = 0;
  double bound = 0;
  std::string binding;  // "tx", "middle" or "rx"
};
FeasibilityCaps feasibility_caps(const Scenario& s, double h);
double feasibility_bound(const Scenario& s, double h);

// which piece of the hop case map produced the distance
enum class HopBranch {
  MinusRoot,  // smaller root of an upward parabola
  PlusRoot,   // positive root of a downward parabola
  RxSide,     // everything past the far root is feasible; stop at D - d_max
  FullSpan,   // limited by the remaining room
  Linear      // degenerate leading coefficient
};
const char* to_string(HopBranch b);

struct HopChoice {
  double d = 0;
  HopBranch branch = HopBranch::FullSpan;
  bool found = false;           // false: no feasible distance at all
  bool below_safeguard = false; // middle hops only
};

// furthest d in [0, cap] with SIR1(d, h) >= gamma
HopChoice first_hop(const Scenario& s, double h, double gamma, double cap);
double first_hop_distance(const Scenario& s, double h, double gamma);
double last_hop_max_distance(const Scenario& s, double h, double gamma);
// hop from position `consumed`; cap is the furthest allowed position (D by default)
HopChoice middle_hop_distance(const Scenario& s, double h, double gamma, double consumed,
                              double d_max, double cap = -1);

struct DesignResult {
  Placement placement;
  double achieved_gamma = 0;
  std::vector<HopBranch> trace;  // hop 1..N
  std::size_t uav_count() const { return placement.uav_count(); }
};
DesignResult design_min_uavs(const Scenario& s, double h, double gamma);

struct IterationRecord {
  double gamma = 0;
  std::vector<double> hops;  // complete chain, or partial when the probe failed early
  double system_sir = 0;     // NaN when the chain could not be built
  bool covered = false;
};

struct IterationTrace {
  double epsilon = 0;
  std::vector<IterationRecord> iterations;
};

struct DistributedResult {
  double gamma0 = 0, gamma_final = 0;
  Placement placement;
  IterationTrace trace;
};
DistributedResult distributed_max_sir(const Scenario& s, double h, std::size_t n_uavs,
                                      double epsilon);

struct RefineOptions {
  double eps_h = 10;
  std::size_t iterations = 30;
  std::size_t nx = 64, nh = 33;
};
struct RefineResult {
  Placement placement;
  std::vector<double> sir_history;  // entry 0 is the start
};
RefineResult refine_altitudes(const Scenario& s, const Placement& start, const RefineOptions& o);

}  // namespace uavrelay
