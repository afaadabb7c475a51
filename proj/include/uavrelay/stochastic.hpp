#pragma once
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "uavrelay/channel.hpp"

namespace uavrelay {

// Interference field along the Tx-Rx axis at the planning altitude.
// Knot-based variants interpolate linearly in x and hold the end values outside.
class InterferenceModel {
 public:
  enum class Kind { deterministic, beta, tabulated_upsilon, numeric_mgf, gamma_mgf, empirical };

  struct Knot {
    double x = 0;
    double a = 0, b = 0;  // meaning depends on kind: c | (alpha, beta) | upsilon | (shape, scale)
  };
  struct Bin {
    double x_lo = 0, x_hi = 0;
    std::vector<double> samples;
  };
  // M_{I_x}(-y) for y >= 0
  using NegMgf = std::function<double(double x, double y)>;

  static InterferenceModel deterministic(std::vector<Knot> power_knots);
  static InterferenceModel constant_power(double c);
  static InterferenceModel beta(std::vector<Knot> alpha_beta_knots, double i_max);
  static InterferenceModel tabulated(std::vector<Knot> upsilon_knots);
  static InterferenceModel numeric(NegMgf mgf, bool iid = false);
  static InterferenceModel gamma_mgf(std::vector<Knot> shape_scale_knots);
  static InterferenceModel empirical(std::vector<Bin> bins);

  Kind kind() const { return kind_; }
  const char* kind_name() const;
  // constant upsilon over the axis
  bool iid() const { return iid_; }
  double upsilon(double x) const;

  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<Bin>& bins() const { return bins_; }
  double i_max() const { return i_max_; }

 private:
  Kind kind_ = Kind::deterministic;
  std::vector<Knot> knots_;
  std::vector<Bin> bins_;
  NegMgf mgf_;
  double i_max_ = 1;
  bool iid_ = false;

  void interp(double x, double& a, double& b) const;
  void finalize();
};

double upsilon(const InterferenceModel& m, double x);
double beta_upsilon(double alpha, double beta, double i_max);
// integral of M(-y) over [0, inf) on geometric panels with adaptive Gauss-Kronrod
double upsilon_from_mgf(const std::function<double(double)>& neg_mgf);

struct ExpectedSir {
  double uav = 0, rx = 0;
};
ExpectedSir expected_sir_dual(const InterferenceModel& m, const Scenario& s, double x, double h);
// expected per-link SIRs of a uniform-altitude chain
SirReport expected_sir_chain(const InterferenceModel& m, const Scenario& s, const Placement& pl);

struct SingleProbe {
  double gamma = 0, x = 0, e_sir_uav = 0;
};
struct SingleUavResult {
  double x = 0;
  double achieved = 0;  // min of the two expected SIRs at x
  double gamma_min = 0, gamma_max = 0;
  bool fallback = false;  // picked the best visited probe
  std::vector<SingleProbe> trace;
};
SingleUavResult single_uav_position(const InterferenceModel& m, const Scenario& s, double h,
                                    double epsilon);

struct Interval {
  double lo = 0, hi = 0;
};
// {d in [0, D] : E[SIR1](d) >= gamma} by sign scan plus bisection
std::vector<Interval> first_hop_set(const InterferenceModel& m, const Scenario& s, double h,
                                    double gamma, std::size_t scan = 4096);

struct StochasticDesign {
  Placement placement;
  double achieved = 0;
  double rho = 0;
  double d_max = 0;
  std::vector<Interval> d1_set;
  std::size_t uav_count() const { return placement.uav_count(); }
};
StochasticDesign design_min_uavs_stochastic(const InterferenceModel& m, const Scenario& s,
                                            double h, double gamma);

struct EsirIteration {
  double gamma = 0;
  std::vector<double> hops;
  double system_esir = 0;
  bool covered = false;
};
struct DistributedEsirResult {
  double gamma0 = 0, gamma_final = 0;
  Placement placement;
  double epsilon = 0;
  std::vector<EsirIteration> trace;
};
DistributedEsirResult distributed_max_esir(const InterferenceModel& m, const Scenario& s,
                                           double h, std::size_t n_uavs, double epsilon);

}  // namespace uavrelay
