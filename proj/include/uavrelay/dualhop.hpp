#pragma once
#include <string>
#include <vector>

#include "uavrelay/channel.hpp"

namespace uavrelay {

enum class LocusBranch { plus, minus };

struct LocusPoint {
  double x = 0, h = 0;
  LocusBranch branch = LocusBranch::plus;
};

// A*h^4 + B*h^2 + C = 0 at fixed x; disc = B^2 - 4AC evaluated without cancellation
struct LocusCoefficients {
  double A = 0, B = 0, C = 0, disc = 0;
};
LocusCoefficients locus_coefficients(const Scenario& s, double x);

// Lambda^{+/-}(x) = h^2 on the locus; real == false when disc < 0
struct LocusLambda {
  bool real = false;
  double plus = 0, minus = 0;
};
LocusLambda locus_lambda(const Scenario& s, double x);

// locus points with h inside [h_min, h_max]
std::vector<LocusPoint> locus_heights(const Scenario& s, double x);

struct StationaryPoints {
  double psi_x = 0, psi_h = 0;
  bool at_infinity = false;  // X_MSI == 0: SIR1 decreasing in x and h
};
StationaryPoints stationary_points(const Scenario& s, double h);

// roots of SIR1 == SIR2 at altitude h_hat lying in [0, D], ascending
std::vector<double> quartic_roots_fixed_h(const Scenario& s, double h_hat);

struct CaseLabel {
  int case_id = 0;
  double ratio = 0;  // p_t / p_u
  double c1 = 0, c2 = 0, c3 = 0;
  bool has_c2 = false, has_c3 = false;
  double psi_x = 0;
  bool psi_at_infinity = false;
};
CaseLabel classify_case_fixed_h(const Scenario& s, double h_hat);

double optimal_x_fixed_h(const Scenario& s, double h_hat);
double optimal_h_fixed_x(const Scenario& s, double x_hat);

struct OptimalPosition {
  double x = 0, h = 0;
  SirReport report;
  std::string rule;         // which branch of the case map fired
  bool locus_empty = true;
  LocusPoint locus_argmax;  // valid when !locus_empty
  // sub-case choice changes if psi_x is taken at h_min or h_max instead of h~
  bool psi_convention_disagrees = false;
};
OptimalPosition optimal_position(const Scenario& s);

// best point on the in-band locus (sampled, refined, plus band-edge crossings)
bool locus_argmax(const Scenario& s, LocusPoint& best, double& best_sir);

}  // namespace uavrelay
