#pragma once
#include <cstddef>
#include <vector>

#include "uavrelay/channel.hpp"

namespace uavrelay {

struct InterferenceSource {
  double x = 0, y = 0, power = 1;
};

struct HypotheticalMsi {
  double x_h = 0, y_h = 0, p_h = 0;
  double residual = 0;
  double scale = 0;  // objective at p_h = 0, i.e. the L1 mass of the true field
};

struct FitGrid {
  std::size_t nx = 128, nh = 32;
};

// kappa(x, y, h); y is carried for the signature only, the field is taken at the sources' y
double total_interference(const std::vector<InterferenceSource>& src, double x, double y, double h,
                          double eta);

// midpoint-rule L1 distance between one MSI and the aggregate field over [0,D] x [h_min,h_max]
double fit_objective(const std::vector<InterferenceSource>& src, const Scenario& s,
                     const FitGrid& g, double x_h, double y_h, double p_h);

HypotheticalMsi fit_hypothetical_msi(const std::vector<InterferenceSource>& src,
                                     const Scenario& s, const FitGrid& g = {});

// copy of s with the MSI replaced by the fitted one
Scenario with_msi(const Scenario& s, const HypotheticalMsi& m);

}  // namespace uavrelay
