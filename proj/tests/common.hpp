#pragma once
// scenario builders shared by the test binaries
#include <cmath>
#include <random>

#include "uavrelay/channel.hpp"

namespace testkit {

using uavrelay::ChannelParams;
using uavrelay::Scenario;

inline ChannelParams table_channel() {
  return ChannelParams::make(2e9, std::pow(10.0, 0.01), std::pow(10.0, 2.1));
}

inline double uni(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * double(g() >> 11) * 0x1.0p-53;
}

inline double log_uni(std::mt19937_64& g, double lo, double hi) {
  return std::exp(uni(g, std::log(lo), std::log(hi)));
}

// powers log-uniform over three decades, D up to 2000 m
inline Scenario random_dual(std::mt19937_64& g) {
  Scenario s;
  s.D = uni(g, 20, 2000);
  s.msi_x = uni(g, 0, s.D);
  s.msi_y = uni(g, 0, s.D);
  s.p_tx = log_uni(g, 0.1, 100);
  s.p_uav = log_uni(g, 0.1, 100);
  s.p_msi = log_uni(g, 0.1, 100);
  s.h_min = uni(g, 5, 60);
  s.h_max = s.h_min + uni(g, 1, 300);
  s.channel = table_channel();
  return s;
}

// Y = 0, eta = mu_nlos, unit powers
inline Scenario special_case(double D, double X) {
  Scenario s;
  s.D = D;
  s.msi_x = X;
  s.msi_y = 0;
  s.h_min = 0.5;
  s.h_max = 2;
  s.channel = ChannelParams::from_coefficients(1.0, 1.0, 1.0);
  return s;
}

// multi-hop reference scenario (fifth sub-table)
inline Scenario fifth() {
  Scenario s;
  s.D = 1000;
  s.msi_x = 500;
  s.msi_y = 400;
  s.p_tx = 80;
  s.p_uav = 1;
  s.p_msi = 80;
  s.h_min = s.h_max = 20;
  s.d_min = 4;
  s.channel = table_channel();
  return s;
}

// Fig-5/6 family: p_t = p_MSI = 80 W, D = 1000 m, h = 20 m
inline Scenario fourth(double X, double Y, double p_u) {
  Scenario s = fifth();
  s.msi_x = X;
  s.msi_y = Y;
  s.p_uav = p_u;
  return s;
}

}  // namespace testkit
