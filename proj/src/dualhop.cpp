#include "uavrelay/dualhop.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "uavrelay/errors.hpp"
#include "uavrelay/polynomial.hpp"

namespace uavrelay {

namespace {

double sir_s(const Scenario& s, double x, double h) {
  return std::min(sir_dual_uav(s, x, h), sir_dual_rx(s, x, h));
}

bool in_band(const Scenario& s, double h) {
  double tol = 1e-12 * s.h_max;
  return h >= s.h_min - tol && h <= s.h_max + tol;
}

double clamp_band(const Scenario& s, double h) { return std::clamp(h, s.h_min, s.h_max); }

}  // namespace

LocusCoefficients locus_coefficients(const Scenario& s, double x) {
  const double P = s.p_tx, R = s.rx_factor();
  const double X = s.msi_x, Y2 = s.msi_y * s.msi_y, D = s.D;
  const double Q = s.Q();
  LocusCoefficients k;
  k.A = P;
  // expanded so the D-X and x-X factors never cancel
  k.B = 2 * P * (x - X) * (x - D) + (P - R) * Q;
  const double v = (D - X) * x;
  const double umv = x * (x - 2 * D) + D * X;
  const double upv = x * (x - 2 * X) + D * X;
  k.C = P * umv * upv + (P - R) * v * v + Y2 * (P * (D - x) * (D - x) - R * x * x);
  const double S = X * X + Y2;
  const double rs = std::sqrt(S);
  const double lin = (D + X) * ((R - P) * (D - X) * (D - X) + R * Y2) + P * (D - X) * Y2;
  const double c0 = (P * (rs - D) * (rs - D) - R * Q) * (P * (rs + D) * (rs + D) - R * Q);
  k.disc = 4 * P * P * (D - X) * (D - X) * x * x + 4 * P * lin * x + c0;
  return k;
}

LocusLambda locus_lambda(const Scenario& s, double x) {
  auto k = locus_coefficients(s, x);
  LocusLambda l;
  if (k.disc < 0) return l;
  l.real = true;
  double sq = std::sqrt(k.disc);
  double q = -0.5 * (k.B + std::copysign(sq, k.B));
  double r1 = q / k.A;
  double r2 = q != 0 ? k.C / q : 0.0;
  l.plus = std::max(r1, r2);
  l.minus = std::min(r1, r2);
  return l;
}

std::vector<LocusPoint> locus_heights(const Scenario& s, double x) {
  std::vector<LocusPoint> out;
  auto l = locus_lambda(s, x);
  if (!l.real) return out;
  auto add = [&](double lam, LocusBranch b) {
    if (lam <= 0) return;
    double h = std::sqrt(lam);
    if (!in_band(s, h)) return;
    h = clamp_band(s, h);
    for (auto& p : out)
      if (std::abs(p.h - h) <= 1e-12 * s.h_max) return;
    out.push_back({x, h, b});
  };
  add(l.plus, LocusBranch::plus);
  add(l.minus, LocusBranch::minus);
  return out;
}

StationaryPoints stationary_points(const Scenario& s, double h) {
  StationaryPoints sp;
  const double X = s.msi_x, S = X * X + s.msi_y * s.msi_y;
  if (X <= 0) {
    sp.at_infinity = true;
    sp.psi_x = sp.psi_h = std::numeric_limits<double>::infinity();
    return sp;
  }
  sp.psi_x = (S + std::sqrt(S * S + 4 * X * X * h * h)) / (2 * X);
  sp.psi_h = S / (2 * X);
  return sp;
}

std::vector<double> quartic_roots_fixed_h(const Scenario& s, double h_hat) {
  const double D = s.D;
  const double xi = s.msi_x / D;
  const double a1 = (s.msi_y * s.msi_y + h_hat * h_hat) / (D * D);
  const double b1 = h_hat * h_hat / (D * D);
  const double k = s.rx_factor() * s.Q() / (D * D) / s.p_tx;
  // [(t-xi)^2 + a1][(1-t)^2 + b1] - k (t^2 + b1), t = x / D
  const double f0 = xi * xi + a1, g0 = 1 + b1;
  std::array<double, 5> c{};
  c[4] = 1;
  c[3] = -2 - 2 * xi;
  c[2] = g0 + 4 * xi + f0 - k;
  c[1] = -2 * xi * g0 - 2 * f0;
  c[0] = f0 * g0 - k * b1;
  std::vector<double> out;
  for (double t : quartic_real_roots(c, 1e-8)) {
    if (t < -1e-9 || t > 1 + 1e-9) continue;
    double x = std::clamp(t, 0.0, 1.0) * D;
    double s1 = sir_dual_uav(s, x, h_hat), s2 = sir_dual_rx(s, x, h_hat);
    if (std::abs(s1 - s2) > 1e-6 * s1) continue;
    if (!out.empty() && std::abs(out.back() - x) <= 1e-7 * D) continue;
    out.push_back(x);
  }
  return out;
}

CaseLabel classify_case_fixed_h(const Scenario& s, double h_hat) {
  CaseLabel c;
  const double X = s.msi_x, Y2 = s.msi_y * s.msi_y, D = s.D, h2 = h_hat * h_hat;
  const double mu = s.channel.mu_nlos, eta = s.channel.eta_nlos, Q = s.Q();
  c.ratio = s.p_tx / s.p_uav;
  c.c1 = mu * Q * h2 / (eta * (X * X + Y2 + h2) * (D * D + h2));
  auto sp = stationary_points(s, h_hat);
  c.psi_x = sp.psi_x;
  c.psi_at_infinity = sp.at_infinity;
  if (c.ratio < c.c1) {
    c.case_id = 1;
    return c;
  }
  if (sp.at_infinity || sp.psi_x >= D) {
    c.has_c2 = true;
    c.c2 = mu * Q * (D * D + h2) / (eta * h2 * ((D - X) * (D - X) + Y2 + h2));
    c.case_id = c.ratio <= c.c2 ? 2 : 3;
  } else {
    const double P = sp.psi_x;
    c.has_c3 = true;
    c.c3 = mu * (P * P + h2) * Q / (eta * ((P - X) * (P - X) + Y2 + h2) * ((D - P) * (D - P) + h2));
    c.case_id = c.ratio <= c.c3 ? 4 : 5;
  }
  return c;
}

namespace {

// SIR1 - SIR2 is decreasing on [lo, hi]; returns its root
double bisect_crossing(const Scenario& s, double h, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15 * s.D; ++i) {
    double m = 0.5 * (lo + hi);
    if (sir_dual_uav(s, m, h) >= sir_dual_rx(s, m, h)) lo = m;
    else hi = m;
  }
  return 0.5 * (lo + hi);
}

double smallest_root(const Scenario& s, double h, double hi) {
  auto roots = quartic_roots_fixed_h(s, h);
  if (!roots.empty() && roots.front() <= hi + 1e-7 * s.D) return roots.front();
  // quartic lost a tangent root; the bracket is still valid
  return bisect_crossing(s, h, 0.0, std::min(hi, s.D));
}

}  // namespace

double optimal_x_fixed_h(const Scenario& s, double h_hat) {
  auto c = classify_case_fixed_h(s, h_hat);
  switch (c.case_id) {
    case 1: return 0.0;
    case 2: return smallest_root(s, h_hat, s.D);
    case 3: return s.D;
    case 4: {
      double xs = smallest_root(s, h_hat, c.psi_x);
      return sir_dual_uav(s, xs, h_hat) >= sir_dual_uav(s, s.D, h_hat) ? xs : s.D;
    }
    default: return s.D;
  }
}

double optimal_h_fixed_x(const Scenario& s, double x_hat) {
  auto sp = stationary_points(s, s.h_min);
  if (sp.at_infinity || x_hat <= sp.psi_h) return s.h_min;
  auto pts = locus_heights(s, x_hat);
  if (!pts.empty()) {
    double best = pts.front().h, bv = sir_s(s, x_hat, best);
    for (auto& p : pts) {
      double v = sir_s(s, x_hat, p.h);
      if (v > bv) best = p.h, bv = v;
    }
    return best;
  }
  return sir_s(s, x_hat, s.h_max) > sir_s(s, x_hat, s.h_min) ? s.h_max : s.h_min;
}

bool locus_argmax(const Scenario& s, LocusPoint& best, double& best_sir) {
  const int n = 2048;
  bool found = false;
  best_sir = -1;
  auto consider = [&](const LocusPoint& p) {
    double v = sir_s(s, p.x, p.h);
    if (!found || v > best_sir || (v == best_sir && (p.x < best.x || (p.x == best.x && p.h < best.h)))) {
      best = p;
      best_sir = v;
      found = true;
    }
  };
  const double dx = s.D / (n - 1);
  for (int i = 0; i < n; ++i) {
    double x = i == n - 1 ? s.D : i * dx;
    for (auto& p : locus_heights(s, x)) consider(p);
  }
  // where the locus leaves the band through h_min or h_max
  for (double hb : {s.h_min, s.h_max})
    for (double x : quartic_roots_fixed_h(s, hb)) consider({x, hb, LocusBranch::plus});
  if (!found) return false;

  // golden section along the winning branch
  const LocusBranch br = best.branch;
  auto value = [&](double x) {
    auto l = locus_lambda(s, x);
    if (!l.real) return -1.0;
    double lam = br == LocusBranch::plus ? l.plus : l.minus;
    if (lam <= 0) return -1.0;
    double h = std::sqrt(lam);
    if (!in_band(s, h)) return -1.0;
    return sir_s(s, x, clamp_band(s, h));
  };
  double a = std::max(0.0, best.x - dx), b = std::min(s.D, best.x + dx);
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = value(c), fd = value(d);
  for (int it = 0; it < 100 && b - a > 1e-13 * s.D; ++it) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = value(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = value(d);
    }
  }
  double xr = 0.5 * (a + b);
  if (value(xr) > best_sir) {
    auto l = locus_lambda(s, xr);
    double lam = br == LocusBranch::plus ? l.plus : l.minus;
    best = {xr, clamp_band(s, std::sqrt(lam)), br};
    best_sir = sir_s(s, best.x, best.h);
  }
  return true;
}

namespace {

enum class SubCase { locus_x, rx_edge, locus_point, low_corner };

SubCase pick_subcase(const Scenario& s, const LocusPoint& lt, double psi_x, double psi_h,
                     bool& use_tilde) {
  use_tilde = false;
  if (psi_x >= s.D) return SubCase::locus_x;
  if (lt.x >= psi_x) return SubCase::rx_edge;
  const double ref = sir_dual_uav(s, s.D, s.h_max);
  if (lt.x >= psi_h) {
    use_tilde = sir_dual_uav(s, lt.x, lt.h) >= ref;
    return use_tilde ? SubCase::locus_point : SubCase::rx_edge;
  }
  use_tilde = sir_dual_uav(s, lt.x, s.h_min) >= ref;
  return use_tilde ? SubCase::low_corner : SubCase::rx_edge;
}

}  // namespace

OptimalPosition optimal_position(const Scenario& s) {
  s.validate();
  s.channel.require_quadratic();
  OptimalPosition out;
  LocusPoint lt;
  double lt_sir = 0;
  out.locus_empty = !locus_argmax(s, lt, lt_sir);
  if (!out.locus_empty) out.locus_argmax = lt;

  auto finish = [&](double x, double h, const char* rule) {
    out.x = x;
    out.h = h;
    out.rule = rule;
    out.report = sir_system_dual(s, x, h);
    return out;
  };

  if (out.locus_empty) {
    const std::array<std::pair<double, double>, 4> corners{
        {{0, s.h_min}, {0, s.h_max}, {s.D, s.h_min}, {s.D, s.h_max}}};
    auto bestc = corners[0];
    double bv = sir_s(s, bestc.first, bestc.second);
    for (auto& c : corners) {
      double v = sir_s(s, c.first, c.second);
      if (v > bv) bv = v, bestc = c;
    }
    return finish(bestc.first, bestc.second, "boundary-corners");
  }
  // SIR2 peaks at (D, h_min); if SIR1 is not below it there, nothing beats it
  if (sir_dual_rx(s, s.D, s.h_min) <= sir_dual_uav(s, s.D, s.h_min))
    return finish(s.D, s.h_min, "rx-corner");
  // symmetric: SIR1 peaks at (0, h_min)
  if (sir_dual_uav(s, 0, s.h_min) <= sir_dual_rx(s, 0, s.h_min))
    return finish(0.0, s.h_min, "tx-corner");

  auto sp = stationary_points(s, lt.h);
  bool use_tilde = false;
  SubCase sc = pick_subcase(s, lt, sp.psi_x, sp.psi_h, use_tilde);
  for (double hc : {s.h_min, s.h_max}) {
    auto spc = stationary_points(s, hc);
    bool u2 = false;
    if (pick_subcase(s, lt, spc.psi_x, spc.psi_h, u2) != sc) out.psi_convention_disagrees = true;
  }
  switch (sc) {
    case SubCase::locus_x: return finish(lt.x, optimal_h_fixed_x(s, lt.x), "locus-x");
    case SubCase::locus_point: return finish(lt.x, lt.h, "locus-point");
    case SubCase::low_corner: return finish(lt.x, s.h_min, "locus-x-hmin");
    case SubCase::rx_edge: break;
  }
  return finish(s.D, optimal_h_fixed_x(s, s.D), "rx-edge");
}

}  // namespace uavrelay
