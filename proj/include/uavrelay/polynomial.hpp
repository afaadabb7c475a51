#pragma once
#include <array>
#include <vector>

namespace uavrelay {

// real roots of a*t^2 + b*t + c, ascending. a == 0 degrades to the linear case.
struct QuadRoots {
  int count = 0;  // 0, 1 or 2
  double lo = 0, hi = 0;
};
QuadRoots solve_quadratic(double a, double b, double c);

// Real roots of a quartic given ascending coefficients c0..c4 (c4 != 0).
// Companion-matrix eigenvalues, |imag| <= imag_tol accepted, Newton-polished.
std::vector<double> quartic_real_roots(const std::array<double, 5>& c, double imag_tol = 1e-8);

double horner(const std::array<double, 5>& c, double t);

}  // namespace uavrelay
