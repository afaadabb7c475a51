#include "uavrelay/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/Polynomials>

namespace uavrelay {

QuadRoots solve_quadratic(double a, double b, double c) {
  QuadRoots r;
  if (a == 0) {
    if (b == 0) return r;
    r.count = 1;
    r.lo = r.hi = -c / b;
    return r;
  }
  double disc = b * b - 4 * a * c;
  if (disc < 0) {
    // tangency lost to rounding
    if (disc > -1e-14 * b * b) disc = 0;
    else return r;
  }
  double sq = std::sqrt(disc);
  double q = -0.5 * (b + std::copysign(sq, b));
  double r1, r2;
  if (q == 0) {
    r1 = r2 = 0;
  } else {
    r1 = q / a;
    r2 = c / q;
  }
  r.count = 2;
  r.lo = std::min(r1, r2);
  r.hi = std::max(r1, r2);
  return r;
}

double horner(const std::array<double, 5>& c, double t) {
  return (((c[4] * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0];
}

std::vector<double> quartic_real_roots(const std::array<double, 5>& c, double imag_tol) {
  Eigen::Matrix<double, 5, 1> poly;
  for (int i = 0; i < 5; ++i) poly[i] = c[i];
  Eigen::PolynomialSolver<double, 4> solver(poly);
  std::vector<double> out;
  for (const auto& z : solver.roots()) {
    if (std::abs(z.imag()) > imag_tol * std::max(1.0, std::abs(z.real()))) continue;
    double t = z.real();
    for (int it = 0; it < 20; ++it) {
      double f = horner(c, t);
      double df = ((4 * c[4] * t + 3 * c[3]) * t + 2 * c[2]) * t + c[1];
      if (df == 0) break;
      double step = f / df;
      double tn = t - step;
      // keep the polish local; a wild step means a near-double root
      if (std::abs(tn - z.real()) > 1e-3 * std::max(1.0, std::abs(z.real()))) break;
      t = tn;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    if (std::abs(horner(c, t)) > std::abs(horner(c, z.real()))) t = z.real();
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace uavrelay
