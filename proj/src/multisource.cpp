#include "uavrelay/multisource.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "uavrelay/errors.hpp"

namespace uavrelay {

double total_interference(const std::vector<InterferenceSource>& src, double x, double /*y*/,
                          double h, double eta) {
  if (!(h > 0)) throw DomainError("total_interference: h must be positive");
  double k = 0;
  for (auto& q : src) k += q.power / eta / ((x - q.x) * (x - q.x) + q.y * q.y + h * h);
  return k;
}

namespace {

// Sample points and weights of the discretized objective, plus the target field.
struct FitProblem {
  std::vector<double> px, ph, w, b;
  double D = 0, y_hi = 0;

  FitProblem(const std::vector<InterferenceSource>& src, const Scenario& s, const FitGrid& g) {
    if (g.nx < 1 || g.nh < 1) throw DomainError("fit grid needs at least one cell per axis");
    D = s.D;
    const bool line = s.h_max == s.h_min;
    const std::size_t nh = line ? 1 : g.nh;
    const double dx = s.D / double(g.nx), dh = line ? 1.0 : (s.h_max - s.h_min) / double(nh);
    for (std::size_t j = 0; j < nh; ++j) {
      double h = line ? s.h_min : s.h_min + (double(j) + 0.5) * dh;
      for (std::size_t i = 0; i < g.nx; ++i) {
        double x = (double(i) + 0.5) * dx;
        px.push_back(x);
        ph.push_back(h);
        w.push_back(dx * dh);
        double f = 0;
        for (auto& q : src) f += q.power / ((x - q.x) * (x - q.x) + q.y * q.y + h * h);
        b.push_back(f);
      }
    }
    double ymax = 0;
    for (auto& q : src) ymax = std::max(ymax, q.y);
    y_hi = ymax > 0 ? 2 * ymax : 1e-3 * s.D;
  }

  double eval(double xh, double yh, double p) const {
    double acc = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      double a = 1.0 / ((px[k] - xh) * (px[k] - xh) + yh * yh + ph[k] * ph[k]);
      acc += w[k] * std::abs(p * a - b[k]);
    }
    return acc;
  }

  // exact L1 minimiser in p: weighted median of b/a with weights w*a
  std::pair<double, double> best_power(double xh, double yh) const {
    const std::size_t n = b.size();
    std::vector<std::pair<double, double>> rw(n);
    double total = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double a = 1.0 / ((px[k] - xh) * (px[k] - xh) + yh * yh + ph[k] * ph[k]);
      rw[k] = {b[k] / a, w[k] * a};
      total += w[k] * a;
    }
    std::sort(rw.begin(), rw.end());
    double cum = 0, p = rw.back().first;
    for (auto& [r, wt] : rw) {
      cum += wt;
      if (cum >= 0.5 * total) { p = r; break; }
    }
    return {p, eval(xh, yh, p)};
  }
};

struct Candidate {
  double x = 0, y = 0, p = 0, f = 0;
  std::size_t seed = 0;
};

// golden-section minimum of g on [lo, hi]; returns the best of the probes and `x0`
template <class G>
std::pair<double, double> golden(G&& g, double lo, double hi, double x0, double f0) {
  const double r = 0.5 * (std::sqrt(5.0) - 1);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = g(c), fd = g(d);
  double bx = x0, bf = f0;
  auto keep = [&](double x, double f) { if (f < bf) bx = x, bf = f; };
  keep(c, fc);
  keep(d, fd);
  for (int i = 0; i < 60 && b - a > 1e-12 * (1 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a);
      fc = g(c);
      keep(c, fc);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a);
      fd = g(d);
      keep(d, fd);
    }
  }
  return {bx, bf};
}

Candidate refine(const FitProblem& P, Candidate c) {
  double wx = P.D / 16, wy = P.y_hi / 16;
  for (int sweep = 0; sweep < 400; ++sweep) {
    const double before = c.f;
    auto gx = [&](double x) { return P.best_power(x, c.y).second; };
    auto [nx, fx] = golden(gx, std::max(0.0, c.x - wx), std::min(P.D, c.x + wx), c.x, c.f);
    if (fx < c.f) c.x = nx, c.f = fx;
    auto gy = [&](double y) { return P.best_power(c.x, y).second; };
    auto [ny, fy] = golden(gy, std::max(0.0, c.y - wy), c.y + wy, c.y, c.f);
    if (fy < c.f) c.y = ny, c.f = fy;
    if (before - c.f <= 1e-6 * before) {
      wx *= 0.25, wy *= 0.25;
      if (wx < 1e-9 * P.D) break;
    }
  }
  c.p = P.best_power(c.x, c.y).first;
  c.f = P.eval(c.x, c.y, c.p);
  return c;
}

bool better(const Candidate& a, const Candidate& b) {
  return std::tie(a.f, a.seed) < std::tie(b.f, b.seed);
}

}  // namespace

double fit_objective(const std::vector<InterferenceSource>& src, const Scenario& s,
                     const FitGrid& g, double x_h, double y_h, double p_h) {
  return FitProblem(src, s, g).eval(x_h, y_h, p_h);
}

HypotheticalMsi fit_hypothetical_msi(const std::vector<InterferenceSource>& in,
                                     const Scenario& s, const FitGrid& g) {
  if (in.empty()) throw DomainError("fit_hypothetical_msi: no sources");
  for (auto& q : in)
    if (!(q.power > 0)) throw DomainError("fit_hypothetical_msi: source power must be positive");
  auto src = in;
  std::sort(src.begin(), src.end(), [](auto& a, auto& b) {
    return std::tie(a.x, a.y, a.power) < std::tie(b.x, b.y, b.power);
  });
  const FitProblem P(src, s, g);

  std::vector<std::pair<double, double>> seeds;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) seeds.push_back({P.D * i / 15.0, P.y_hi * j / 15.0});
  double pw = 0, cx = 0, cy = 0;
  for (auto& q : src) {
    seeds.push_back({std::clamp(q.x, 0.0, P.D), q.y});
    pw += q.power, cx += q.power * q.x, cy += q.power * q.y;
  }
  seeds.push_back({std::clamp(cx / pw, 0.0, P.D), cy / pw});

  std::vector<Candidate> cand(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto [p, f] = P.best_power(seeds[i].first, seeds[i].second);
    cand[i] = {seeds[i].first, seeds[i].second, p, f, i};
  }
  std::sort(cand.begin(), cand.end(), better);
  cand.resize(std::min<std::size_t>(8, cand.size()));
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = refine(P, cand[i]);
  const Candidate& w = *std::min_element(cand.begin(), cand.end(), better);

  HypotheticalMsi m;
  m.x_h = w.x, m.y_h = w.y, m.p_h = w.p, m.residual = w.f;
  m.scale = std::inner_product(P.w.begin(), P.w.end(), P.b.begin(), 0.0);
  return m;
}

Scenario with_msi(const Scenario& s, const HypotheticalMsi& m) {
  Scenario r = s;
  r.msi_x = m.x_h;
  r.msi_y = m.y_h;
  r.p_msi = m.p_h;
  return r;
}

}  // namespace uavrelay
