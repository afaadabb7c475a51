#include "uavrelay/multihop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavrelay/dualhop.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/polynomial.hpp"

namespace uavrelay {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxUavs = 1000000;

// Furthest d in [lo, hi] with a d^2 + b d + c >= 0, a normalised so |a| ~ 1.
// `target` is the preferred stop inside the far (unbounded) component.
HopChoice furthest_feasible(double a, double b, double c, double lo, double hi, double target) {
  HopChoice out;
  if (hi < lo) return out;
  auto g = [&](double d) { return (a * d + b) * d + c; };
  const double snap = 1e-9 * std::max(1.0, std::abs(hi));
  if (std::abs(a) <= 1e-12) {
    out.branch = HopBranch::Linear;
    if (b >= 0) {
      if (g(hi) >= 0) out.found = true, out.d = hi;
    } else {
      double r = -c / b;
      if (r >= lo - snap) out.found = true, out.d = std::clamp(r, lo, hi);
    }
    return out;
  }
  auto q = solve_quadratic(a, b, c);
  if (a > 0) {
    if (q.count == 0 || hi >= q.hi) {
      double start = q.count == 0 ? lo : std::max(q.hi, lo);
      out.found = true;
      out.branch = HopBranch::RxSide;
      out.d = std::max(start, target);
      if (out.d >= hi) out.d = hi, out.branch = HopBranch::FullSpan;
      return out;
    }
    if (hi <= q.lo) return {hi, HopBranch::FullSpan, true, false};
    if (q.lo >= lo - snap) return {std::max(q.lo, lo), HopBranch::MinusRoot, true, false};
    return out;
  }
  if (q.count == 0) return out;
  if (q.hi < lo - snap || q.lo > hi) return out;
  if (q.hi >= hi) return {hi, HopBranch::FullSpan, true, false};
  return {std::max(q.hi, lo), HopBranch::PlusRoot, true, false};
}

}  // namespace

const char* to_string(HopBranch b) {
  switch (b) {
    case HopBranch::MinusRoot: return "minus-root";
    case HopBranch::PlusRoot: return "plus-root";
    case HopBranch::RxSide: return "rx-side";
    case HopBranch::FullSpan: return "full-span";
    case HopBranch::Linear: return "linear";
  }
  return "?";
}

FeasibilityCaps feasibility_caps(const Scenario& s, double h) {
  const auto& c = s.channel;
  const double X = s.msi_x, Y2 = s.msi_y * s.msi_y, h2 = h * h;
  FeasibilityCaps f;
  f.tx = s.p_tx * (X * X + Y2 + h2) / (s.p_msi * h2);
  f.middle = s.d_min > 0 ? s.p_uav * c.eta_nlos * (Y2 + h2) / (s.p_msi * c.mu_los * s.d_min * s.d_min)
                         : kInf;
  f.rx = s.p_uav * c.mu_nlos * s.Q() / (s.p_msi * c.eta_nlos * h2);
  f.bound = f.tx;
  f.binding = "tx";
  if (f.middle < f.bound) f.bound = f.middle, f.binding = "middle";
  if (f.rx < f.bound) f.bound = f.rx, f.binding = "rx";
  return f;
}

double feasibility_bound(const Scenario& s, double h) { return feasibility_caps(s, h).bound; }

HopChoice first_hop(const Scenario& s, double h, double gamma, double cap) {
  if (!(gamma > 0)) throw DomainError("first_hop: gamma must be positive");
  const double X = s.msi_x, Y2 = s.msi_y * s.msi_y, h2 = h * h;
  const double k = gamma * s.p_msi / s.p_tx;
  // (1 - k) d^2 - 2 X d + X^2 + Y^2 + h^2 - k h^2 >= 0
  auto hc = furthest_feasible(1 - k, -2 * X, X * X + Y2 + h2 - k * h2, 0.0, cap, cap);
  if (hc.found && hc.branch == HopBranch::RxSide) hc.branch = HopBranch::FullSpan;
  return hc;
}

double first_hop_distance(const Scenario& s, double h, double gamma) {
  auto hc = first_hop(s, h, gamma, s.D);
  if (!hc.found)
    throw InfeasibleTarget("first hop: no position satisfies SIR1 >= gamma", "tx");
  return hc.d;
}

double last_hop_max_distance(const Scenario& s, double h, double gamma) {
  if (!(gamma > 0)) throw DomainError("last_hop_max_distance: gamma must be positive");
  const auto& c = s.channel;
  double rad = s.p_uav * c.mu_nlos * s.Q() / (gamma * s.p_msi * c.eta_nlos) - h * h;
  if (rad < 0) {
    if (rad > -1e-12 * h * h) rad = 0;
    else throw InfeasibleTarget("last hop: gamma exceeds the Rx-side cap", "rx");
  }
  return std::sqrt(rad);
}

HopChoice middle_hop_distance(const Scenario& s, double h, double gamma, double consumed,
                              double d_max, double cap) {
  if (!(gamma > 0)) throw DomainError("middle_hop_distance: gamma must be positive");
  if (cap < 0) cap = s.D;
  const auto& c = s.channel;
  const double u = s.msi_x - consumed;
  const double k = gamma * (s.p_msi / c.eta_nlos) / (s.p_uav / c.mu_los);
  const double room = cap - consumed;
  const double target = s.D - d_max - consumed;
  auto hc = furthest_feasible(1 - k, -2 * u, u * u + s.msi_y * s.msi_y + h * h, s.d_min, room,
                              target);
  if (!hc.found) {
    // report how far the link could reach, flagged
    auto loose = furthest_feasible(1 - k, -2 * u, u * u + s.msi_y * s.msi_y + h * h, 0.0,
                                   std::max(room, 0.0), target);
    loose.below_safeguard = true;
    loose.found = false;
    return loose;
  }
  return hc;
}

DesignResult design_min_uavs(const Scenario& s, double h, double gamma) {
  s.validate();
  s.channel.require_quadratic();
  auto caps = feasibility_caps(s, h);
  if (gamma > caps.bound)
    throw InfeasibleTarget("gamma " + std::to_string(gamma) + " exceeds the " + caps.binding +
                               "-side cap " + std::to_string(caps.bound),
                           caps.binding);
  const double d_max = last_hop_max_distance(s, h, gamma);
  auto f1 = first_hop(s, h, gamma, s.D);
  if (!f1.found) throw InfeasibleTarget("first hop infeasible", "tx");
  DesignResult r;
  std::vector<double> hops{f1.d};
  r.trace.push_back(f1.branch);
  double consumed = f1.d;
  const double tol = 1e-12 * s.D;
  while (s.D - consumed > d_max + tol) {
    auto m = middle_hop_distance(s, h, gamma, consumed, d_max);
    if (!m.found && s.D - consumed < s.d_min)
      throw InfeasibleTarget("design_min_uavs: gap to Rx at x = " + std::to_string(consumed) +
                                 " is shorter than d_min but beyond d_max",
                             "middle");
    if (!m.found || m.d <= 0)
      throw NumericFailure("design_min_uavs: middle hop stalled at x = " + std::to_string(consumed));
    hops.push_back(m.d);
    r.trace.push_back(m.branch);
    consumed += m.d;
    if (hops.size() > kMaxUavs) throw InfeasibleTarget("design_min_uavs: UAV count explodes", "middle");
  }
  hops.push_back(std::max(0.0, s.D - consumed));
  r.placement = Placement::uniform(std::move(hops), h);
  r.achieved_gamma = sir_multihop(s, r.placement).system_sir;
  return r;
}

namespace {

// one forward-propagation round of the distributed algorithm
IterationRecord forward_round(const Scenario& s, double h, std::size_t n, double gamma) {
  IterationRecord rec;
  rec.gamma = gamma;
  rec.system_sir = std::numeric_limits<double>::quiet_NaN();
  const auto& c = s.channel;
  const double rad = s.p_uav * c.mu_nlos * s.Q() / (gamma * s.p_msi * c.eta_nlos) - h * h;
  const double d_max = rad > 0 ? std::sqrt(rad) : 0.0;
  // UAV k may not pass D - (N-k) d_min, so the rest still fit
  auto cap_of = [&](std::size_t k) { return s.D - double(n - k) * s.d_min; };
  auto f1 = first_hop(s, h, gamma, cap_of(1));
  if (!f1.found) return rec;
  rec.hops.push_back(f1.d);
  double consumed = f1.d;
  for (std::size_t k = 2; k <= n; ++k) {
    auto m = middle_hop_distance(s, h, gamma, consumed, d_max, cap_of(k));
    if (!m.found) return rec;
    rec.hops.push_back(m.d);
    consumed += m.d;
  }
  rec.hops.push_back(std::max(0.0, s.D - consumed));
  rec.covered = rad >= 0 && s.D - consumed <= d_max + 1e-12 * s.D;
  rec.system_sir = sir_multihop(s, Placement::uniform(rec.hops, h)).system_sir;
  return rec;
}

}  // namespace

DistributedResult distributed_max_sir(const Scenario& s, double h, std::size_t n_uavs,
                                      double epsilon) {
  s.validate();
  s.channel.require_quadratic();
  if (n_uavs < 1) throw DomainError("distributed_max_sir: need N >= 1");
  if (!(epsilon > 0)) throw DomainError("distributed_max_sir: epsilon must be positive");
  if (double(n_uavs - 1) * s.d_min > s.D)
    throw InfeasibleTarget("distributed_max_sir: N UAVs do not fit with d_min spacing", "middle");
  DistributedResult r;
  r.trace.epsilon = epsilon;
  const double rx0 = s.p_uav * s.channel.mu_nlos * s.Q() / (s.p_msi * s.channel.eta_nlos * h * h);
  r.gamma0 = std::min(sir_dual_uav(s, 0.0, h), rx0);
  for (std::size_t i = 0;; ++i) {
    double gamma = r.gamma0 - double(i) * epsilon;
    if (!(gamma > 0))
      throw InfeasibleTarget("distributed_max_sir: no positive target covers D", "middle");
    auto rec = forward_round(s, h, n_uavs, gamma);
    bool done = rec.covered;
    r.trace.iterations.push_back(std::move(rec));
    if (done) break;
  }
  const auto& last = r.trace.iterations.back();
  r.gamma_final = last.gamma;
  r.placement = Placement::uniform(last.hops, h);
  return r;
}

RefineResult refine_altitudes(const Scenario& s, const Placement& start, const RefineOptions& o) {
  s.validate();
  const std::size_t n = start.uav_count();
  sir_multihop_var_alt(s, start);  // validates the start
  std::vector<double> xs{0.0};
  for (double x : start.positions()) xs.push_back(x);
  xs.push_back(s.D);
  std::vector<double> alts(n + 2, 0.0);
  for (std::size_t i = 0; i < n; ++i) alts[i + 1] = start.altitudes[i];

  auto system = [&] {
    double m = kInf;
    for (std::size_t k = 1; k <= n + 1; ++k) m = std::min(m, chain_link_sir(s, xs, alts, k));
    return m;
  };
  auto local = [&](std::size_t i) {
    return std::min(chain_link_sir(s, xs, alts, i), chain_link_sir(s, xs, alts, i + 1));
  };
  auto sep_ok = [&](std::size_t i, double x, double h) {
    const double lim = s.d_min * s.d_min;
    if (i > 1) {
      double dx = x - xs[i - 1], dh = h - alts[i - 1];
      if (dx * dx + dh * dh < lim) return false;
    }
    if (i < n) {
      double dx = xs[i + 1] - x, dh = alts[i + 1] - h;
      if (dx * dx + dh * dh < lim) return false;
    }
    return true;
  };

  RefineResult r;
  r.sir_history.push_back(system());
  for (std::size_t it = 0; it < o.iterations; ++it) {
    for (std::size_t i = 1; i <= n; ++i) {
      const double x0 = xs[i], h0 = alts[i];
      const double cur = local(i);
      double best = cur, bx = x0, bh = h0;
      const double xl = xs[i - 1], xr = xs[i + 1];
      const double hl = std::max(s.h_min, h0 - o.eps_h), hr = std::min(s.h_max, h0 + o.eps_h);
      std::vector<double> cx{x0}, ch{h0};
      if (o.nx > 1)
        for (std::size_t a = 0; a < o.nx; ++a) cx.push_back(xl + (xr - xl) * double(a) / double(o.nx - 1));
      if (o.nh > 1)
        for (std::size_t b = 0; b < o.nh; ++b) ch.push_back(hl + (hr - hl) * double(b) / double(o.nh - 1));
      for (double x : cx)
        for (double h : ch) {
          if (!sep_ok(i, x, h)) continue;
          xs[i] = x;
          alts[i] = h;
          double v = local(i);
          if (v > best) best = v, bx = x, bh = h;
        }
      xs[i] = bx;
      alts[i] = bh;
    }
    r.sir_history.push_back(system());
  }
  std::vector<double> pos(xs.begin() + 1, xs.end() - 1);
  r.placement = Placement::from_positions(pos, s.D, std::vector<double>(alts.begin() + 1, alts.end() - 1));
  return r;
}

}  // namespace uavrelay
