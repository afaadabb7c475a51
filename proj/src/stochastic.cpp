#include "uavrelay/stochastic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <optional>

#include "uavrelay/errors.hpp"

namespace uavrelay {

namespace {
constexpr std::size_t kMinEmpiricalSamples = 1000;
constexpr std::size_t kMaxUavs = 100000;
}  // namespace

InterferenceModel InterferenceModel::deterministic(std::vector<Knot> k) {
  InterferenceModel m;
  m.kind_ = Kind::deterministic;
  m.knots_ = std::move(k);
  for (auto& q : m.knots_)
    if (!(q.a > 0)) throw DomainError("deterministic field: power must be positive");
  m.finalize();
  return m;
}

InterferenceModel InterferenceModel::constant_power(double c) {
  return deterministic({{0.0, c, 0.0}});
}

InterferenceModel InterferenceModel::beta(std::vector<Knot> k, double i_max) {
  InterferenceModel m;
  m.kind_ = Kind::beta;
  m.knots_ = std::move(k);
  m.i_max_ = i_max;
  if (!(i_max > 0)) throw DomainError("beta field: i_max must be positive");
  for (auto& q : m.knots_) {
    if (!(q.a > 1)) throw DomainError("beta field: alpha <= 1 makes E[1/I] diverge");
    if (!(q.b > 0)) throw DomainError("beta field: beta must be positive");
  }
  m.finalize();
  return m;
}

InterferenceModel InterferenceModel::tabulated(std::vector<Knot> k) {
  InterferenceModel m;
  m.kind_ = Kind::tabulated_upsilon;
  m.knots_ = std::move(k);
  for (auto& q : m.knots_)
    if (!(q.a > 0)) throw DomainError("tabulated field: upsilon must be positive");
  m.finalize();
  return m;
}

InterferenceModel InterferenceModel::numeric(NegMgf mgf, bool iid) {
  InterferenceModel m;
  m.kind_ = Kind::numeric_mgf;
  m.mgf_ = std::move(mgf);
  m.iid_ = iid;
  return m;
}

InterferenceModel InterferenceModel::gamma_mgf(std::vector<Knot> k) {
  InterferenceModel m;
  m.kind_ = Kind::gamma_mgf;
  m.knots_ = std::move(k);
  for (auto& q : m.knots_)
    if (!(q.a > 0) || !(q.b > 0)) throw DomainError("gamma field: shape and scale must be positive");
  m.finalize();
  return m;
}

InterferenceModel InterferenceModel::empirical(std::vector<Bin> bins) {
  InterferenceModel m;
  m.kind_ = Kind::empirical;
  m.bins_ = std::move(bins);
  if (m.bins_.empty()) throw DomainError("empirical field: no bins");
  for (auto& b : m.bins_) {
    if (b.samples.size() < kMinEmpiricalSamples)
      throw DomainError("empirical field: a bin has " + std::to_string(b.samples.size()) +
                        " samples, need at least 1000");
    for (double v : b.samples)
      if (!(v > 0)) throw DomainError("empirical field: samples must be positive");
  }
  std::sort(m.bins_.begin(), m.bins_.end(), [](auto& a, auto& b) { return a.x_lo < b.x_lo; });
  m.iid_ = m.bins_.size() == 1;
  return m;
}

void InterferenceModel::finalize() {
  if (knots_.empty()) throw DomainError("interference field: no knots");
  std::sort(knots_.begin(), knots_.end(), [](auto& a, auto& b) { return a.x < b.x; });
  iid_ = std::all_of(knots_.begin(), knots_.end(), [&](auto& q) {
    return q.a == knots_.front().a && q.b == knots_.front().b;
  });
}

const char* InterferenceModel::kind_name() const {
  switch (kind_) {
    case Kind::deterministic: return "deterministic";
    case Kind::beta: return "beta";
    case Kind::tabulated_upsilon: return "tabulated_upsilon";
    case Kind::numeric_mgf: return "numeric_mgf";
    case Kind::gamma_mgf: return "gamma_mgf";
    case Kind::empirical: return "empirical";
  }
  return "?";
}

void InterferenceModel::interp(double x, double& a, double& b) const {
  if (x <= knots_.front().x) { a = knots_.front().a; b = knots_.front().b; return; }
  if (x >= knots_.back().x) { a = knots_.back().a; b = knots_.back().b; return; }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Knot& k) { return v < k.x; });
  const Knot& r = *it;
  const Knot& l = *(it - 1);
  double t = (x - l.x) / (r.x - l.x);
  a = l.a + t * (r.a - l.a);
  b = l.b + t * (r.b - l.b);
}

double InterferenceModel::upsilon(double x) const {
  double a = 0, b = 0;
  switch (kind_) {
    case Kind::deterministic: interp(x, a, b); return 1.0 / a;
    case Kind::beta: interp(x, a, b); return beta_upsilon(a, b, i_max_);
    case Kind::tabulated_upsilon: interp(x, a, b); return a;
    case Kind::gamma_mgf:
      interp(x, a, b);
      return upsilon_from_mgf([a, b](double y) { return std::pow(1 + b * y, -a); });
    case Kind::numeric_mgf: return upsilon_from_mgf([&](double y) { return mgf_(x, y); });
    case Kind::empirical: {
      const Bin* bin = &bins_.front();
      for (auto& bb : bins_)
        if (x >= bb.x_lo) bin = &bb;
      double acc = 0;
      for (double v : bin->samples) acc += 1.0 / v;
      return acc / double(bin->samples.size());
    }
  }
  throw DomainError("upsilon: unknown field kind");
}

double upsilon(const InterferenceModel& m, double x) { return m.upsilon(x); }

double beta_upsilon(double alpha, double beta, double i_max) {
  if (!(alpha > 1)) throw DomainError("beta_upsilon: alpha <= 1 makes E[1/I] diverge");
  if (!(beta > 0) || !(i_max > 0)) throw DomainError("beta_upsilon: beta and i_max must be positive");
  return (alpha + beta - 1) / ((alpha - 1) * i_max);
}

double upsilon_from_mgf(const std::function<double(double)>& f) {
  using boost::math::quadrature::gauss_kronrod;
  // first panel ends roughly where M(-y) halves
  double y0 = 1;
  while (f(y0) < 0.5 && y0 > 1e-300) y0 *= 0.5;
  while (f(y0) > 0.5 && y0 < 1e300) y0 *= 2;
  double err = 0;
  double total = gauss_kronrod<double, 61>::integrate(f, 0.0, y0, 15, 1e-13, &err);
  double a = y0;
  for (int panel = 0; panel < 2000; ++panel) {
    double b = 2 * a;
    if (!std::isfinite(b))
      break;
    double c = gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13, &err);
    total += c;
    a = b;
    if (c <= 1e-14 * total && f(a) <= 1e-12) return total;
  }
  throw NumericFailure("upsilon: MGF integral did not converge (M(-y) = " + std::to_string(f(a)) +
                       " at y = " + std::to_string(a) + ")");
}

ExpectedSir expected_sir_dual(const InterferenceModel& m, const Scenario& s, double x, double h) {
  const double eta = s.channel.eta_nlos;
  ExpectedSir e;
  e.uav = m.upsilon(x) * s.p_tx / (eta * (x * x + h * h));
  double r = s.D - x;
  e.rx = m.upsilon(s.D) * s.p_uav / (eta * (r * r + h * h));
  return e;
}

SirReport expected_sir_chain(const InterferenceModel& m, const Scenario& s, const Placement& pl) {
  const std::size_t n = pl.uav_count();
  if (n == 0 || pl.hop_distances.size() != n + 1) throw DomainError("expected_sir_chain: bad placement");
  const double h = pl.altitudes.front(), eta = s.channel.eta_nlos, mu = s.channel.mu_los;
  auto xs = pl.positions();
  std::vector<double> links;
  links.push_back(m.upsilon(xs[0]) * s.p_tx / (eta * (xs[0] * xs[0] + h * h)));
  for (std::size_t k = 2; k <= n; ++k) {
    double d = pl.hop_distances[k - 1];
    links.push_back(d > 0 ? m.upsilon(xs[k - 1]) * s.p_uav / (mu * d * d)
                          : std::numeric_limits<double>::infinity());
  }
  double r = pl.hop_distances.back();
  links.push_back(m.upsilon(s.D) * s.p_uav / (eta * (r * r + h * h)));
  return SirReport::from_links(std::move(links));
}

SingleUavResult single_uav_position(const InterferenceModel& m, const Scenario& s, double h,
                                    double epsilon) {
  if (!(epsilon > 0)) throw DomainError("single_uav_position: epsilon must be positive");
  SingleUavResult r;
  const double eta = s.channel.eta_nlos, ups_d = m.upsilon(s.D);
  const double k = ups_d * s.p_uav / eta;
  r.gamma_max = k / (h * h);
  r.gamma_min = k / (s.D * s.D + h * h);
  double gamma = r.gamma_max;
  for (;;) {
    double rad = std::max(0.0, k / gamma - h * h);
    double x = std::clamp(s.D - std::sqrt(rad), 0.0, s.D);
    double e1 = expected_sir_dual(m, s, x, h).uav;
    r.trace.push_back({gamma, x, e1});
    if (e1 >= gamma) {
      r.x = x;
      break;
    }
    double next = gamma - epsilon;
    if (next <= r.gamma_min) {
      r.fallback = true;
      std::size_t best = 0;
      double bv = -1;
      for (std::size_t i = 0; i < r.trace.size(); ++i) {
        double v = std::min(r.trace[i].gamma, r.trace[i].e_sir_uav);
        if (v > bv) bv = v, best = i;
      }
      r.x = r.trace[best].x;
      break;
    }
    gamma = next;
  }
  auto e = expected_sir_dual(m, s, r.x, h);
  r.achieved = std::min(e.uav, e.rx);
  return r;
}

std::vector<Interval> first_hop_set(const InterferenceModel& m, const Scenario& s, double h,
                                    double gamma, std::size_t scan) {
  const double eta = s.channel.eta_nlos;
  auto res = [&](double d) { return s.p_tx * m.upsilon(d) / eta - gamma * (d * d + h * h); };
  auto refine = [&](double a, double b) {
    // res(a) and res(b) differ in sign
    bool sa = res(a) >= 0;
    for (int i = 0; i < 100 && b - a > 1e-14 * s.D; ++i) {
      double c = 0.5 * (a + b);
      if ((res(c) >= 0) == sa) a = c;
      else b = c;
    }
    return sa ? a : b;  // stay on the feasible side
  };
  std::vector<Interval> out;
  std::vector<double> xs(scan), vs(scan);
  for (std::size_t i = 0; i < scan; ++i) {
    xs[i] = i + 1 == scan ? s.D : s.D * double(i) / double(scan - 1);
    vs[i] = res(xs[i]);
  }
  std::optional<double> open;
  if (vs[0] >= 0) open = 0.0;
  for (std::size_t i = 1; i < scan; ++i) {
    bool prev = vs[i - 1] >= 0, cur = vs[i] >= 0;
    if (!prev && cur) open = refine(xs[i - 1], xs[i]);
    if (prev && !cur) {
      out.push_back({open.value_or(0.0), refine(xs[i - 1], xs[i])});
      open.reset();
    }
  }
  if (open) out.push_back({*open, s.D});
  return out;
}

namespace {

// largest point of the union within [lo, hi]
std::optional<double> largest_in(const std::vector<Interval>& set, double lo, double hi) {
  for (auto it = set.rbegin(); it != set.rend(); ++it) {
    double a = std::max(it->lo, lo), b = std::min(it->hi, hi);
    if (a <= b) return b;
  }
  return std::nullopt;
}

double hop_length(const InterferenceModel& m, const Scenario& s, double gamma, double p) {
  return std::sqrt(s.p_uav * m.upsilon(p) / (gamma * s.channel.mu_los));
}

}  // namespace

StochasticDesign design_min_uavs_stochastic(const InterferenceModel& m, const Scenario& s,
                                            double h, double gamma) {
  s.validate();
  if (!(gamma > 0)) throw DomainError("design_min_uavs_stochastic: gamma must be positive");
  StochasticDesign r;
  const double eta = s.channel.eta_nlos;
  double rad = s.p_uav * m.upsilon(s.D) / (eta * gamma) - h * h;
  if (rad < 0) throw InfeasibleTarget("stochastic design: gamma exceeds the Rx-side cap", "rx");
  r.d_max = std::sqrt(rad);
  r.d1_set = first_hop_set(m, s, h, gamma);
  if (r.d1_set.empty()) throw InfeasibleTarget("stochastic design: no first-hop position", "tx");

  auto finish = [&](std::vector<double> pos, double rho) {
    r.rho = rho;
    r.placement = Placement::from_positions(pos, s.D, std::vector<double>(pos.size(), h));
    r.achieved = expected_sir_chain(m, s, r.placement).system_sir;
    return r;
  };

  if (auto d1 = largest_in(r.d1_set, s.D - r.d_max, s.D)) return finish({*d1}, 0.0);

  const double step = r.d_max / 64;
  for (std::size_t n = 2; n <= kMaxUavs; ++n) {
    bool any_room = false;
    for (int j = 0; j <= 64; ++j) {
      const double rho = j == 64 ? r.d_max : j * step;
      std::vector<double> pos(n + 1);
      pos[n] = s.D - (r.d_max - rho);
      bool ok = true;
      for (std::size_t k = n; k >= 3 && ok; --k) {
        double l = hop_length(m, s, gamma, pos[k]);
        if (l < s.d_min) ok = false;
        pos[k - 1] = pos[k] - l;
        if (pos[k - 1] <= 0) ok = false;
      }
      if (!ok) continue;
      double l2 = hop_length(m, s, gamma, pos[2]);
      if (l2 < s.d_min || pos[2] - s.d_min < 0) continue;
      any_room = true;
      if (auto d1 = largest_in(r.d1_set, std::max(0.0, pos[2] - l2), pos[2] - s.d_min)) {
        pos[1] = *d1;
        return finish(std::vector<double>(pos.begin() + 1, pos.end()), rho);
      }
    }
    if (!any_room) break;
  }
  throw InfeasibleTarget("stochastic design: the span cannot be covered at this target", "middle");
}

DistributedEsirResult distributed_max_esir(const InterferenceModel& m, const Scenario& s,
                                           double h, std::size_t n, double epsilon) {
  s.validate();
  if (n < 1) throw DomainError("distributed_max_esir: need N >= 1");
  if (!(epsilon > 0)) throw DomainError("distributed_max_esir: epsilon must be positive");
  if (double(n - 1) * s.d_min > s.D)
    throw InfeasibleTarget("distributed_max_esir: N UAVs do not fit with d_min spacing", "middle");
  DistributedEsirResult r;
  r.epsilon = epsilon;
  const double eta = s.channel.eta_nlos;
  const double krx = s.p_uav * m.upsilon(s.D) / eta;
  r.gamma0 = krx / (h * h);
  for (std::size_t i = 0;; ++i) {
    const double gamma = r.gamma0 - double(i) * epsilon;
    if (!(gamma > 0))
      throw InfeasibleTarget("distributed_max_esir: no positive target covers D", "middle");
    EsirIteration it;
    it.gamma = gamma;
    it.system_esir = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> pos(n + 1);
    double dmax = std::sqrt(std::max(0.0, krx / gamma - h * h));
    // UAV k cannot sit before (k-1) d_min, nor past the Rx
    pos[n] = std::min(s.D, std::max(s.D - dmax, double(n - 1) * s.d_min));
    bool ok = true;
    for (std::size_t k = n; k >= 2; --k) {
      double l = hop_length(m, s, gamma, pos[k]);
      if (l < s.d_min) { ok = false; break; }
      double floor_k = k >= 3 ? double(k - 2) * s.d_min : 0.0;
      pos[k - 1] = std::max(pos[k] - l, floor_k);
    }
    if (ok) {
      std::vector<double> xs(pos.begin() + 1, pos.end());
      auto pl = Placement::from_positions(xs, s.D, std::vector<double>(n, h));
      it.hops = pl.hop_distances;
      it.system_esir = expected_sir_chain(m, s, pl).system_sir;
      it.covered = expected_sir_dual(m, s, pos[1], h).uav >= gamma;
    }
    bool done = it.covered;
    r.trace.push_back(std::move(it));
    if (done) break;
  }
  r.gamma_final = r.trace.back().gamma;
  r.placement = Placement::from_positions(
      [&] {
        std::vector<double> xs;
        double x = 0;
        const auto& hops = r.trace.back().hops;
        for (std::size_t k = 0; k + 1 < hops.size(); ++k) xs.push_back(x += hops[k]);
        return xs;
      }(),
      s.D, std::vector<double>(n, h));
  return r;
}

}  // namespace uavrelay
