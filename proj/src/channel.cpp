#include "uavrelay/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uavrelay/errors.hpp"

namespace uavrelay {

ChannelParams ChannelParams::make(double fc, double c_los, double c_nlos,
                                  std::optional<double> eta, double alpha) {
  ChannelParams p;
  p.carrier_frequency = fc;
  p.excess_loss_los = c_los;
  p.excess_loss_nlos = c_nlos;
  p.path_loss_exponent = alpha;
  double k = std::pow(4.0 * std::numbers::pi * fc / kSpeedOfLight, alpha);
  p.mu_los = c_los * k;
  p.mu_nlos = c_nlos * k;
  p.eta_nlos = eta ? *eta : p.mu_los;
  p.validate();
  return p;
}

ChannelParams ChannelParams::from_coefficients(double mu_los, double mu_nlos, double eta) {
  ChannelParams p;
  p.carrier_frequency = 0;
  p.mu_los = mu_los;
  p.mu_nlos = mu_nlos;
  p.eta_nlos = eta;
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (!(mu_los > 0) || !(mu_nlos > 0))
    throw DomainError("channel: mu_los and mu_nlos must be positive");
  if (!(eta_nlos > 0)) throw DomainError("channel: eta_nlos must be positive");
  if (!(path_loss_exponent > 0)) throw DomainError("channel: path-loss exponent must be positive");
}

void ChannelParams::require_quadratic() const {
  if (path_loss_exponent != 2.0)
    throw DomainError("closed-form planners need path_loss_exponent == 2");
}

void Scenario::validate() const {
  channel.validate();
  if (!(D > 0)) throw DomainError("scenario: D must be positive");
  if (!(msi_x >= 0 && msi_x <= D)) throw DomainError("scenario: msi_x must lie in [0, D]");
  if (!(msi_y >= 0)) throw DomainError("scenario: msi_y must be >= 0");
  if (!(h_min > 0 && h_min <= h_max)) throw DomainError("scenario: need 0 < h_min <= h_max");
  if (!(p_tx > 0 && p_uav > 0 && p_msi > 0)) throw DomainError("scenario: powers must be positive");
  if (!(d_min >= 0)) throw DomainError("scenario: d_min must be >= 0");
}

SirReport SirReport::from_links(std::vector<double> links) {
  if (links.empty()) throw DomainError("SirReport: no links");
  SirReport r;
  r.per_link = std::move(links);
  auto it = std::min_element(r.per_link.begin(), r.per_link.end());
  r.bottleneck_index = static_cast<std::size_t>(it - r.per_link.begin());
  r.system_sir = *it;
  return r;
}

double Placement::position(std::size_t k) const {
  double x = 0;
  for (std::size_t i = 0; i < k && i < hop_distances.size(); ++i) x += hop_distances[i];
  return x;
}

std::vector<double> Placement::positions() const {
  std::vector<double> xs;
  xs.reserve(altitudes.size());
  double x = 0;
  for (std::size_t i = 0; i < altitudes.size(); ++i) {
    x += hop_distances[i];
    xs.push_back(x);
  }
  return xs;
}

Placement Placement::uniform(std::vector<double> hops, double h) {
  Placement p;
  std::size_t n = hops.empty() ? 0 : hops.size() - 1;
  p.hop_distances = std::move(hops);
  p.altitudes.assign(n, h);
  return p;
}

Placement Placement::from_positions(const std::vector<double>& xs, double D,
                                    std::vector<double> alts) {
  Placement p;
  double prev = 0;
  for (double x : xs) {
    p.hop_distances.push_back(x - prev);
    prev = x;
  }
  p.hop_distances.push_back(D - prev);
  p.altitudes = std::move(alts);
  return p;
}

double path_loss(const ChannelParams& p, LinkKind kind, double distance) {
  if (!(distance > 0)) throw DomainError("path_loss: distance must be positive");
  switch (kind) {
    case LinkKind::los: return p.mu_los * std::pow(distance, p.path_loss_exponent);
    case LinkKind::nlos: return p.mu_nlos * std::pow(distance, p.path_loss_exponent);
    case LinkKind::air_ground: return p.eta_nlos * distance * distance;
  }
  throw DomainError("path_loss: unknown link kind");
}

double sir_dual_uav(const Scenario& s, double x, double h) {
  double dx = x - s.msi_x;
  return s.p_tx * (dx * dx + s.msi_y * s.msi_y + h * h) / (s.p_msi * (x * x + h * h));
}

double sir_dual_rx(const Scenario& s, double x, double h) {
  double r = s.D - x;
  return s.p_uav * s.Q() /
         (s.p_msi * (r * r + h * h) * (s.channel.eta_nlos / s.channel.mu_nlos));
}

SirReport sir_system_dual(const Scenario& s, double x, double h) {
  double tol = 1e-12 * std::max(1.0, s.D);
  if (x < -tol || x > s.D + tol) throw DomainError("sir_system_dual: x outside [0, D]");
  double htol = 1e-12 * std::max(1.0, s.h_max);
  if (h < s.h_min - htol || h > s.h_max + htol)
    throw DomainError("sir_system_dual: h outside [h_min, h_max]");
  return SirReport::from_links({sir_dual_uav(s, x, h), sir_dual_rx(s, x, h)});
}

double chain_link_sir(const Scenario& s, const std::vector<double>& xs,
                      const std::vector<double>& alts, std::size_t k) {
  const std::size_t n = xs.size() - 2;
  const double X = s.msi_x, Y2 = s.msi_y * s.msi_y;
  const auto& c = s.channel;
  if (k == 1) {
    double x = xs[1], h = alts[1];
    double dx = X - x;
    return s.p_tx * (dx * dx + Y2 + h * h) / (s.p_msi * (x * x + h * h));
  }
  if (k == n + 1) {
    double d = s.D - xs[n], h = alts[n];
    return s.p_uav * c.mu_nlos * s.Q() / (s.p_msi * c.eta_nlos * (d * d + h * h));
  }
  double d = xs[k] - xs[k - 1], dh = alts[k] - alts[k - 1], h = alts[k];
  double dx = X - xs[k];
  return s.p_uav * c.eta_nlos * (dx * dx + Y2 + h * h) /
         (s.p_msi * c.mu_los * (d * d + dh * dh));
}

namespace {

void check_sum(const Scenario& s, const Placement& pl) {
  if (pl.hop_distances.size() != pl.altitudes.size() + 1 || pl.altitudes.empty())
    throw DomainError("placement: need N >= 1 altitudes and N+1 hops");
  double sum = 0;
  for (double d : pl.hop_distances) {
    if (d < -1e-9 * s.D) throw DomainError("placement: negative hop distance");
    sum += d;
  }
  if (std::abs(sum - s.D) > 1e-6 * s.D)
    throw DomainError("placement: hop distances sum to " + std::to_string(sum) +
                      ", expected D");
}

std::vector<double> node_positions(const Scenario& s, const Placement& pl) {
  std::vector<double> xs{0.0};
  for (double x : pl.positions()) xs.push_back(x);
  xs.push_back(s.D);
  return xs;
}

}  // namespace

SirReport sir_multihop(const Scenario& s, const Placement& pl) {
  check_sum(s, pl);
  const std::size_t n = pl.uav_count();
  for (std::size_t k = 2; k <= n; ++k)
    if (pl.hop_distances[k - 1] < s.d_min * (1 - 1e-9))
      throw DomainError("sir_multihop: middle hop below d_min");
  auto xs = node_positions(s, pl);
  // uniform chain: middle links see horizontal distance only
  std::vector<double> alts(n + 2, pl.altitudes[0]);
  std::vector<double> links;
  links.reserve(n + 1);
  for (std::size_t k = 1; k <= n + 1; ++k) links.push_back(chain_link_sir(s, xs, alts, k));
  return SirReport::from_links(std::move(links));
}

SirReport sir_multihop_var_alt(const Scenario& s, const Placement& pl) {
  check_sum(s, pl);
  const std::size_t n = pl.uav_count();
  double htol = 1e-9 * s.h_max;
  for (double h : pl.altitudes)
    if (h < s.h_min - htol || h > s.h_max + htol)
      throw DomainError("sir_multihop_var_alt: altitude outside [h_min, h_max]");
  auto xs = node_positions(s, pl);
  std::vector<double> alts(n + 2, 0.0);
  for (std::size_t i = 0; i < n; ++i) alts[i + 1] = pl.altitudes[i];
  for (std::size_t k = 2; k <= n; ++k) {
    double d = xs[k] - xs[k - 1], dh = alts[k] - alts[k - 1];
    if (std::sqrt(d * d + dh * dh) < s.d_min * (1 - 1e-9))
      throw DomainError("sir_multihop_var_alt: UAV separation below d_min");
  }
  std::vector<double> links;
  for (std::size_t k = 1; k <= n + 1; ++k) links.push_back(chain_link_sir(s, xs, alts, k));
  return SirReport::from_links(std::move(links));
}

}  // namespace uavrelay
