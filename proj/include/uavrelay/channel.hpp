#pragma once
#include <cstddef>
#include <optional>
#include <vector>

namespace uavrelay {

inline constexpr double kSpeedOfLight = 299792458.0;

struct ChannelParams {
  double carrier_frequency = 2e9;  // Hz
  double excess_loss_los = 1.0;
  double excess_loss_nlos = 1.0;
  double path_loss_exponent = 2.0;
  double mu_los = 0, mu_nlos = 0, eta_nlos = 0;

  // derives mu_los / mu_nlos; eta defaults to mu_los
  static ChannelParams make(double fc, double c_los, double c_nlos,
                            std::optional<double> eta = std::nullopt,
                            double alpha = 2.0);
  // direct coefficients, mostly for tests
  static ChannelParams from_coefficients(double mu_los, double mu_nlos, double eta);

  void validate() const;
  // planners only handle alpha == 2
  void require_quadratic() const;
};

enum class LinkKind { los, nlos, air_ground };

struct Scenario {
  double D = 1;          // Tx-Rx distance
  double msi_x = 0, msi_y = 0;
  double p_tx = 1, p_uav = 1, p_msi = 1;
  double h_min = 1, h_max = 1;
  double d_min = 0;
  ChannelParams channel;

  void validate() const;
  double Q() const { return msi_y * msi_y + (D - msi_x) * (D - msi_x); }
  // p_u * mu_nlos / eta, the Rx-side power factor of the locus
  double rx_factor() const { return p_uav * channel.mu_nlos / channel.eta_nlos; }
};

struct SirReport {
  std::vector<double> per_link;
  double system_sir = 0;
  std::size_t bottleneck_index = 0;

  static SirReport from_links(std::vector<double> links);
};

// hop_distances d_1..d_{N+1}; altitudes h_1..h_N
struct Placement {
  std::vector<double> hop_distances;
  std::vector<double> altitudes;

  std::size_t uav_count() const { return altitudes.size(); }
  // horizontal position of UAV k (1-based); 0 is the Tx
  double position(std::size_t k) const;
  std::vector<double> positions() const;
  static Placement uniform(std::vector<double> hops, double h);
  static Placement from_positions(const std::vector<double>& xs, double D,
                                  std::vector<double> alts);
};

double path_loss(const ChannelParams& p, LinkKind kind, double distance);

double sir_dual_uav(const Scenario& s, double x, double h);
double sir_dual_rx(const Scenario& s, double x, double h);
SirReport sir_system_dual(const Scenario& s, double x, double h);

SirReport sir_multihop(const Scenario& s, const Placement& pl);
SirReport sir_multihop_var_alt(const Scenario& s, const Placement& pl);

// one link of the variable-altitude chain, k in 1..N+1; positions include Tx and Rx
// (xs[0]=0, xs[N+1]=D), alts[0] and alts[N+1] unused
double chain_link_sir(const Scenario& s, const std::vector<double>& xs,
                      const std::vector<double>& alts, std::size_t k);

}  // namespace uavrelay
