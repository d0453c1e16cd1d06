#pragma once

#include "polar_rsma/analytic.hpp"
#include "polar_rsma/channel.hpp"
#include "polar_rsma/one_ring.hpp"
#include "polar_rsma/phy.hpp"
#include "polar_rsma/precoder.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polar_rsma {

inline const std::vector<std::string>& known_schemes() {
  static const std::vector<std::string> k = {"dp-rsma", "sp-rsma", "sp-noma",
                                             "dp-noma", "oma"};
  return k;
}

// Full scenario description. Defaults reproduce the reference setup: a
// 100-antenna dual-polarized array (50 cross-polarized pairs), 4 groups of
// 3 users, group azimuths 30 + 160(g-1) degrees (mod 360), users at
// 200/170/140 m, pathloss zeta = 4e4 d^-2.5, RSMA powers alpha = 0.7 and
// beta_u = 0.1, NOMA powers 5/8, 2/8, 1/8.
struct SystemConfig {
  int m_total = 100;       // total antennas across both polarizations
  int groups = 4;          // G
  int users_per_group = 3; // U
  int projected_dim = 6;   // Mbar (total across both polarizations)

  double chi = 0.001;      // cross-polar leakage (iXPD)
  double xi = 0.0;         // residual SIC factor for baseline schemes
  double snr_db = 26.0;

  double alpha = 0.7;
  std::vector<double> betas = {0.1, 0.1, 0.1};
  std::vector<double> noma_powers = {5.0 / 8, 2.0 / 8, 1.0 / 8};

  double rate_common = 0.5;                          // R^c, bpcu
  std::vector<double> rate_private = {0.1, 0.5, 1.2};  // R^p_u, bpcu

  double array_gain = 4.0e4;   // delta
  double pathloss_exp = 2.5;   // eta
  std::vector<double> user_distances_m = {200.0, 170.0, 140.0};
  std::vector<double> group_azimuths_deg;  // empty: 30 + 160(g-1) mod 360

  double angular_spread_deg = 10.0;
  double antenna_spacing_wl = 0.5;
  // Fraction of covariance energy each group's eigenbasis keeps. 0.9 holds
  // the bases inside their angular supports, which the null-space precoder
  // construction relies on (see eigen_structure).
  double energy_threshold = 0.9;

  long long trials = 100000;
  std::uint64_t master_seed = 271828;
  std::vector<double> snr_grid_db;  // empty: {snr_db}
  std::vector<double> chi_grid;     // empty: {chi}
  std::vector<double> xi_grid;      // empty: {xi}
  std::vector<std::string> schemes = {"dp-rsma"};

  void validate() const;
  std::vector<double> azimuths() const;
  std::vector<double> large_scale_gains() const;
  PowerAllocation<double> power_allocation(double xi_value) const;
  RateTargets<double> rate_targets() const;
  bool wants_single_pol() const;
};

inline double rho_from_db(double snr_db) {
  return std::pow(10.0, snr_db / 10.0);
}

// Fading-independent state for one array (dual-polarized half-array or the
// full single-polarized array): all group models, the reported group's
// precoder F, and the channel factor W = F^H U_0 Lambda_0^{1/2} so that
// effective channels are drawn directly as sqrt(zeta) W g without forming
// full-size vectors.
struct ArrayScene {
  std::vector<GroupModel<double>> groups;
  GroupPrecoder<double> precoder;  // group 0, the reported group
  Eigen::MatrixXcd w;              // dim x reduced_rank
  int rank_cap = 0;
};

struct Scene {
  SystemConfig config;
  ArrayScene dp;
  std::optional<ArrayScene> sp;  // built only when a single-pol scheme runs
  std::vector<double> zetas;     // per user, config order
  double phi_printed = 0;        // Mbar / tr(F^H R F)
  double phi = 0;                // moment-matched rate normalizer

  GainLaw<double> law(int user, double chi) const;
};

// Builds covariances, eigen-structures and the reported group's precoder.
// Throws ConfigError naming the violated inequality when the projection
// constraints cannot be met.
Scene build_scene(const SystemConfig& config, bool force_single_pol = false);

// Closed-form columns for one dp-rsma sweep point.
struct AnalyticPoint {
  std::vector<double> outage;       // per user, union of the two events
  std::vector<double> outage_common;
  std::vector<double> outage_private;
  double erg_common = 0;            // group sum over users
  std::vector<double> erg_private;  // per user
  double erg_total = 0;
};

AnalyticPoint analytic_point(const Scene& scene, double snr_db, double chi);

}  // namespace polar_rsma
