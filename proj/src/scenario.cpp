#include "polar_rsma/scenario.hpp"

#include "polar_rsma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polar_rsma {

namespace {

bool is_single_pol(const std::string& scheme) {
  return scheme == "sp-rsma" || scheme == "sp-noma" || scheme == "oma";
}

void check_size(const std::vector<double>& v, std::size_t n,
                const char* name) {
  if (v.size() != n) {
    std::ostringstream os;
    os << "config: " << name << " needs " << n << " entries, got "
       << v.size();
    throw ConfigError(os.str());
  }
}

}  // namespace

void SystemConfig::validate() const {
  if (m_total < 4 || m_total % 2 != 0)
    throw ConfigError("config: m_total must be even and >= 4");
  if (groups < 1) throw ConfigError("config: groups must be >= 1");
  if (users_per_group < 1)
    throw ConfigError("config: users_per_group must be >= 1");
  if (projected_dim < 2 || projected_dim % 2 != 0)
    throw ConfigError("config: projected_dim must be even and >= 2");
  if (!(projected_dim / 2 > users_per_group - 1))
    throw ConfigError(
        "config: violated projected_dim/2 > users_per_group - 1");
  if (!(chi >= 0 && chi <= 1)) throw ConfigError("config: chi not in [0,1]");
  for (double c : chi_grid)
    if (!(c >= 0 && c <= 1))
      throw ConfigError("config: chi_grid entry not in [0,1]");
  if (xi < 0) throw ConfigError("config: xi must be >= 0");
  for (double x : xi_grid)
    if (x < 0) throw ConfigError("config: xi_grid entry must be >= 0");
  const std::size_t u = static_cast<std::size_t>(users_per_group);
  check_size(betas, u, "betas");
  check_size(noma_powers, u, "noma_powers");
  check_size(rate_private, u, "rate_private");
  check_size(user_distances_m, u, "user_distances_m");
  if (!group_azimuths_deg.empty())
    check_size(group_azimuths_deg, static_cast<std::size_t>(groups),
               "group_azimuths_deg");
  if (rate_common < 0) throw ConfigError("config: rate_common must be >= 0");
  for (double r : rate_private)
    if (r < 0) throw ConfigError("config: rate_private entries must be >= 0");
  power_allocation(xi).validate();
  if (!(array_gain > 0)) throw ConfigError("config: array_gain must be > 0");
  if (!(angular_spread_deg > 0 && angular_spread_deg < 90))
    throw ConfigError("config: angular_spread_deg must lie in (0,90)");
  if (!(antenna_spacing_wl > 0))
    throw ConfigError("config: antenna_spacing_wl must be > 0");
  if (!(energy_threshold > 0 && energy_threshold < 1))
    throw ConfigError("config: energy_threshold must lie in (0,1)");
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (schemes.empty()) throw ConfigError("config: schemes must be nonempty");
  for (const auto& s : schemes) {
    const auto& known = known_schemes();
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw ConfigError("config: unknown scheme '" + s + "'");
  }
}

std::vector<double> SystemConfig::azimuths() const {
  if (!group_azimuths_deg.empty()) return group_azimuths_deg;
  std::vector<double> az(static_cast<std::size_t>(groups));
  for (int g = 0; g < groups; ++g)
    az[static_cast<std::size_t>(g)] = std::fmod(30.0 + 160.0 * g, 360.0);
  return az;
}

std::vector<double> SystemConfig::large_scale_gains() const {
  std::vector<double> z(user_distances_m.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] = large_scale_gain(array_gain, user_distances_m[i], pathloss_exp);
  return z;
}

PowerAllocation<double> SystemConfig::power_allocation(
    double xi_value) const {
  PowerAllocation<double> pa;
  pa.common_alpha = alpha;
  pa.private_betas = betas;
  pa.noma_powers = noma_powers;
  pa.sic_error = xi_value;
  return pa;
}

RateTargets<double> SystemConfig::rate_targets() const {
  return RateTargets<double>{rate_common, rate_private};
}

bool SystemConfig::wants_single_pol() const {
  for (const auto& s : schemes)
    if (is_single_pol(s)) return true;
  return false;
}

namespace {

// Group models plus the reported group's precoder and channel factor for
// one array of `antennas` elements. The rank cap floor((antennas - fdim) /
// (G-1)) guarantees enough null-space room for every group's precoder.
ArrayScene build_array(const SystemConfig& cfg, int antennas, int fdim) {
  ArrayScene scene;
  const auto az = cfg.azimuths();
  scene.rank_cap = cfg.groups > 1
                       ? (antennas - fdim) / (cfg.groups - 1)
                       : antennas;
  if (scene.rank_cap < 1)
    throw ConfigError(
        "config: violated projected_dim/2 <= m_total/2 - sum of other "
        "groups' reduced ranks (rank cap below 1)");
  scene.groups.reserve(az.size());
  for (std::size_t g = 0; g < az.size(); ++g) {
    OneRingSpec<double> spec;
    spec.antennas = antennas;
    spec.azimuth_deg = az[g];
    spec.angular_spread_deg = cfg.angular_spread_deg;
    spec.spacing_wavelengths = cfg.antenna_spacing_wl;
    // Floor each model at users_per_group so every group can null-steer one
    // private beam per user even when the energy prefix is shorter.
    scene.groups.push_back(eigen_structure(one_ring_covariance(spec),
                                           cfg.energy_threshold,
                                           scene.rank_cap,
                                           cfg.users_per_group, az[g]));
  }
  std::vector<const GroupModel<double>*> others;
  for (std::size_t g = 1; g < scene.groups.size(); ++g)
    others.push_back(&scene.groups[g]);
  scene.precoder = group_precoder(scene.groups[0], others, 2 * fdim);
  const auto& g0 = scene.groups[0];
  scene.w = scene.precoder.f.adjoint() *
            (g0.eigvecs * g0.eigvals.cwiseSqrt()
                              .cast<std::complex<double>>()
                              .asDiagonal());
  return scene;
}

}  // namespace

Scene build_scene(const SystemConfig& config, bool force_single_pol) {
  config.validate();
  Scene scene;
  scene.config = config;
  scene.zetas = config.large_scale_gains();
  // Dual-polarized array: each polarization sees m_total/2 elements and the
  // per-polarization precoder has projected_dim/2 columns.
  scene.dp = build_array(config, config.m_total / 2, config.projected_dim / 2);
  if (force_single_pol || config.wants_single_pol()) {
    // Single-polarized baselines use the full aperture with a
    // projected_dim-column precoder.
    scene.sp = build_array(config, config.m_total, config.projected_dim);
  }
  scene.phi_printed = phi_parameter(scene.dp.precoder,
                                    scene.dp.groups[0].covariance,
                                    config.projected_dim);
  scene.phi = phi_effective(scene.dp.w.squaredNorm(), config.projected_dim);
  return scene;
}

GainLaw<double> Scene::law(int user, double chi) const {
  return gain_law(zetas.at(static_cast<std::size_t>(user)), config.alpha,
                  config.betas.at(static_cast<std::size_t>(user)), chi,
                  config.users_per_group, phi);
}

AnalyticPoint analytic_point(const Scene& scene, double snr_db, double chi) {
  const SystemConfig& cfg = scene.config;
  const double rho = rho_from_db(snr_db);
  const int n_users = cfg.users_per_group;
  AnalyticPoint pt;
  pt.outage.resize(static_cast<std::size_t>(n_users));
  pt.outage_common.resize(static_cast<std::size_t>(n_users));
  pt.outage_private.resize(static_cast<std::size_t>(n_users));
  pt.erg_private.resize(static_cast<std::size_t>(n_users));
  // The common-interference Gamma law assumes one shared beta across the
  // group; betas[0] is that value (the reference setup uses equal betas).
  const double beta_shared = cfg.betas.at(0);
  for (int u = 0; u < n_users; ++u) {
    const std::size_t s = static_cast<std::size_t>(u);
    const double pc =
        outage_common(scene.zetas[s], cfg.alpha, beta_shared, chi, n_users,
                      scene.phi, rho, cfg.rate_common);
    const double pp =
        outage_private(scene.zetas[s], cfg.alpha, cfg.betas[s], chi,
                       scene.phi, rho, cfg.rate_private[s]);
    pt.outage_common[s] = pc;
    pt.outage_private[s] = pp;
    pt.outage[s] = outage_total(pc, pp);
    pt.erg_private[s] = ergodic_private_user(scene.zetas[s], cfg.alpha,
                                             cfg.betas[s], chi, scene.phi,
                                             rho);
  }
  pt.erg_common = ergodic_common(scene.zetas, cfg.alpha, beta_shared, chi,
                                 scene.phi, rho);
  pt.erg_total = pt.erg_common;
  for (double e : pt.erg_private) pt.erg_total += e;
  return pt;
}

}  // namespace polar_rsma
