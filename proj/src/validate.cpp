#include "polar_rsma/validate.hpp"

#include "polar_rsma/oracles.hpp"
#include "polar_rsma/rng.hpp"
#include "polar_rsma/scenario.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace polar_rsma {

namespace {

using Cplx = std::complex<double>;

double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << x;
  return os.str();
}

std::string fix(double x, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

// Rebuilds every group's inter-group precoder for one array (the scene
// keeps only the reported group's).
std::vector<GroupPrecoder<double>> all_group_precoders(
    const std::vector<GroupModel<double>>& groups, int pdim_arg) {
  std::vector<GroupPrecoder<double>> out;
  out.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<const GroupModel<double>*> others;
    for (std::size_t j = 0; j < groups.size(); ++j)
      if (j != g) others.push_back(&groups[j]);
    out.push_back(group_precoder(groups[g], others, pdim_arg));
  }
  return out;
}

template <class Fn>
SuiteResult guarded(const char* name, Fn&& body) {
  SuiteResult r;
  r.name = name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

void run_precoder_invariants(std::uint64_t seed, SuiteResult& r) {
  SystemConfig cfg;
  const Scene scene = build_scene(cfg, /*force_single_pol=*/true);
  const ArrayScene* arrays[2] = {&scene.dp, &*scene.sp};
  const int pdim_args[2] = {cfg.projected_dim, 2 * cfg.projected_dim};

  double worst_orth = 0;
  double worst_leak = 0;
  for (int a = 0; a < 2; ++a) {
    const auto& arr = *arrays[a];
    const auto pres = all_group_precoders(arr.groups, pdim_args[a]);
    for (std::size_t g = 0; g < pres.size(); ++g) {
      const auto& f = pres[g].f;
      const Eigen::MatrixXcd gram =
          f.adjoint() * f -
          Eigen::MatrixXcd::Identity(f.cols(), f.cols());
      worst_orth = std::max(worst_orth, gram.cwiseAbs().maxCoeff());
      for (std::size_t j = 0; j < arr.groups.size(); ++j) {
        if (j == g) continue;
        // Isolation is promised for the dominant (nulled) prefix only.
        const auto& other = arr.groups[j];
        worst_leak = std::max(
            worst_leak, (other.eigvecs.leftCols(other.null_rank).adjoint() * f)
                            .cwiseAbs()
                            .maxCoeff());
      }
    }
  }

  double worst_null = 0;
  double worst_norm = 0;
  for (int a = 0; a < 2; ++a) {
    const auto& arr = *arrays[a];
    for (int t = 0; t < 5; ++t) {
      Rng rng(mix_words({seed, 0xA1, static_cast<std::uint64_t>(a),
                         static_cast<std::uint64_t>(t)}));
      std::vector<Eigen::VectorXcd> e(
          static_cast<std::size_t>(cfg.users_per_group));
      for (int u = 0; u < cfg.users_per_group; ++u) {
        const std::size_t s = static_cast<std::size_t>(u);
        const UserLink<double> link{scene.zetas[s], cfg.user_distances_m[s]};
        const auto ch = sample_channel(arr.groups[0], link, cfg.chi, rng);
        e[s] = arr.precoder.f.adjoint() * ch.h_hh;
      }
      const auto p = private_precoders(arr.precoder, e);
      for (int u = 0; u < cfg.users_per_group; ++u) {
        worst_norm = std::max(
            worst_norm, std::abs(p[static_cast<std::size_t>(u)].norm() - 1.0));
        for (int n = 0; n < cfg.users_per_group; ++n) {
          if (n == u) continue;
          const auto& en = e[static_cast<std::size_t>(n)];
          worst_null = std::max(
              worst_null,
              std::abs(en.dot(p[static_cast<std::size_t>(u)])) / en.norm());
        }
      }
    }
  }

  r.pass = worst_orth <= 1e-10 && worst_leak <= 1e-10 &&
           worst_null <= 1e-9 && worst_norm <= 1e-12;
  r.detail = "max |F^H F - I| = " + sci(worst_orth) +
             ", max inter-group |U'^H F| = " + sci(worst_leak) +
             ", max private null residual = " + sci(worst_null) +
             " of ||e||, max | ||p||-1 | = " + sci(worst_norm);
}

void run_signal_model(std::uint64_t seed, SuiteResult& r) {
  SystemConfig cfg;
  const Scene scene = build_scene(cfg);
  const double chi = 0.3;
  const auto pres = all_group_precoders(scene.dp.groups, cfg.projected_dim);
  const int n_users = cfg.users_per_group;
  const int half_dim = cfg.projected_dim / 2;
  const double root_alpha = std::sqrt(cfg.alpha);

  double worst = 0;
  for (int t = 0; t < 5; ++t) {
    Rng rng(mix_words({seed, 0xB1, static_cast<std::uint64_t>(t)}));
    const auto qpsk = [&rng]() {
      const double re = rng.uniform() < 0.5 ? 1.0 : -1.0;
      const double im = rng.uniform() < 0.5 ? 1.0 : -1.0;
      return Cplx(re, im) * std::sqrt(0.5);
    };
    // Every group transmits x_m = sqrt(alpha) s_c [c;0] + sum_n sqrt(beta_n)
    // s_n [0;p_n] through K_m = I_2 (x) F_m; a group-0 receiver must see the
    // other groups' signals vanish.
    std::vector<Eigen::VectorXcd> tx(scene.dp.groups.size());
    std::vector<ChannelRealization<double>> group0;
    for (std::size_t m = 0; m < scene.dp.groups.size(); ++m) {
      std::vector<ChannelRealization<double>> chans;
      std::vector<Eigen::VectorXcd> ehh;
      for (int u = 0; u < n_users; ++u) {
        const std::size_t s = static_cast<std::size_t>(u);
        const UserLink<double> link{scene.zetas[s], cfg.user_distances_m[s]};
        chans.push_back(sample_channel(scene.dp.groups[m], link, chi, rng));
        ehh.push_back(pres[m].f.adjoint() * chans.back().h_hh);
      }
      const auto privates = private_precoders(pres[m], ehh);
      const auto c = common_precoder(half_dim, rng);
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(2 * half_dim);
      x.head(half_dim) = root_alpha * qpsk() * c;
      for (int u = 0; u < n_users; ++u)
        x.tail(half_dim) +=
            std::sqrt(cfg.betas[static_cast<std::size_t>(u)]) * qpsk() *
            privates[static_cast<std::size_t>(u)];
      tx[m] = stacked_precoder(pres[m]) * x;
      if (m == 0) group0 = chans;
    }
    for (int u = 0; u < n_users; ++u) {
      const Eigen::MatrixXcd h =
          assemble_channel_matrix(group0[static_cast<std::size_t>(u)]);
      const Eigen::VectorXcd own = h.adjoint() * tx[0];
      Eigen::VectorXcd cross = Eigen::VectorXcd::Zero(2);
      for (std::size_t m = 1; m < tx.size(); ++m)
        cross += h.adjoint() * tx[m];
      worst = std::max(worst, cross.norm() / own.norm());
    }
  }
  r.pass = worst <= 1e-10;
  r.detail = "max inter-group leakage / own-group signal = " + sci(worst) +
             " over 5 draws x " + std::to_string(n_users) + " receivers";
}

void run_distribution_fits(std::uint64_t seed, SuiteResult& r) {
  SystemConfig cfg;
  const Scene scene = build_scene(cfg);
  const int n = 100000;
  const int half_dim = cfg.projected_dim / 2;
  const Eigen::MatrixXcd& w = scene.dp.w;
  const Eigen::Index rbar = w.cols();
  Rng rng_ch(mix_words({seed, 0xC1}));
  Rng rng_pc(mix_words({seed, 0xC2}));
  const double zeta0 = scene.zetas[0];
  const double alpha = cfg.alpha;
  const double beta0 = cfg.betas[0];

  std::vector<double> samples_c(n);
  std::vector<double> samples_p(n);
  std::vector<Eigen::VectorXcd> ehh(
      static_cast<std::size_t>(cfg.users_per_group));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXcd evv =
        std::sqrt(zeta0) * (w * rng_ch.cnormal_vector(rbar));
    const auto c = common_precoder(half_dim, rng_pc);
    samples_c[static_cast<std::size_t>(i)] = alpha * std::norm(evv.dot(c));
    for (int u = 0; u < cfg.users_per_group; ++u) {
      const std::size_t s = static_cast<std::size_t>(u);
      ehh[s] = std::sqrt(scene.zetas[s]) * (w * rng_ch.cnormal_vector(rbar));
    }
    const auto p = private_precoders(scene.dp.precoder, ehh);
    samples_p[static_cast<std::size_t>(i)] =
        beta0 * std::norm(ehh[0].dot(p[0]));
  }

  const double rate_c = scene.phi / (zeta0 * alpha);
  const double rate_p = scene.phi / (zeta0 * beta0);
  const double ks_c = ks_statistic(
      samples_c, [rate_c](double x) { return -std::expm1(-rate_c * x); });
  const double ks_p = ks_statistic(
      samples_p, [rate_p](double x) { return -std::expm1(-rate_p * x); });

  double mean_c = 0;
  double mean_p = 0;
  for (double v : samples_c) mean_c += v;
  for (double v : samples_p) mean_p += v;
  mean_c /= n;
  mean_p /= n;
  const double ratio_c = mean_c * scene.phi / (zeta0 * alpha);
  const double ratio_p = mean_p * scene.phi / (zeta0 * beta0);
  const double ratio_printed = mean_c * scene.phi_printed / (zeta0 * alpha);

  r.pass = ks_c <= 0.05 && ks_p <= 0.05 &&
           std::abs(ratio_c - 1.0) <= 0.05 &&
           std::abs(ratio_p - 1.0) <= 0.05 &&
           ratio_printed >= 1.7 && ratio_printed <= 2.2;
  r.detail = "KS common " + fix(ks_c, 4) + ", private " + fix(ks_p, 4) +
             " (tol 0.05); moment ratio common " + fix(ratio_c) +
             ", private " + fix(ratio_p) +
             " (tol 1 +/- 0.05); printed-normalizer ratio " +
             fix(ratio_printed, 2) + " (expected ~2)";
}

void run_closed_form_outage(std::uint64_t seed, SuiteResult& r) {
  Rng rng(mix_words({seed, 0xD1}));
  double worst_c = 0;
  double worst_p = 0;
  for (int i = 0; i < 30; ++i) {
    const double zeta = uniform_in(rng, 0.05, 0.2);
    const double alpha = uniform_in(rng, 0.4, 0.9);
    const double beta = uniform_in(rng, 0.05, 0.6);
    double chi = uniform_in(rng, 0.001, 0.2);
    if (i % 6 == 5) chi = 0.0;  // degenerate-interference branch
    const int users = 1 + static_cast<int>(rng.uniform() * 3.0);
    const double phi = uniform_in(rng, 0.5, 2.5);
    const double rho = rho_from_db(uniform_in(rng, 0.0, 24.0));
    const double rc = uniform_in(rng, 0.25, 2.0);
    const double rp = uniform_in(rng, 0.25, 2.0);

    const auto law = gain_law(zeta, alpha, beta, chi, users, phi);
    const double pc_cf =
        outage_common(zeta, alpha, beta, chi, users, phi, rho, rc);
    const double pc_or = outage_common_by_quadrature(law, rho, rc);
    const double pp_cf =
        outage_private(zeta, alpha, beta, chi, phi, rho, rp);
    const double pp_or = outage_private_by_quadrature(law, rho, rp);
    worst_c = std::max(worst_c, std::abs(pc_cf - pc_or) / pc_or);
    worst_p = std::max(worst_p, std::abs(pp_cf - pp_or) / pp_or);
  }
  r.pass = worst_c <= 1e-8 && worst_p <= 1e-8;
  r.detail = "30 points vs joint-pdf quadrature: max rel err common " +
             sci(worst_c) + ", private " + sci(worst_p) + " (tol 1e-8)";
}

void run_closed_form_ergodic(std::uint64_t seed, SuiteResult& r) {
  Rng rng(mix_words({seed, 0xE1}));
  double worst_cdf = 0;
  double worst_cc = 0;
  double worst_cp = 0;
  int cdf_checks = 0;
  for (int i = 0; i < 20; ++i) {
    const int users = 1 + static_cast<int>(rng.uniform() * 3.0);
    std::vector<double> zetas(static_cast<std::size_t>(users));
    for (auto& z : zetas) z = uniform_in(rng, 0.05, 0.2);
    const double alpha = uniform_in(rng, 0.4, 0.9);
    const double beta = uniform_in(rng, 0.05, 0.6);
    double chi = uniform_in(rng, 0.001, 0.3);
    if (i < 3) chi = 0.0;
    const double phi = uniform_in(rng, 0.5, 2.5);
    const double rho = rho_from_db(uniform_in(rng, 0.0, 24.0));
    const double noise_var = 1.0 / rho;

    // The min-SINR CDF must equal the product of the per-user survival
    // functions computed by the independent double-integral oracle.
    const double zeta_max = *std::max_element(zetas.begin(), zetas.end());
    const double scale = rho * zeta_max * alpha / phi;
    for (const double f : {0.05, 0.2, 0.8}) {
      const double z = f * scale;
      double surv = 1.0;
      for (int u = 0; u < users; ++u) {
        const auto law = gain_law(zetas[static_cast<std::size_t>(u)], alpha,
                                  beta, chi, users, phi);
        surv *= 1.0 - sinr_cdf_by_quadrature(law.common_signal,
                                             law.common_interference,
                                             law.interference_degenerate,
                                             noise_var, z);
      }
      const double f_or = 1.0 - surv;
      const double f_cf =
          cdf_min_common(z, zetas, alpha, beta, chi, phi, rho);
      if (f_or > 1e-12 && f_or < 0.9) {
        worst_cdf = std::max(worst_cdf, std::abs(f_cf - f_or) / f_or);
        ++cdf_checks;
      }
    }

    const double cc_cf = ergodic_common(zetas, alpha, beta, chi, phi, rho);
    const double cc_or =
        users * ergodic_by_quadrature([&](double z) {
          return cdf_min_common(z, zetas, alpha, beta, chi, phi, rho);
        });
    worst_cc = std::max(worst_cc, std::abs(cc_cf - cc_or) / cc_or);

    for (int u = 0; u < users; ++u) {
      const double zeta = zetas[static_cast<std::size_t>(u)];
      const double cp_cf =
          ergodic_private_user(zeta, alpha, beta, chi, phi, rho);
      const double cp_or = ergodic_by_quadrature([&](double z) {
        return -std::expm1(-std::log1p(chi * alpha * z / beta) -
                           z * phi / (rho * zeta * beta));
      });
      worst_cp = std::max(worst_cp, std::abs(cp_cf - cp_or) / cp_or);
    }
  }
  r.pass = worst_cdf <= 1e-8 && worst_cc <= 1e-6 && worst_cp <= 1e-6 &&
           cdf_checks >= 20;
  r.detail = "20 points: max rel err min-SINR cdf " + sci(worst_cdf) +
             " (tol 1e-8, " + std::to_string(cdf_checks) +
             " checks), common rate " + sci(worst_cc) + ", private rate " +
             sci(worst_cp) + " (tol 1e-6)";
}

}  // namespace

SuiteResult suite_precoder_invariants(std::uint64_t seed) {
  return guarded("precoder_invariants",
                 [seed](SuiteResult& r) { run_precoder_invariants(seed, r); });
}

SuiteResult suite_signal_model(std::uint64_t seed) {
  return guarded("signal_model",
                 [seed](SuiteResult& r) { run_signal_model(seed, r); });
}

SuiteResult suite_distribution_fits(std::uint64_t seed) {
  return guarded("distribution_fits",
                 [seed](SuiteResult& r) { run_distribution_fits(seed, r); });
}

SuiteResult suite_closed_form_outage(std::uint64_t seed) {
  return guarded("closed_form_outage",
                 [seed](SuiteResult& r) { run_closed_form_outage(seed, r); });
}

SuiteResult suite_closed_form_ergodic(std::uint64_t seed) {
  return guarded("closed_form_ergodic",
                 [seed](SuiteResult& r) { run_closed_form_ergodic(seed, r); });
}

std::vector<SuiteResult> run_validation(std::uint64_t seed) {
  return {suite_precoder_invariants(seed), suite_signal_model(seed),
          suite_distribution_fits(seed), suite_closed_form_outage(seed),
          suite_closed_form_ergodic(seed)};
}

}  // namespace polar_rsma
