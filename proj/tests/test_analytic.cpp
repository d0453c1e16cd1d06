#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polar_rsma/analytic.hpp"
#include "polar_rsma/errors.hpp"
#include "polar_rsma/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

using namespace polar_rsma;
using doctest::Approx;

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

TEST_CASE("rate-to-threshold conversion") {
  CHECK(tau_from_rate(0.0) == 0.0);
  CHECK(tau_from_rate(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(tau_from_rate(2.0) == Approx(3.0).epsilon(1e-15));
  CHECK(tau_from_rate(0.5) ==
        Approx(0.41421356237309515).epsilon(1e-15));
  // Small targets keep full relative accuracy: 2^R - 1 ~ R ln2.
  CHECK(tau_from_rate(1e-12) / (1e-12 * kLn2) == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gain laws of the effective channel") {
  const auto law = gain_law(0.1, 0.7, 0.1, 0.01, 3, 1.0);
  CHECK(law.common_signal.shape == 1.0);
  CHECK(law.common_signal.rate == Approx(1.0 / 0.07).epsilon(1e-15));
  CHECK(law.common_interference.shape == 3.0);
  CHECK(law.common_interference.rate == Approx(1e4).epsilon(1e-12));
  CHECK(law.private_signal.rate == Approx(100.0).epsilon(1e-13));
  CHECK(law.private_interference.rate ==
        Approx(1.0 / 7e-4).epsilon(1e-12));
  CHECK_FALSE(law.interference_degenerate);

  const auto clean = gain_law(0.1, 0.7, 0.1, 0.0, 3, 1.0);
  CHECK(clean.interference_degenerate);
  CHECK(clean.common_interference.rate == 0.0);
}

TEST_CASE("rate normalizer phi") {
  GroupPrecoder<double> fp;
  fp.f = Eigen::MatrixXcd::Identity(6, 3);
  fp.projected_dim = 6;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(6, 6);
  // Identity covariance: tr(F^H R F) = Mbar/2, so the printed phi is
  // exactly 2 and the moment-matched one exactly 1.
  CHECK(phi_parameter(fp, eye, 6) == 2.0);
  CHECK(phi_effective(3.0, 6) == 1.0);
  CHECK(phi_parameter(fp, eye, 6) == 2.0 * phi_effective(3.0, 6));

  Eigen::MatrixXcd ortho = Eigen::MatrixXcd::Zero(6, 6);
  ortho(5, 5) = 1.0;  // covariance entirely outside the precoder range
  CHECK_THROWS_AS(phi_parameter(fp, ortho, 6), NumericError);
  CHECK_THROWS_AS(phi_effective(0.0, 6), NumericError);
}

TEST_CASE("common outage closed form") {
  // chi = 0 and phi/(rho zeta alpha) = 2: P = 1 - e^{-2 tau}.
  CHECK(outage_common(1.0, 0.7, 0.1, 0.0, 3, 1.4, 1.0, 1.0) ==
        Approx(0.8646647167633873).epsilon(1e-15));
  // Small-probability regime keeps relative accuracy in expm1 form.
  const double p = outage_common(0.2, 0.7, 0.1, 0.001, 3, 1.0, 1e6, 0.5);
  CHECK(p > 0.0);
  CHECK(p < 1e-3);

  // Against the nested-integral oracle at a generic point.
  const double rho = std::pow(10.0, 1.2);
  const auto law = gain_law(0.12, 0.7, 0.1, 0.05, 2, 1.2);
  CHECK(outage_common(0.12, 0.7, 0.1, 0.05, 2, 1.2, rho, 0.8) ==
        Approx(outage_common_by_quadrature(law, rho, 0.8)).epsilon(1e-8));
  CHECK(outage_private(0.12, 0.7, 0.1, 0.05, 1.2, rho, 0.6) ==
        Approx(outage_private_by_quadrature(law, rho, 0.6)).epsilon(1e-8));

  // Monotone decreasing in SNR.
  CHECK(outage_common(0.12, 0.7, 0.1, 0.05, 2, 1.2, 10 * rho, 0.8) <
        outage_common(0.12, 0.7, 0.1, 0.05, 2, 1.2, rho, 0.8));
}

TEST_CASE("outage union") {
  CHECK(outage_total(0.2, 0.3) == Approx(0.44).epsilon(1e-15));
  CHECK(outage_total(0.0, 0.0) == 0.0);
  CHECK(outage_total(1.0, 0.3) == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(outage_total(-0.1, 0.5), ConfigError);
  CHECK_THROWS_AS(outage_total(0.5, 1.1), ConfigError);
}

TEST_CASE("minimum-SINR CDF factorizes over users") {
  const std::vector<double> zetas = {0.1, 0.2};
  const double alpha = 0.7, beta = 0.1, chi = 0.05, phi = 1.3, rho = 10.0;
  CHECK(cdf_min_common(0.0, zetas, alpha, beta, chi, phi, rho) == 0.0);
  CHECK_THROWS_AS(cdf_min_common(-0.1, zetas, alpha, beta, chi, phi, rho),
                  ConfigError);
  for (double z : {0.05, 0.4, 0.8, 2.0, 10.0}) {
    const double rate = std::log2(1.0 + z);
    double survive = 1.0;
    for (double zeta : zetas)
      survive *= 1.0 - outage_common(zeta, alpha, beta, chi, 2, phi, rho, rate);
    CHECK(cdf_min_common(z, zetas, alpha, beta, chi, phi, rho) ==
          Approx(1.0 - survive).epsilon(1e-10));
  }
}

TEST_CASE("rate oracle on known laws") {
  // X ~ Exp(1): E[log2(1+X)] = e E1(1)/ln2, frozen from 30-digit
  // quadrature.
  const double q =
      ergodic_by_quadrature<double>([](double z) { return -std::expm1(-z); });
  CHECK(q == Approx(0.8603473822708860).epsilon(1e-8));
  CHECK(q == Approx(exp_integral_e1_scaled(1.0) / kLn2).epsilon(1e-8));

  // Point mass at 3: E[log2(1+X)] = 2.
  const double step = ergodic_by_quadrature<double>(
      [](double z) { return z < 3.0 ? 0.0 : 1.0; });
  CHECK(step == Approx(2.0).epsilon(1e-8));

  // A CDF that never rises has no finite mean.
  CHECK_THROWS_AS(
      ergodic_by_quadrature<double>([](double) { return 0.0; }, 1e6),
      NumericError);
}

TEST_CASE("ergodic common rate") {
  const std::vector<double> zetas = {0.1, 0.2, 0.3};
  const double alpha = 0.7, phi = 1.3, rho = 100.0;

  SUBCASE("leakage-free law") {
    double inv_sum = 0;
    for (double z : zetas) inv_sum += 1.0 / z;
    const double a = phi * inv_sum / (rho * alpha);
    const double closed = ergodic_common(zetas, alpha, 0.1, 0.0, phi, rho);
    CHECK(closed ==
          Approx(3.0 * exp_integral_e1_scaled(a) / kLn2).epsilon(1e-14));
    // Independent check through the min-SINR CDF.
    const double oracle =
        3.0 * ergodic_by_quadrature<double>([&](double z) {
          return cdf_min_common(z, zetas, alpha, 0.1, 0.0, phi, rho);
        });
    CHECK(closed == Approx(oracle).epsilon(1e-6));
  }

  SUBCASE("leaky law against the quadrature oracle") {
    const double closed = ergodic_common(zetas, alpha, 0.1, 0.08, phi, rho);
    const double oracle =
        3.0 * ergodic_by_quadrature<double>([&](double z) {
          return cdf_min_common(z, zetas, alpha, 0.1, 0.08, phi, rho);
        });
    CHECK(closed == Approx(oracle).epsilon(1e-6));
  }

  SUBCASE("single user equals the private form with swapped powers") {
    const double c = ergodic_common({0.15}, 0.6, 0.25, 0.3, 1.1, 31.0);
    const double p = ergodic_private_user(0.15, 0.25, 0.6, 0.3, 1.1, 31.0);
    CHECK(c == Approx(p).epsilon(1e-12));
  }

  SUBCASE("monotone in SNR") {
    const double lo = ergodic_common(zetas, alpha, 0.1, 0.05, phi, 10.0);
    const double hi = ergodic_common(zetas, alpha, 0.1, 0.05, phi, 1000.0);
    CHECK(hi > lo);
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(ergodic_common({}, alpha, 0.1, 0.05, phi, rho),
                    ConfigError);
    CHECK_THROWS_AS(ergodic_private({0.1, 0.2}, alpha, {0.1}, 0.05, phi, rho),
                    ConfigError);
  }
}

TEST_CASE("regrouped and expanded ergodic forms agree") {
  for (int users = 1; users <= 3; ++users) {
    const std::vector<double> zetas(users, 1.0);
    const double stable =
        ergodic_common(zetas, 0.6, 0.8, 0.5, 1.0, 1.0);
    const double expanded =
        ergodic_common_expanded(zetas, 0.6, 0.8, 0.5, 1.0, 1.0);
    CHECK(stable == Approx(expanded).epsilon(1e-6));
  }
  // Negative d = alpha - chi beta exercises the signed-power branch.
  const std::vector<double> two(2, 1.0);
  CHECK(ergodic_common(two, 0.4, 0.8, 0.9, 1.0, 1.0) ==
        Approx(ergodic_common_expanded(two, 0.4, 0.8, 0.9, 1.0, 1.0))
            .epsilon(1e-6));
}

TEST_CASE("removable singularity chi beta = alpha (single user)") {
  // alpha = chi * beta exactly; the +/-1e-9 beta offset keeps ~7 digits,
  // verified against the quadrature oracle over the min-SINR CDF.
  const std::vector<double> zetas = {0.2};
  const double c = ergodic_common(zetas, 0.5, 1.0, 0.5, 1.0, 20.0);
  CHECK(std::isfinite(c));
  const double oracle = ergodic_by_quadrature<double>([&](double z) {
    return cdf_min_common(z, zetas, 0.5, 1.0, 0.5, 1.0, 20.0);
  });
  CHECK(c == Approx(oracle).epsilon(1e-5));
}

TEST_CASE("ergodic private rate") {
  const double zeta = 0.15, alpha = 0.7, beta = 0.1, phi = 1.2, rho = 50.0;

  SUBCASE("against the quadrature oracle") {
    for (double chi : {0.0, 0.01, 0.2}) {
      const double closed =
          ergodic_private_user(zeta, alpha, beta, chi, phi, rho);
      const double oracle = ergodic_by_quadrature<double>([&](double z) {
        // P(SINR <= z) for one private message, in expm1/log1p form.
        return -std::expm1(-std::log1p(chi * alpha * z / beta) -
                           z * phi / (rho * zeta * beta));
      });
      CHECK(closed == Approx(oracle).epsilon(1e-6));
    }
  }

  SUBCASE("removable singularity beta = chi alpha") {
    const double closed =
        ergodic_private_user(zeta, 0.5, 0.25, 0.5, phi, rho);
    CHECK(std::isfinite(closed));
    const double oracle = ergodic_by_quadrature<double>([&](double z) {
      return -std::expm1(-std::log1p(0.5 * 0.5 * z / 0.25) -
                         z * phi / (rho * zeta * 0.25));
    });
    CHECK(closed == Approx(oracle).epsilon(1e-5));
  }

  SUBCASE("group sum") {
    const std::vector<double> zetas = {0.1, 0.2};
    const std::vector<double> betas = {0.1, 0.15};
    const double sum = ergodic_private(zetas, alpha, betas, 0.05, phi, rho);
    const double manual =
        ergodic_private_user(0.1, alpha, 0.1, 0.05, phi, rho) +
        ergodic_private_user(0.2, alpha, 0.15, 0.05, phi, rho);
    CHECK(sum == Approx(manual).epsilon(1e-15));
  }
}

TEST_CASE("Kolmogorov-Smirnov statistic") {
  const auto uniform = [](double x) { return std::min(std::max(x, 0.0), 1.0); };
  CHECK(ks_statistic<double>({0.25, 0.75}, uniform) ==
        Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(ks_statistic<double>({}, uniform), ConfigError);
}
