#pragma once

#include "polar_rsma/errors.hpp"
#include "polar_rsma/precoder.hpp"
#include "polar_rsma/quadrature.hpp"
#include "polar_rsma/specialfn.hpp"

#include <Eigen/Core>

#include <cmath>
#include <vector>

namespace polar_rsma {

namespace detail {
template <class Real>
constexpr Real ln2() {
  return Real(0.693147180559945309417232121458176568L);
}
}  // namespace detail

// tau = 2^R - 1 without cancellation for small targets.
template <class Real = double>
Real tau_from_rate(Real rate_bpcu) {
  return std::expm1(rate_bpcu * detail::ln2<Real>());
}

// Gamma laws of the four effective SINR gains of one user. The
// interference laws degenerate to a point mass at zero when chi = 0.
template <class Real = double>
struct GainLaw {
  GammaParams<Real> common_signal;        // shape 1, rate phi/(zeta alpha)
  GammaParams<Real> common_interference;  // shape U, rate phi/(zeta chi beta)
  GammaParams<Real> private_signal;       // shape 1, rate phi/(zeta beta)
  GammaParams<Real> private_interference; // shape 1, rate phi/(zeta chi alpha)
  Real phi = 0;
  bool interference_degenerate = false;   // chi == 0
};

template <class Real = double>
GainLaw<Real> gain_law(Real zeta, Real alpha, Real beta, Real chi, int users,
                       Real phi) {
  GainLaw<Real> law;
  law.phi = phi;
  law.common_signal = {Real(1), phi / (zeta * alpha)};
  law.private_signal = {Real(1), phi / (zeta * beta)};
  if (chi > Real(0)) {
    law.common_interference = {Real(users), phi / (zeta * chi * beta)};
    law.private_interference = {Real(1), phi / (zeta * chi * alpha)};
  } else {
    law.interference_degenerate = true;
    law.common_interference = {Real(users), Real(0)};
    law.private_interference = {Real(1), Real(0)};
  }
  return law;
}

// Gamma-rate normalizer as defined by the approximation,
// phi = Mbar / tr(F^H R F).
template <class Real = double>
Real phi_parameter(const GroupPrecoder<Real>& f,
                   const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic,
                                       Eigen::Dynamic>& covariance,
                   int projected_dim) {
  const Real trace =
      (f.f.adjoint() * covariance * f.f).diagonal().real().sum();
  if (!(trace > Real(0)))
    throw NumericError(
        "phi_parameter: tr(F^H R F) <= 0 (covariance orthogonal to the "
        "precoder range)");
  return Real(projected_dim) / trace;
}

// Moment-matched variant used when pairing closed forms with simulation.
// The common precoder lives in dimension Mbar/2, so E{c c^H} = (2/Mbar) I
// and the exponential gain |e^H c|^2 has mean tr(F^H R F)/(Mbar/2); the
// matching rate normalizer is therefore half the printed one. See the
// moment check in the analytic tests.
template <class Real = double>
Real phi_effective(Real projected_cov_trace, int projected_dim) {
  if (!(projected_cov_trace > Real(0)))
    throw NumericError("phi_effective: projected covariance trace <= 0");
  return Real(projected_dim) / (2 * projected_cov_trace);
}

// Outage probability of the common message,
//   P = 1 - (alpha/(alpha + chi beta tau))^U exp(-phi tau/(rho zeta alpha)),
// evaluated in expm1/log1p form for full relative accuracy at small P.
template <class Real = double>
Real outage_common(Real zeta, Real alpha, Real beta, Real chi, int users,
                   Real phi, Real rho, Real common_rate) {
  const Real tau = tau_from_rate(common_rate);
  const Real log_ratio = std::log1p(chi * beta * tau / alpha);
  return -std::expm1(-Real(users) * log_ratio -
                     phi * tau / (rho * zeta * alpha));
}

// Outage probability of the private message,
//   P = 1 - (beta/(chi alpha tau + beta)) exp(-phi tau/(rho zeta beta)).
template <class Real = double>
Real outage_private(Real zeta, Real alpha, Real beta, Real chi, Real phi,
                    Real rho, Real private_rate) {
  const Real tau = tau_from_rate(private_rate);
  const Real log_ratio = std::log1p(chi * alpha * tau / beta);
  return -std::expm1(-log_ratio - phi * tau / (rho * zeta * beta));
}

// Union of the two outage events under independence.
template <class Real = double>
Real outage_total(Real pc, Real pp) {
  if (!(pc >= Real(0) && pc <= Real(1) && pp >= Real(0) && pp <= Real(1)))
    throw ConfigError("outage_total: probabilities must lie in [0,1]");
  return pc + pp - pc * pp;
}

// CDF of min_u of the common-message SINRs (order statistics across the
// group),
//   F(z) = 1 - alpha^{U^2} (alpha + chi beta z)^{-U^2}
//              exp(-z phi sum_l(1/zeta_l)/(rho alpha)).
template <class Real = double>
Real cdf_min_common(Real z, const std::vector<Real>& zetas, Real alpha,
                    Real beta, Real chi, Real phi, Real rho) {
  if (z < Real(0)) throw ConfigError("cdf_min_common: z < 0");
  const int users = static_cast<int>(zetas.size());
  Real inv_sum = 0;
  for (Real zeta : zetas) inv_sum += Real(1) / zeta;
  const Real n2 = Real(users) * Real(users);
  return -std::expm1(-n2 * std::log1p(chi * beta * z / alpha) -
                     z * phi * inv_sum / (rho * alpha));
}

namespace detail {

// Ergodic common rate, regrouped from the closed form for numerical
// stability. With N = U^2, a = phi S/(rho alpha), x = phi S/(rho chi beta),
// d = alpha - chi beta and S = sum_l 1/zeta_l:
//   C = U alpha^N / ln2 [ e1s(a)/d^N
//                         - sum_{m=1}^{N} ems(m,x) alpha^{1-m} d^{m-1-N} ],
// where e1s/ems are the scaled exponential integrals. This grouping avoids
// the e^{x} overflow and the alternating-sum cancellation of the expanded
// form; the two agree analytically (see the cross-check test).
template <class Real>
Real ergodic_common_stable(const std::vector<Real>& zetas, Real alpha,
                           Real beta, Real chi, Real phi, Real rho) {
  const int users = static_cast<int>(zetas.size());
  Real inv_sum = 0;
  for (Real zeta : zetas) inv_sum += Real(1) / zeta;
  const Real a = phi * inv_sum / (rho * alpha);
  if (chi * beta == Real(0))
    return Real(users) * exp_integral_e1_scaled(a) / ln2<Real>();
  const int n = users * users;
  const Real x = phi * inv_sum / (rho * chi * beta);
  const Real d = alpha - chi * beta;
  Real bracket = exp_integral_e1_scaled(a) * std::pow(d, Real(-n));
  for (int m = 1; m <= n; ++m) {
    bracket -= exp_integral_em_scaled(m, x) * std::pow(alpha, Real(1 - m)) *
               std::pow(d, Real(m - 1 - n));
  }
  return Real(users) * std::pow(alpha, Real(n)) * bracket / ln2<Real>();
}

}  // namespace detail

// Ergodic sum-rate of the common message for the group (all users share
// one beta). Parameters on the removable singularity chi*beta = alpha are
// evaluated by averaging a +/-1e-9 relative offset in beta.
template <class Real = double>
Real ergodic_common(const std::vector<Real>& zetas, Real alpha, Real beta,
                    Real chi, Real phi, Real rho) {
  if (zetas.empty()) throw ConfigError("ergodic_common: no users");
  const Real d = alpha - chi * beta;
  if (chi > Real(0) && std::abs(d) < Real(1e-9) * alpha) {
    const Real lo =
        detail::ergodic_common_stable(zetas, alpha, beta * (1 - Real(1e-9)),
                                      chi, phi, rho);
    const Real hi =
        detail::ergodic_common_stable(zetas, alpha, beta * (1 + Real(1e-9)),
                                      chi, phi, rho);
    return (lo + hi) / 2;
  }
  return detail::ergodic_common_stable(zetas, alpha, beta, chi, phi, rho);
}

// The same quantity evaluated exactly as the expanded closed form is
// written (exponential integral plus truncated Taylor polynomial
// e_{U^2-1}); kept as a cross-check of the regrouped evaluation above.
// Suffers cancellation for large phi S/(rho chi beta); use only where that
// argument is moderate.
template <class Real = double>
Real ergodic_common_expanded(const std::vector<Real>& zetas, Real alpha,
                             Real beta, Real chi, Real phi, Real rho) {
  const int users = static_cast<int>(zetas.size());
  const int n = users * users;
  Real inv_sum = 0;
  for (Real zeta : zetas) inv_sum += Real(1) / zeta;
  const Real a = phi * inv_sum / (rho * alpha);
  const Real b = chi * beta - alpha;
  const Real x = phi * inv_sum / (rho * chi * beta);
  const Real y = b * phi * inv_sum / (chi * rho * beta * alpha);  // = a - x
  const Real sign = (n - 1) % 2 == 0 ? Real(1) : Real(-1);
  Real inner = 0;
  Real m_factorial = 1;
  for (int m = 1; m <= n - 1; ++m) {
    m_factorial *= Real(m);
    Real k_sum = 0;
    Real fact = 1;  // (m-k-1)! running value, starting at (m-1)!
    for (int j = m - 1; j >= 1; --j) fact *= Real(j);
    Real xpow = 1;
    for (int k = 0; k <= m - 1; ++k) {
      k_sum += fact * xpow;
      if (m - k - 1 >= 1) fact /= Real(m - k - 1);
      xpow *= -x;
    }
    inner += std::pow(-b / alpha, Real(m)) / m_factorial * k_sum;
  }
  const Real bracket = exp_integral_ei(-a) -
                       trunc_exp_taylor(n - 1, y) * std::exp(-y) *
                           exp_integral_ei(-x) +
                       std::exp(-a) * inner;
  const Real term = sign / detail::ln2<Real>() *
                    std::pow(alpha / b, Real(n)) * std::exp(a) * bracket;
  return Real(users) * term;
}

namespace detail {

template <class Real>
Real ergodic_private_stable(Real zeta, Real alpha, Real beta, Real chi,
                            Real phi, Real rho) {
  const Real q1 = phi / (rho * zeta * beta);
  if (chi * alpha == Real(0))
    return exp_integral_e1_scaled(q1) / ln2<Real>();
  const Real q2 = phi / (rho * zeta * chi * alpha);
  return beta / (ln2<Real>() * (beta - chi * alpha)) *
         (exp_integral_e1_scaled(q1) - exp_integral_e1_scaled(q2));
}

}  // namespace detail

// Per-user ergodic rate of the private message,
//   beta/(ln2 (beta - chi alpha)) [ e1s(phi/(rho zeta beta))
//                                   - e1s(phi/(rho zeta chi alpha)) ].
// The removable singularity beta = chi alpha is evaluated by averaging a
// +/-1e-9 relative offset in beta.
template <class Real = double>
Real ergodic_private_user(Real zeta, Real alpha, Real beta, Real chi,
                          Real phi, Real rho) {
  if (chi * alpha > Real(0) &&
      std::abs(beta - chi * alpha) < Real(1e-9) * beta) {
    return (detail::ergodic_private_stable(zeta, alpha,
                                           beta * (1 - Real(1e-9)), chi, phi,
                                           rho) +
            detail::ergodic_private_stable(zeta, alpha,
                                           beta * (1 + Real(1e-9)), chi, phi,
                                           rho)) /
           2;
  }
  return detail::ergodic_private_stable(zeta, alpha, beta, chi, phi, rho);
}

// Group ergodic sum-rate of the private messages.
template <class Real = double>
Real ergodic_private(const std::vector<Real>& zetas, Real alpha,
                     const std::vector<Real>& betas, Real chi, Real phi,
                     Real rho) {
  if (zetas.size() != betas.size())
    throw ConfigError("ergodic_private: zetas/betas size mismatch");
  Real sum = 0;
  for (std::size_t u = 0; u < zetas.size(); ++u)
    sum += ergodic_private_user(zetas[u], alpha, betas[u], chi, phi, rho);
  return sum;
}

// Independent rate oracle: E{log2(1+X)} = Int_0^inf (1-F(z))/((1+z) ln2) dz
// for a CDF F with F(0) = 0. Panels double until the certified tail bound
//   (1-F(Z)) * (ln(1+max_z) - ln(1+Z)) / ln2
// drops below tolerance; if max_z is reached first, the tail is not
// integrable to tolerance and an error is raised.
template <class Real = double, class Cdf>
Real ergodic_by_quadrature(Cdf&& cdf, Real max_z = Real(1e12)) {
  const Real rel_tol = Real(1e-9);
  const Real abs_tol = Real(1e-13);
  const auto integrand = [&](Real z) {
    return (Real(1) - cdf(z)) / ((Real(1) + z) * detail::ln2<Real>());
  };
  Real total = 0;
  Real left = 0;
  Real width = Real(1);
  while (left < max_z) {
    const Real right = std::min(left + width, max_z);
    const QuadResult<Real> r =
        integrate<Real>(integrand, left, right, rel_tol / 4, abs_tol / 4);
    total += r.value;
    left = right;
    width *= 2;
    const Real survival = Real(1) - cdf(left);
    const Real tail_bound = survival *
                            (std::log1p(max_z) - std::log1p(left)) /
                            detail::ln2<Real>();
    // Once left == max_z the horizon is empty and the bound is vacuous;
    // only a vanished survival certifies the integral there.
    if (tail_bound < std::max(abs_tol, rel_tol * total) &&
        (left < max_z || survival == Real(0))) {
      return total;
    }
  }
  throw NumericError(
      "ergodic_by_quadrature: tail bound not achieved by max_z; the tail "
      "does not decay fast enough to integrate");
}

}  // namespace polar_rsma
