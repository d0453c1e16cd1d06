#pragma once

#include "polar_rsma/analytic.hpp"
#include "polar_rsma/quadrature.hpp"
#include "polar_rsma/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace polar_rsma {

// P(S < tau (W + noise_var)) for independent S ~ Gamma(signal) and
// W ~ Gamma(interference), evaluated as the nested integral
//   Int_0^inf f_W(y) F_S(tau (y + noise_var)) dy
// with adaptive panels; deliberately shares no algebra with the closed
// forms. The outer range is cut at the (shape+80)/rate Gamma tail, whose
// mass (added back as an upper bound, where F_S ~ 1) is below 1e-30.
template <class Real = double>
Real outage_by_quadrature(const GammaParams<Real>& signal,
                          const GammaParams<Real>& interference,
                          bool interference_degenerate, Real noise_var,
                          Real tau) {
  if (tau <= Real(0)) return Real(0);
  const auto cdf_signal = [&](Real x) {
    return gamma_cdf(signal, x);
  };
  if (interference_degenerate) return cdf_signal(tau * noise_var);
  const Real cut = (interference.shape + Real(80)) / interference.rate;
  const Real log_norm = interference.shape * std::log(interference.rate) -
                        std::lgamma(interference.shape);
  const auto integrand = [&](Real y) {
    if (y <= Real(0)) return Real(0);
    const Real log_pdf = log_norm +
                         (interference.shape - 1) * std::log(y) -
                         interference.rate * y;
    return std::exp(log_pdf) * cdf_signal(tau * (y + noise_var));
  };
  const QuadResult<Real> r =
      integrate<Real>(integrand, Real(0), cut, Real(1e-12), Real(1e-16));
  const Real tail_mass =
      Real(1) - reg_lower_gamma(interference.shape, interference.rate * cut);
  return std::min(r.value + tail_mass, Real(1));
}

template <class Real = double>
Real outage_common_by_quadrature(const GainLaw<Real>& law, Real rho,
                                 Real common_rate) {
  return outage_by_quadrature(law.common_signal, law.common_interference,
                              law.interference_degenerate, Real(1) / rho,
                              tau_from_rate(common_rate));
}

template <class Real = double>
Real outage_private_by_quadrature(const GainLaw<Real>& law, Real rho,
                                  Real private_rate) {
  return outage_by_quadrature(law.private_signal, law.private_interference,
                              law.interference_degenerate, Real(1) / rho,
                              tau_from_rate(private_rate));
}

// CDF of a single SINR S/(W + noise_var); the outage functional with the
// threshold as the free variable.
template <class Real = double>
Real sinr_cdf_by_quadrature(const GammaParams<Real>& signal,
                            const GammaParams<Real>& interference,
                            bool interference_degenerate, Real noise_var,
                            Real z) {
  return outage_by_quadrature(signal, interference, interference_degenerate,
                              noise_var, z);
}

// Two-sided Kolmogorov-Smirnov statistic of a sample against a reference
// CDF. Sorts a copy; returns sup_x |F_n(x) - F(x)|.
template <class Real = double, class Cdf>
Real ks_statistic(std::vector<Real> samples, Cdf&& cdf) {
  if (samples.empty()) throw ConfigError("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const Real n = Real(samples.size());
  Real d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Real f = cdf(samples[i]);
    d = std::max(d, std::abs(f - Real(i) / n));
    d = std::max(d, std::abs(Real(i + 1) / n - f));
  }
  return d;
}

}  // namespace polar_rsma
