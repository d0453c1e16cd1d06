#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace polar_rsma {

// Shape/rate parameter pair of a Gamma distribution.
template <class Real = double>
struct GammaParams {
  Real shape;
  Real rate;
};

namespace detail {

template <class Real>
constexpr Real euler_gamma() {
  return Real(0.577215664901532860606512090082402431L);
}

// Convergent series Ei(x) = gamma + ln|x| + sum_{k>=1} x^k/(k*k!).
// Accurate for x > 0; for x < 0 the sum alternates and loses digits once
// |x| grows, so callers restrict it to |x| <= 1 on the negative side.
template <class Real>
Real ei_series(Real x) {
  Real sum = 0;
  Real term = 1;
  for (int k = 1; k < 10000; ++k) {
    term *= x / Real(k);
    const Real add = term / Real(k);
    sum += add;
    if (std::abs(add) < std::numeric_limits<Real>::epsilon() * std::abs(sum))
      break;
  }
  return euler_gamma<Real>() + std::log(std::abs(x)) + sum;
}

// Asymptotic expansion Ei(x) ~ e^x/x * sum_k k!/x^k, truncated at the
// smallest term; adequate to full double precision for x > ~40.
template <class Real>
Real ei_asymptotic(Real x) {
  Real sum = 1;
  Real term = 1;
  for (int k = 1; k < 400; ++k) {
    const Real next = term * Real(k) / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < std::numeric_limits<Real>::epsilon() * sum) break;
  }
  return std::exp(x) / x * sum;
}

// Modified Lentz continued fraction for the scaled exponential integral
// e^x E_m(x); stable for x >= ~1 and any order m >= 0.
template <class Real>
Real em_scaled_cf(int m, Real x) {
  const Real tiny = std::numeric_limits<Real>::min() * 1000;
  Real b = x + Real(m);
  Real c = Real(1) / tiny;
  Real d = Real(1) / b;
  Real h = d;
  for (int i = 1; i < 10000; ++i) {
    const Real a = -Real(i) * Real(m - 1 + i);
    b += 2;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Real(1) / d;
    const Real del = d * c;
    h *= del;
    if (std::abs(del - Real(1)) < std::numeric_limits<Real>::epsilon())
      return h;
  }
  throw std::runtime_error("em_scaled_cf: continued fraction did not converge");
}

// Series for E_1(x) on 0 < x <= ~1.5 (unscaled).
template <class Real>
Real e1_series(Real x) {
  Real sum = 0;
  Real term = 1;
  for (int k = 1; k < 10000; ++k) {
    term *= -x / Real(k);
    const Real add = -term / Real(k);
    sum += add;
    if (std::abs(add) < std::numeric_limits<Real>::epsilon() * std::abs(sum))
      break;
  }
  return -euler_gamma<Real>() - std::log(x) + sum;
}

}  // namespace detail

// Exponential integral Ei(x). Series for 0 < x <= 40, asymptotic expansion
// beyond; Ei(x) = -E_1(-x) for x < 0 with a series/continued-fraction split
// at |x| = 1 (the alternating series sheds digits past that point).
template <class Real>
Real exp_integral_ei(Real x) {
  if (x == Real(0))
    throw std::domain_error("exp_integral_ei: x = 0 (logarithmic singularity)");
  if (x > Real(0)) {
    return x <= Real(40) ? detail::ei_series(x) : detail::ei_asymptotic(x);
  }
  const Real y = -x;
  if (y <= Real(1)) return -detail::e1_series(y);
  return -std::exp(-y) * detail::em_scaled_cf(1, y);
}

// Scaled exponential integral e^x E_1(x) for x > 0. Free of overflow and
// of the e^x * E_1 cancellation that plagues the unscaled product.
template <class Real>
Real exp_integral_e1_scaled(Real x) {
  if (x <= Real(0))
    throw std::domain_error("exp_integral_e1_scaled: requires x > 0");
  if (x <= Real(1.5)) return std::exp(x) * detail::e1_series(x);
  return detail::em_scaled_cf(1, x);
}

// Scaled generalized exponential integral e^x E_m(x), m >= 0, x > 0
// (x >= 0 allowed for m >= 2). Small x uses the E_1 series plus the upward
// recurrence E_{m+1}(x) = (e^{-x} - x E_m(x))/m, which is stable there;
// larger x uses the continued fraction directly.
template <class Real>
Real exp_integral_em_scaled(int m, Real x) {
  if (m < 0) throw std::domain_error("exp_integral_em_scaled: m < 0");
  if (x < Real(0)) throw std::domain_error("exp_integral_em_scaled: x < 0");
  if (m == 0) {
    if (x == Real(0))
      throw std::domain_error("exp_integral_em_scaled: E_0 diverges at 0");
    return Real(1) / x;
  }
  if (x == Real(0)) {
    if (m == 1)
      throw std::domain_error("exp_integral_em_scaled: E_1 diverges at 0");
    return Real(1) / Real(m - 1);
  }
  if (x >= Real(1.5)) return detail::em_scaled_cf(m, x);
  Real e = std::exp(x) * detail::e1_series(x);
  for (int j = 1; j < m; ++j) e = (Real(1) - x * e) / Real(j);
  return e;
}

// Truncated Taylor series of the exponential, sum_{k=0}^{n} x^k/k!.
template <class Real>
Real trunc_exp_taylor(int n, Real x) {
  if (n < 0) throw std::domain_error("trunc_exp_taylor: n < 0");
  Real sum = 1;
  Real term = 1;
  for (int k = 1; k <= n; ++k) {
    term *= x / Real(k);
    sum += term;
  }
  return sum;
}

// Regularized lower incomplete Gamma P(a,x) = gamma(a,x)/Gamma(a) via the
// classic series / continued-fraction pair split at x = a+1.
template <class Real>
Real reg_lower_gamma(Real a, Real x) {
  if (a <= Real(0)) throw std::domain_error("reg_lower_gamma: a <= 0");
  if (x < Real(0)) throw std::domain_error("reg_lower_gamma: x < 0");
  if (x == Real(0)) return 0;
  const Real lg = std::lgamma(a);
  if (x < a + Real(1)) {
    Real ap = a;
    Real sum = Real(1) / a;
    Real del = sum;
    for (int k = 0; k < 10000; ++k) {
      ap += 1;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * std::numeric_limits<Real>::epsilon())
        break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  const Real tiny = std::numeric_limits<Real>::min() * 1000;
  Real b = x + Real(1) - a;
  Real c = Real(1) / tiny;
  Real d = Real(1) / b;
  Real h = d;
  for (int i = 1; i < 10000; ++i) {
    const Real an = -Real(i) * (Real(i) - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Real(1) / d;
    h *= d * c;
    if (std::abs(d * c - Real(1)) < std::numeric_limits<Real>::epsilon()) break;
  }
  const Real q = std::exp(-x + a * std::log(x) - lg) * h;
  return Real(1) - q;
}

// Lower incomplete Gamma gamma(a,x) = int_0^x t^{a-1} e^{-t} dt.
template <class Real>
Real lower_incomplete_gamma(Real a, Real x) {
  return reg_lower_gamma(a, x) * std::tgamma(a);
}

// Gamma CDF with shape/rate parameterization.
template <class Real>
Real gamma_cdf(const GammaParams<Real>& p, Real x) {
  if (!(p.shape > Real(0)) || !(p.rate > Real(0)))
    throw std::domain_error("gamma_cdf: shape and rate must be positive");
  if (x < Real(0)) throw std::domain_error("gamma_cdf: x < 0");
  return reg_lower_gamma(p.shape, p.rate * x);
}

}  // namespace polar_rsma
