#pragma once

#include "polar_rsma/errors.hpp"
#include "polar_rsma/quadrature.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>

namespace polar_rsma {

// One-ring scatterer model for a uniform linear array, per polarization.
template <class Real = double>
struct OneRingSpec {
  int antennas;               // M/2
  Real azimuth_deg;           // group azimuth theta_g
  Real angular_spread_deg;    // Delta
  Real spacing_wavelengths;   // antenna spacing D

  void validate() const {
    if (antennas < 2) throw ConfigError("one_ring: antennas >= 2 required");
    if (!(angular_spread_deg > Real(0)) || !(angular_spread_deg < Real(90)))
      throw ConfigError("one_ring: 0 < angular_spread_deg < 90 required");
    if (!(spacing_wavelengths > Real(0)))
      throw ConfigError("one_ring: spacing_wavelengths > 0 required");
  }
};

// Spatial covariance of the one-ring model,
//   [R]_{m,p} = (1/2Delta) Int_{-Delta}^{Delta}
//               exp(j 2 pi D (m-p) cos(theta + w)) dw,
// a Hermitian PSD Toeplitz matrix with unit diagonal. The broadside
// phase term uses the cosine of the arrival angle so that distinct
// azimuths map to distinct covariances over a full circle.
template <class Real = double>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>
one_ring_covariance(const OneRingSpec<Real>& spec) {
  using Cplx = std::complex<Real>;
  using Mat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;
  spec.validate();
  constexpr Real kPi = Real(3.141592653589793238462643383279503L);
  const Real theta = spec.azimuth_deg * kPi / 180;
  const Real delta = spec.angular_spread_deg * kPi / 180;
  const int n = spec.antennas;
  Eigen::Matrix<Cplx, Eigen::Dynamic, 1> lag(n);
  lag(0) = Cplx(1, 0);
  for (int k = 1; k < n; ++k) {
    const Real freq = 2 * kPi * spec.spacing_wavelengths * Real(k);
    const auto re = [&](Real w) { return std::cos(freq * std::cos(theta + w)); };
    const auto im = [&](Real w) { return std::sin(freq * std::cos(theta + w)); };
    const Real tol = Real(1e-13);
    const QuadResult<Real> qr = integrate<Real>(re, -delta, delta, tol, tol);
    const QuadResult<Real> qi = integrate<Real>(im, -delta, delta, tol, tol);
    lag(k) = Cplx(qr.value, qi.value) / (2 * delta);
  }
  Mat r(n, n);
  for (int m = 0; m < n; ++m) {
    for (int p = 0; p < n; ++p) {
      r(m, p) = m >= p ? lag(m - p) : std::conj(lag(p - m));
    }
  }
  return r;
}

}  // namespace polar_rsma
