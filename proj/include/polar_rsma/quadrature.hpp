#pragma once

#include "polar_rsma/errors.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace polar_rsma {

template <class Real = double>
struct QuadResult {
  Real value;
  Real error;  // estimate of the absolute error
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1]. Kronrod nodes/weights plus the
// embedded 7-point Gauss weights on the odd-indexed nodes.
template <class Real>
struct GK15 {
  static constexpr int n = 8;  // nonnegative nodes
  static constexpr Real xk[n] = {
      Real(0.991455371120812639206854697526329L),
      Real(0.949107912342758524526189684047851L),
      Real(0.864864423359769072789712788640926L),
      Real(0.741531185599394439863864773280788L),
      Real(0.586087235467691130294144838258730L),
      Real(0.405845151377397166906606412076961L),
      Real(0.207784955007898467600689403773245L),
      Real(0.000000000000000000000000000000000L)};
  static constexpr Real wk[n] = {
      Real(0.022935322010529224963732008058970L),
      Real(0.063092092629978553290700663189204L),
      Real(0.104790010322250183839876322541518L),
      Real(0.140653259715525918745189590510238L),
      Real(0.169004726639267902826583426598550L),
      Real(0.190350578064785409913256402421014L),
      Real(0.204432940075298892414161999234649L),
      Real(0.209482141084727828012999174891714L)};
  static constexpr Real wg[4] = {
      Real(0.129484966168869693270611432679082L),
      Real(0.279705391489276667901467771423780L),
      Real(0.381830050505118944950369775488975L),
      Real(0.417959183673469387755102040816327L)};
};

}  // namespace detail

// Single Gauss-Kronrod 7-15 panel.
template <class Real, class F>
QuadResult<Real> gk15_panel(F&& f, Real a, Real b) {
  using Tab = detail::GK15<Real>;
  const Real c = (a + b) / 2;
  const Real h = (b - a) / 2;
  Real k = 0;
  Real g = 0;
  for (int i = 0; i < Tab::n; ++i) {
    const Real x = Tab::xk[i];
    Real fs;
    if (i == Tab::n - 1) {
      fs = f(c);
      k += Tab::wk[i] * fs;
      g += Tab::wg[3] * fs;
    } else {
      fs = f(c - h * x) + f(c + h * x);
      k += Tab::wk[i] * fs;
      if (i % 2 == 1) g += Tab::wg[i / 2] * fs;
    }
  }
  k *= h;
  g *= h;
  return {k, std::abs(k - g)};
}

// Adaptive bisection on [a,b]; per-segment tolerance is split between the
// halves so the accumulated error stays below the requested bound.
template <class Real, class F>
QuadResult<Real> integrate(F&& f, Real a, Real b, Real rel_tol, Real abs_tol) {
  struct Seg {
    Real a, b, tol;
    int depth;
  };
  // First pass to scale the relative tolerance.
  const QuadResult<Real> whole = gk15_panel<Real>(f, a, b);
  const Real scale = std::abs(whole.value);
  Real total = 0;
  Real err = 0;
  constexpr int kMaxDepth = 60;
  constexpr int kMaxSegs = 100000;
  Seg stack[kMaxDepth + 2];
  int top = 0;
  stack[top++] = {a, b, std::max(abs_tol, rel_tol * scale), 0};
  int used = 0;
  // Depth-first so the stack stays bounded by the depth limit.
  Real worst = 0;
  while (top > 0) {
    if (++used > kMaxSegs)
      throw NumericError("integrate: segment budget exhausted; achieved error " +
                         std::to_string(err + worst));
    const Seg s = stack[--top];
    const QuadResult<Real> r = gk15_panel<Real>(f, s.a, s.b);
    if (r.error <= s.tol || s.depth >= kMaxDepth) {
      if (r.error > s.tol) worst += r.error;
      total += r.value;
      err += r.error;
      continue;
    }
    const Real m = (s.a + s.b) / 2;
    stack[top++] = {s.a, m, s.tol / 2, s.depth + 1};
    stack[top++] = {m, s.b, s.tol / 2, s.depth + 1};
  }
  if (worst > std::max(abs_tol, rel_tol * std::abs(total)) * 100)
    throw NumericError("integrate: quadrature did not converge; achieved error " +
                       std::to_string(err));
  return {total, err};
}

// Integral over [a, inf) of an eventually decaying integrand, by doubling
// panels until their contribution falls below the tolerance.
template <class Real, class F>
QuadResult<Real> integrate_to_infinity(F&& f, Real a, Real rel_tol,
                                       Real abs_tol) {
  Real total = 0;
  Real err = 0;
  Real left = a;
  Real width = Real(1);
  int quiet = 0;
  for (int seg = 0; seg < 200; ++seg) {
    const QuadResult<Real> r =
        integrate<Real>(f, left, left + width, rel_tol / 2, abs_tol / 2);
    total += r.value;
    err += r.error;
    left += width;
    width *= 2;
    const Real bound = std::max(abs_tol, rel_tol * std::abs(total));
    if (std::abs(r.value) < bound / 4) {
      if (++quiet >= 2) return {total, err};
    } else {
      quiet = 0;
    }
  }
  throw NumericError(
      "integrate_to_infinity: tail did not decay; achieved error " +
      std::to_string(err));
}

}  // namespace polar_rsma
