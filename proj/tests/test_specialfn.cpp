#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polar_rsma/quadrature.hpp"
#include "polar_rsma/specialfn.hpp"

#include <cmath>
#include <stdexcept>

using namespace polar_rsma;
using doctest::Approx;

TEST_CASE("exponential integral Ei at reference points") {
  // Frozen 30-digit arbitrary-precision references.
  CHECK(exp_integral_ei(1.0) == Approx(1.8951178163559368).epsilon(1e-14));
  CHECK(exp_integral_ei(-1.0) ==
        Approx(-0.21938393439552027).epsilon(1e-14));
  CHECK(exp_integral_ei(10.0) == Approx(2492.2289762418777).epsilon(1e-13));
  CHECK_THROWS_AS(exp_integral_ei(0.0), std::domain_error);
}

TEST_CASE("Ei derivative matches e^x / x") {
  for (double x : {0.5, 2.0, 10.0, 50.0, -0.5, -2.0, -10.0}) {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    const double fd =
        (exp_integral_ei(x + h) - exp_integral_ei(x - h)) / (2 * h);
    const double expected = std::exp(x) / x;
    CHECK(fd == Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("scaled E1 values and bounds") {
  CHECK(exp_integral_e1_scaled(1.0) ==
        Approx(0.5963473623231941).epsilon(1e-14));
  CHECK(exp_integral_e1_scaled(10.0) ==
        Approx(0.09156333393978808).epsilon(1e-14));
  // e^x E1(x) lies strictly between 1/(x+1) and 1/x.
  // The gap to 1/(x+1) shrinks like 1/x^3; stop where it stays above ULP.
  for (double x : {0.1, 0.7, 1.4, 1.6, 2.0, 10.0, 100.0, 1e4, 1e6}) {
    const double v = exp_integral_e1_scaled(x);
    CHECK(v > 1.0 / (x + 1.0));
    CHECK(v < 1.0 / x);
  }
  // Continuity across the series / continued-fraction split.
  const double lo = exp_integral_e1_scaled(1.5 - 1e-9);
  const double hi = exp_integral_e1_scaled(1.5 + 1e-9);
  CHECK(lo == Approx(hi).epsilon(5e-9));
  CHECK_THROWS_AS(exp_integral_e1_scaled(0.0), std::domain_error);
  CHECK_THROWS_AS(exp_integral_e1_scaled(-1.0), std::domain_error);
}

TEST_CASE("scaled Em special cases and upward recurrence") {
  CHECK(exp_integral_em_scaled(0, 4.0) == 0.25);
  CHECK(exp_integral_em_scaled(2, 0.0) == 1.0);
  CHECK(exp_integral_em_scaled(5, 0.0) == 0.25);
  CHECK_THROWS_AS(exp_integral_em_scaled(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(exp_integral_em_scaled(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(exp_integral_em_scaled(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(exp_integral_em_scaled(2, -1.0), std::domain_error);
  // m = 1 agrees with the dedicated E1 routine.
  for (double x : {0.5, 2.0}) {
    CHECK(exp_integral_em_scaled(1, x) ==
          Approx(exp_integral_e1_scaled(x)).epsilon(1e-15));
  }
  // e^x E_{m+1}(x) = (1 - x e^x E_m(x)) / m across the evaluation split.
  for (double x : {0.2, 0.7, 1.4, 1.6, 3.0, 10.0}) {
    for (int m = 1; m <= 6; ++m) {
      const double lhs = exp_integral_em_scaled(m + 1, x);
      const double rhs = (1.0 - x * exp_integral_em_scaled(m, x)) / m;
      CHECK(lhs == Approx(rhs).epsilon(1e-11));
    }
  }
}

TEST_CASE("truncated exponential Taylor sum") {
  CHECK(trunc_exp_taylor(0, 5.0) == 1.0);
  CHECK(trunc_exp_taylor(2, 1.0) == 2.5);
  CHECK(trunc_exp_taylor(60, 3.0) == Approx(std::exp(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(trunc_exp_taylor(-1, 1.0), std::domain_error);
}

TEST_CASE("regularized lower incomplete gamma at reference points") {
  CHECK(reg_lower_gamma(1.0, 1.0) ==
        Approx(0.6321205588285577).epsilon(1e-14));
  CHECK(reg_lower_gamma(2.0, 1.0) ==
        Approx(0.26424111765711536).epsilon(1e-14));
  CHECK(reg_lower_gamma(3.0, 3.0) ==
        Approx(0.5768099188731565).epsilon(1e-14));
  CHECK(reg_lower_gamma(2.0, 0.0) == 0.0);
  CHECK(lower_incomplete_gamma(3.0, 3.0) ==
        Approx(1.153619837746313).epsilon(1e-14));
  CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(reg_lower_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("gamma CDF against direct density quadrature") {
  CHECK(gamma_cdf(GammaParams<double>{3.0, 1.0}, 3.0) ==
        Approx(0.5768099188731565).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_cdf(GammaParams<double>{0.0, 1.0}, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(gamma_cdf(GammaParams<double>{1.0, 1.0}, -0.5),
                  std::domain_error);

  // 20 deterministic (shape, rate, x) triples; the oracle integrates the
  // density, sharing no code with the series/continued-fraction pair.
  for (int i = 0; i < 20; ++i) {
    const double shape = 1.0 + 7.0 * ((i * 17) % 20) / 19.0;
    const double rate = 0.2 + 4.8 * ((i * 13) % 20) / 19.0;
    const double x = (0.1 + 2.9 * ((i * 7) % 20) / 19.0) * shape / rate;
    const double log_norm = shape * std::log(rate) - std::lgamma(shape);
    const auto pdf = [&](double t) {
      if (t <= 0.0) return 0.0;
      return std::exp(log_norm + (shape - 1.0) * std::log(t) - rate * t);
    };
    const QuadResult<double> q =
        integrate<double>(pdf, 0.0, x, 1e-12, 1e-15);
    CHECK(gamma_cdf(GammaParams<double>{shape, rate}, x) ==
          Approx(q.value).epsilon(1e-10));
  }
}
