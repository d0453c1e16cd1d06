#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polar_rsma/errors.hpp"
#include "polar_rsma/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace polar_rsma;
using doctest::Approx;

TEST_CASE("polynomial and smooth integrands") {
  const auto sq = [](double x) { return x * x; };
  const QuadResult<double> q1 = integrate<double>(sq, 0.0, 1.0, 1e-14, 0.0);
  CHECK(q1.value == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(q1.error <= 1e-13);

  const QuadResult<double> q2 = integrate<double>(
      [](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13,
      0.0);
  CHECK(q2.value == Approx(2.0).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand subdivides correctly") {
  const QuadResult<double> q = integrate<double>(
      [](double x) { return std::cos(10.0 * x); }, 0.0, 20.0, 1e-12, 1e-14);
  CHECK(q.value == Approx(std::sin(200.0) / 10.0).epsilon(1e-10));
}

TEST_CASE("near-singular integrand") {
  const double eps = 1e-6;
  const auto f = [&](double x) { return 1.0 / std::sqrt(x + eps); };
  const double exact = 2.0 * (std::sqrt(1.0 + eps) - std::sqrt(eps));
  const QuadResult<double> q = integrate<double>(f, 0.0, 1.0, 1e-10, 0.0);
  CHECK(q.value == Approx(exact).epsilon(1e-10));
}

TEST_CASE("semi-infinite integrals of decaying functions") {
  const QuadResult<double> q1 = integrate_to_infinity<double>(
      [](double x) { return std::exp(-x); }, 0.0, 1e-12, 1e-15);
  CHECK(q1.value == Approx(1.0).epsilon(1e-12));

  const QuadResult<double> q2 = integrate_to_infinity<double>(
      [](double x) { return std::exp(-0.5 * x * x); }, 0.0, 1e-12, 1e-15);
  CHECK(q2.value == Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
}

TEST_CASE("non-integrable tail is rejected") {
  CHECK_THROWS_AS(integrate_to_infinity<double>(
                      [](double x) { return 1.0 / (1.0 + x); }, 0.0, 1e-10,
                      1e-14),
                  NumericError);
}
