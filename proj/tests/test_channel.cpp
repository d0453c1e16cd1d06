#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polar_rsma/channel.hpp"
#include "polar_rsma/errors.hpp"
#include "polar_rsma/one_ring.hpp"
#include "polar_rsma/rng.hpp"

#include <Eigen/Dense>
#include <cmath>

using namespace polar_rsma;
using doctest::Approx;

namespace {

Eigen::MatrixXcd ring8() {
  return one_ring_covariance(OneRingSpec<double>{8, 30.0, 10.0, 0.5});
}

}  // namespace

TEST_CASE("eigen structure reconstructs the covariance") {
  const Eigen::MatrixXcd r = ring8();
  // Threshold close enough to 1 that the dropped tail stays below the
  // reconstruction tolerance: trace 8, so the cut leaves <= 8e-8 behind.
  const GroupModel<double> g =
      eigen_structure<double>(r, 1.0 - 1e-8, 8, 1, 30.0);
  CHECK(g.reduced_rank <= g.full_rank);
  const Eigen::MatrixXcd recon =
      g.eigvecs * g.eigvals.cast<std::complex<double>>().asDiagonal() *
      g.eigvecs.adjoint();
  CHECK((recon - r).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(g.azimuth_deg == 30.0);
}

TEST_CASE("rank cap truncates to the dominant eigenpairs") {
  const GroupModel<double> g = eigen_structure<double>(ring8(), 0.9999, 3);
  CHECK(g.reduced_rank == 3);
  CHECK(g.eigvecs.cols() == 3);
  CHECK(g.eigvals.size() == 3);
  CHECK(g.eigvals(0) >= g.eigvals(1));
  CHECK(g.eigvals(1) >= g.eigvals(2));
  CHECK(g.eigvals(2) > 0.0);
  const Eigen::MatrixXcd gram = g.eigvecs.adjoint() * g.eigvecs;
  CHECK((gram - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK_THROWS_AS(eigen_structure<double>(ring8(), 1.5, 3), ConfigError);
  CHECK_THROWS_AS(eigen_structure<double>(ring8(), 0.9999, 0), ConfigError);
}

TEST_CASE("energy threshold keeps the shortest sufficient prefix") {
  const Eigen::MatrixXcd r = ring8();
  const double trace = r.real().trace();
  const GroupModel<double> g = eigen_structure<double>(r, 0.9, 8);
  CHECK(g.reduced_rank < g.full_rank);
  const double kept = g.eigvals.sum();
  CHECK(kept >= 0.9 * trace);
  CHECK(kept - g.eigvals(g.reduced_rank - 1) < 0.9 * trace);
  CHECK(g.null_rank == g.reduced_rank);
}

TEST_CASE("rank floor widens the model but not the nulled prefix") {
  const Eigen::MatrixXcd r = ring8();
  const GroupModel<double> g = eigen_structure<double>(r, 0.9, 8);
  const int floor = g.reduced_rank + 2;
  REQUIRE(floor <= g.full_rank);
  REQUIRE(g.null_rank >= 2);
  const GroupModel<double> wide = eigen_structure<double>(r, 0.9, 8, floor);
  CHECK(wide.reduced_rank == floor);
  CHECK(wide.eigvecs.cols() == floor);
  CHECK(wide.eigvals.size() == floor);
  CHECK(wide.null_rank == g.null_rank);
  // The cap wins over the floor, and the nulled prefix never exceeds it.
  const GroupModel<double> capped =
      eigen_structure<double>(r, 0.9, g.null_rank - 1, floor);
  CHECK(capped.reduced_rank == g.null_rank - 1);
  CHECK(capped.null_rank == capped.reduced_rank);
  CHECK_THROWS_AS(eigen_structure<double>(r, 0.9, 8, 0), ConfigError);
}

TEST_CASE("large-scale gain at the default cell geometry") {
  // delta * d^{-eta} with delta = 4e4, eta = 2.5; d = 200 gives exactly
  // 1/sqrt(200).
  CHECK(large_scale_gain(4e4, 200.0, 2.5) ==
        Approx(0.07071067811865475).epsilon(1e-15));
  CHECK(large_scale_gain(4e4, 170.0, 2.5) ==
        Approx(0.10615432371589902).epsilon(1e-14));
  CHECK(large_scale_gain(4e4, 140.0, 2.5) ==
        Approx(0.17248046014867685).epsilon(1e-14));
  CHECK_THROWS_AS(large_scale_gain(4e4, 0.0, 2.5), ConfigError);
  CHECK_THROWS_AS(large_scale_gain(-1.0, 100.0, 2.5), ConfigError);
}

TEST_CASE("channel draws are deterministic and follow the draw order") {
  const GroupModel<double> g = eigen_structure<double>(ring8(), 0.9999, 4);
  const UserLink<double> user{0.1, 200.0};

  Rng rng_a(777);
  Rng rng_b(777);
  const auto ch_a = sample_channel(g, user, 0.3, rng_a);
  const auto ch_b = sample_channel(g, user, 0.3, rng_b);
  CHECK(ch_a.h_vv == ch_b.h_vv);
  CHECK(ch_a.h_vh == ch_b.h_vh);
  CHECK(ch_a.h_hv == ch_b.h_hv);
  CHECK(ch_a.h_hh == ch_b.h_hh);

  // Replay the generator by hand: vv, vh, hv, hh, each through the scaled
  // eigenbeam map.
  Rng rng_c(777);
  const Eigen::MatrixXcd scaled =
      (g.eigvecs *
       g.eigvals.cwiseSqrt().cast<std::complex<double>>().asDiagonal())
          .eval();
  const double root_zeta = std::sqrt(user.large_scale_gain);
  const Eigen::VectorXcd vv =
      root_zeta * (scaled * rng_c.cnormal_vector(g.reduced_rank));
  const Eigen::VectorXcd vh =
      root_zeta * (scaled * rng_c.cnormal_vector(g.reduced_rank));
  const Eigen::VectorXcd hv =
      root_zeta * (scaled * rng_c.cnormal_vector(g.reduced_rank));
  const Eigen::VectorXcd hh =
      root_zeta * (scaled * rng_c.cnormal_vector(g.reduced_rank));
  CHECK(ch_a.h_vv == vv);
  CHECK(ch_a.h_vh == vh);
  CHECK(ch_a.h_hv == hv);
  CHECK(ch_a.h_hh == hh);

  Rng rng_d(778);
  CHECK_THROWS_AS(sample_channel(g, user, -0.1, rng_d), ConfigError);
  CHECK_THROWS_AS(sample_channel(g, user, 1.1, rng_d), ConfigError);
}

TEST_CASE("dual-polarized assembly places the leakage blocks") {
  const GroupModel<double> g = eigen_structure<double>(ring8(), 0.9999, 4);
  const UserLink<double> user{0.1, 200.0};

  Rng rng(99);
  auto ch = sample_channel(g, user, 0.0, rng);
  Eigen::MatrixXcd h0 = assemble_channel_matrix(ch);
  REQUIRE(h0.rows() == 16);
  REQUIRE(h0.cols() == 2);
  CHECK(h0.col(0).head(8) == ch.h_vv);
  CHECK(h0.col(1).tail(8) == ch.h_hh);
  CHECK(h0.col(0).tail(8).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h0.col(1).head(8).cwiseAbs().maxCoeff() == 0.0);

  ch.ixpd = 0.25;  // sqrt is exactly 0.5
  Eigen::MatrixXcd h1 = assemble_channel_matrix(ch);
  CHECK(h1.col(0).tail(8) == (0.5 * ch.h_hv).eval());
  CHECK(h1.col(1).head(8) == (0.5 * ch.h_vh).eval());
}

TEST_CASE("draw energy matches the eigenvalue mass") {
  const GroupModel<double> g = eigen_structure<double>(ring8(), 0.9999, 4);
  const UserLink<double> user{0.17248046014867685, 140.0};
  const double mass = user.large_scale_gain * g.eigvals.sum();

  Rng rng(2024);
  const int n = 4000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += sample_channel(g, user, 0.1, rng).h_vv.squaredNorm();
  const double mean = acc / n;
  // Each |g_i|^2 is unit-mean exponential, so the estimator's standard
  // error is zeta * sqrt(sum(lambda_i^2) / n).
  const double se =
      user.large_scale_gain * std::sqrt(g.eigvals.squaredNorm() / n);
  CHECK(std::abs(mean - mass) <= 4 * se);
}
