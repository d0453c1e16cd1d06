#pragma once

#include "polar_rsma/errors.hpp"
#include "polar_rsma/rng.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace polar_rsma {

// Per-group second-order channel structure: covariance R_g with its
// dominant eigenpairs. Both polarizations share one spatial covariance.
template <class Real = double>
struct GroupModel {
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  Mat covariance;   // (M/2) x (M/2), Hermitian PSD, unit diagonal
  Mat eigvecs;      // (M/2) x reduced_rank, column-orthonormal
  Vec eigvals;      // reduced_rank entries, descending
  int full_rank = 0;
  int reduced_rank = 0;
  int null_rank = 0;  // energy-dominant prefix other groups null, <= reduced_rank
  Real azimuth_deg = 0;
};

template <class Real = double>
struct UserLink {
  Real large_scale_gain;  // zeta
  Real distance_m;
};

// One fading draw: the four polarization sub-channels of one user. The
// cross-polar scaling sqrt(chi) is applied at the point of use, matching
// the block structure of the dual-polarized channel matrix.
template <class Real = double>
struct ChannelRealization {
  using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
  CVec h_vv, h_vh, h_hv, h_hh;
  Real ixpd;  // chi in [0,1]
};

// Keeps the dominant eigenpairs of a Hermitian PSD covariance. The
// numerical rank counts eigenvalues above eps_rank = max_eig * 1e-9;
// reduced_rank additionally truncates to the shortest prefix capturing
// energy_threshold of the total energy, floored at rank_floor and then
// capped at rank_cap (the cap wins over the floor). The energy cut keeps
// each group's basis inside its angular support; nulling the deep spectral
// tails of neighbouring groups would otherwise destroy the reported
// group's own subspace. null_rank marks the energy prefix alone: the
// directions other groups zero-force. The floor only widens the model a
// group serves its own users with, so narrow groups can still carry one
// private stream per user.
template <class Real = double>
GroupModel<Real> eigen_structure(
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>&
        covariance,
    Real energy_threshold, int rank_cap, int rank_floor = 1,
    Real azimuth_deg = Real(0)) {
  if (rank_cap < 1) throw ConfigError("eigen_structure: rank_cap < 1");
  if (rank_floor < 1) throw ConfigError("eigen_structure: rank_floor < 1");
  if (!(energy_threshold > Real(0)) || !(energy_threshold < Real(1)))
    throw ConfigError("eigen_structure: energy_threshold must be in (0,1)");
  Eigen::SelfAdjointEigenSolver<typename GroupModel<Real>::Mat> es(covariance);
  if (es.info() != Eigen::Success)
    throw NumericError("eigen_structure: eigendecomposition failed");
  const auto& vals = es.eigenvalues();  // ascending
  const int n = static_cast<int>(vals.size());
  const Real eps_rank = vals(n - 1) * Real(1e-9);
  int full_rank = 0;
  for (int i = 0; i < n; ++i)
    if (vals(i) > eps_rank) ++full_rank;
  const Real total = vals.sum();
  Real captured = 0;
  int energy_rank = 0;
  while (energy_rank < n && captured < energy_threshold * total) {
    captured += vals(n - 1 - energy_rank);
    ++energy_rank;
  }
  const int reduced =
      std::min({full_rank, std::max(energy_rank, rank_floor), rank_cap});
  GroupModel<Real> g;
  g.covariance = covariance;
  g.eigvecs.resize(n, reduced);
  g.eigvals.resize(reduced);
  for (int i = 0; i < reduced; ++i) {
    g.eigvecs.col(i) = es.eigenvectors().col(n - 1 - i);
    g.eigvals(i) = vals(n - 1 - i);
  }
  g.full_rank = full_rank;
  g.reduced_rank = reduced;
  g.null_rank = std::min(energy_rank, reduced);
  g.azimuth_deg = azimuth_deg;
  return g;
}

// Large-scale power gain zeta = delta * d^(-eta).
template <class Real = double>
Real large_scale_gain(Real array_gain, Real distance_m, Real pathloss_exp) {
  if (!(distance_m > Real(0)))
    throw ConfigError("large_scale_gain: distance must be positive");
  if (!(array_gain > Real(0)))
    throw ConfigError("large_scale_gain: array gain must be positive");
  return array_gain * std::pow(distance_m, -pathloss_exp);
}

// Draws the four i.i.d. CN(0, I_rbar) factors and maps them through the
// group eigenbeams: h^{ij} = sqrt(zeta) U_g Lambda_g^{1/2} g^{ij}.
// Draw order is vv, vh, hv, hh, two engine calls per entry.
template <class Real = double>
ChannelRealization<Real> sample_channel(const GroupModel<Real>& group,
                                        const UserLink<Real>& user, Real ixpd,
                                        Rng& rng) {
  if (!(ixpd >= Real(0) && ixpd <= Real(1)))
    throw ConfigError("sample_channel: ixpd must lie in [0,1]");
  ChannelRealization<Real> ch;
  ch.ixpd = ixpd;
  const auto scaled =
      (group.eigvecs *
       group.eigvals.cwiseSqrt().template cast<std::complex<Real>>().asDiagonal())
          .eval();
  const Real root_zeta = std::sqrt(user.large_scale_gain);
  const auto draw = [&]() {
    return rng.cnormal_vector(group.reduced_rank)
        .template cast<std::complex<Real>>()
        .eval();
  };
  ch.h_vv = root_zeta * (scaled * draw());
  ch.h_vh = root_zeta * (scaled * draw());
  ch.h_hv = root_zeta * (scaled * draw());
  ch.h_hh = root_zeta * (scaled * draw());
  return ch;
}

// Assembles the M x 2 dual-polarized channel matrix
//   [ h_vv        sqrt(chi) h_vh ]
//   [ sqrt(chi) h_hv       h_hh  ]
// (rows: vertical then horizontal transmit halves; columns: receive
// polarizations).
template <class Real = double>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>
assemble_channel_matrix(const ChannelRealization<Real>& ch) {
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index half = ch.h_vv.size();
  const Real root_chi = std::sqrt(ch.ixpd);
  Mat h(2 * half, 2);
  h.col(0).head(half) = ch.h_vv;
  h.col(0).tail(half) = root_chi * ch.h_hv;
  h.col(1).head(half) = root_chi * ch.h_vh;
  h.col(1).tail(half) = ch.h_hh;
  return h;
}

}  // namespace polar_rsma
