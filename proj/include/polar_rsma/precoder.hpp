#pragma once

#include "polar_rsma/channel.hpp"
#include "polar_rsma/errors.hpp"
#include "polar_rsma/rng.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <complex>
#include <vector>

namespace polar_rsma {

// Inter-group null-space precoder F_g for one polarization; the
// dual-polarized precoder is K_g = I_2 (x) F_g.
template <class Real = double>
struct GroupPrecoder {
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  Mat f;              // (M/2) x (Mbar/2), column-orthonormal
  int projected_dim;  // Mbar
};

// Per-realization unit-norm precoders: one common vector on the vertical
// polarization and U private vectors on the horizontal polarization.
template <class Real = double>
struct PrecoderSet {
  using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
  CVec common;
  std::vector<CVec> private_precoders;
};

// Builds F_g: a basis of the orthogonal complement of the other groups'
// dominant eigenspaces (their null_rank prefixes), rotated to capture the
// most own-group energy. The stacked matrix U*_g = [U_1 .. U_{g-1},
// U_{g+1} .. U_G] is nulled exactly via its SVD; among the null-space
// basis B the returned columns are B times the dominant eigenvectors of
// B^H R_g B, which keeps the projected channel covariance as concentrated
// as the null-space constraint allows.
template <class Real = double>
GroupPrecoder<Real> group_precoder(const GroupModel<Real>& own_group,
                                   const std::vector<const GroupModel<Real>*>&
                                       other_groups,
                                   int projected_dim) {
  using Mat = typename GroupPrecoder<Real>::Mat;
  const int half_m = static_cast<int>(own_group.covariance.rows());
  if (projected_dim < 2 || projected_dim % 2 != 0)
    throw ConfigError("group_precoder: projected_dim must be even and >= 2");
  int sum_other = 0;
  for (const auto* g : other_groups) sum_other += g->null_rank;
  if (!(half_m > sum_other))
    throw ConfigError(
        "group_precoder: violated m_total/2 > sum of other groups' reduced "
        "ranks");
  if (!(projected_dim / 2 <= half_m - sum_other))
    throw ConfigError(
        "group_precoder: violated projected_dim/2 <= m_total/2 - sum of other "
        "groups' reduced ranks");

  Mat basis;
  if (sum_other == 0) {
    basis = Mat::Identity(half_m, half_m);
  } else {
    Mat stacked(half_m, sum_other);
    int col = 0;
    for (const auto* g : other_groups) {
      stacked.middleCols(col, g->null_rank) = g->eigvecs.leftCols(g->null_rank);
      col += g->null_rank;
    }
    Eigen::BDCSVD<Mat> svd(stacked, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const Real cutoff = sv(0) * Real(1e-10);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    const int null_dim = half_m - rank;
    if (null_dim < projected_dim / 2)
      throw ConfigError(
          "group_precoder: violated projected_dim/2 <= m_total/2 - sum of "
          "other groups' reduced ranks (numerical rank)");
    basis = svd.matrixU().rightCols(null_dim);
  }

  const Mat projected = basis.adjoint() * own_group.covariance * basis;
  Eigen::SelfAdjointEigenSolver<Mat> es(projected);
  if (es.info() != Eigen::Success)
    throw NumericError("group_precoder: eigendecomposition failed");
  const Eigen::Index n = projected.rows();
  Mat top(n, projected_dim / 2);
  for (int i = 0; i < projected_dim / 2; ++i)
    top.col(i) = es.eigenvectors().col(n - 1 - i);  // descending order
  GroupPrecoder<Real> out;
  out.f = basis * top;
  out.projected_dim = projected_dim;
  return out;
}

// Null-steering private precoders. p_u is the unit vector in the null
// space of the other users' effective channels that maximizes the intended
// user's gain |e_u^H p_u| (the projection of e_u onto that null space).
template <class Real = double>
std::vector<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>>
private_precoders(
    const GroupPrecoder<Real>& f,
    const std::vector<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>>&
        effective_hh_channels) {
  using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
  using Mat = typename GroupPrecoder<Real>::Mat;
  const int users = static_cast<int>(effective_hh_channels.size());
  const int dim = static_cast<int>(f.f.cols());
  if (users - 1 >= dim)
    throw ConfigError(
        "private_precoders: null space empty; violated projected_dim/2 > "
        "users_per_group - 1");
  std::vector<CVec> out(users);
  for (int u = 0; u < users; ++u) {
    CVec p = effective_hh_channels[u];
    if (users > 1) {
      Mat others(dim, users - 1);
      int col = 0;
      for (int n = 0; n < users; ++n)
        if (n != u) others.col(col++) = effective_hh_channels[n];
      const Eigen::HouseholderQR<Mat> qr(others);
      const Mat q1 = qr.householderQ() * Mat::Identity(dim, users - 1);
      p -= q1 * (q1.adjoint() * p);
    }
    const Real norm = p.norm();
    if (!(norm > effective_hh_channels[u].norm() * Real(1e-12)))
      throw NumericError(
          "private_precoders: intended channel lies in the span of the other "
          "users' channels");
    out[u] = p / norm;
  }
  return out;
}

// Random common precoder: i.i.d. standard complex Gaussian entries,
// normalized to unit norm.
template <class Real = double>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> common_precoder(int dim,
                                                                     Rng& rng) {
  if (dim < 1) throw ConfigError("common_precoder: dim >= 1 required");
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> c =
      rng.cnormal_vector(dim).template cast<std::complex<Real>>();
  return c / c.norm();
}

// K_g = I_2 (x) F_g acting on the stacked dual-polarized array.
template <class Real = double>
typename GroupPrecoder<Real>::Mat stacked_precoder(
    const GroupPrecoder<Real>& f) {
  using Mat = typename GroupPrecoder<Real>::Mat;
  const Eigen::Index rows = f.f.rows();
  const Eigen::Index cols = f.f.cols();
  Mat k = Mat::Zero(2 * rows, 2 * cols);
  k.topLeftCorner(rows, cols) = f.f;
  k.bottomRightCorner(rows, cols) = f.f;
  return k;
}

}  // namespace polar_rsma
