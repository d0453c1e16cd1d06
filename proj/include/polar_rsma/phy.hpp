#pragma once

#include "polar_rsma/channel.hpp"
#include "polar_rsma/errors.hpp"
#include "polar_rsma/precoder.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace polar_rsma {

template <class Real = double>
struct PowerAllocation {
  Real common_alpha = Real(0.7);
  std::vector<Real> private_betas;
  std::vector<Real> noma_powers;
  Real sic_error = 0;  // xi, residual power fraction left by imperfect SIC

  void validate() const {
    if (!(common_alpha > Real(0) && common_alpha < Real(1)))
      throw ConfigError("power allocation: alpha must lie in (0,1)");
    Real sum = common_alpha;
    for (Real b : private_betas) {
      if (b < Real(0)) throw ConfigError("power allocation: beta < 0");
      sum += b;
    }
    if (sum > Real(1) + Real(1e-12))
      throw ConfigError("power allocation: alpha + sum(betas) exceeds 1");
    Real nsum = 0;
    for (Real p : noma_powers) {
      if (p < Real(0)) throw ConfigError("power allocation: noma power < 0");
      nsum += p;
    }
    if (nsum > Real(1) + Real(1e-12))
      throw ConfigError("power allocation: noma powers exceed 1");
    if (sic_error < Real(0)) throw ConfigError("power allocation: xi < 0");
  }
};

template <class Real = double>
struct RateTargets {
  Real common_rate = 0;                // R^c, bpcu
  std::vector<Real> private_rates;     // R^p_u, bpcu
};

// Per-user SINRs plus the raw gain terms they were assembled from, so
// tests can re-evaluate the SINR quotients independently.
template <class Real = double>
struct SinrReport {
  std::vector<Real> common_sinr;
  std::vector<Real> private_sinr;
  Real snr = 0;  // rho = 1/sigma^2
  std::vector<Real> common_signal;         // signal gain in the common SINR
  std::vector<Real> common_interference;   // interference gain, common SINR
  std::vector<Real> private_signal;        // signal gain in the private SINR
  std::vector<Real> private_interference;  // interference gain, private SINR
};

// Effective (precoder-projected) channels of one user; all four vectors
// include the large-scale factor sqrt(zeta) and have length Mbar/2.
template <class Real = double>
struct DpEffectiveChannels {
  using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
  CVec e_vv, e_vh, e_hv, e_hh;
};

template <class Real>
DpEffectiveChannels<Real> project_channels(const ChannelRealization<Real>& ch,
                                           const GroupPrecoder<Real>& f) {
  DpEffectiveChannels<Real> e;
  e.e_vv = f.f.adjoint() * ch.h_vv;
  e.e_vh = f.f.adjoint() * ch.h_vh;
  e.e_hv = f.f.adjoint() * ch.h_hv;
  e.e_hh = f.f.adjoint() * ch.h_hh;
  return e;
}

// SIC-free dual-polarized RSMA SINRs. Common message on the vertical
// polarization, private messages on the horizontal one; each suffers only
// the cross-polar leakage (factor chi) of the other.
template <class Real = double>
SinrReport<Real> dp_rsma_sinrs_effective(
    const std::vector<DpEffectiveChannels<Real>>& users,
    const PrecoderSet<Real>& pre, const PowerAllocation<Real>& pa, Real chi,
    Real noise_var) {
  const int n_users = static_cast<int>(users.size());
  SinrReport<Real> rep;
  rep.snr = Real(1) / noise_var;
  rep.common_sinr.resize(n_users);
  rep.private_sinr.resize(n_users);
  rep.common_signal.resize(n_users);
  rep.common_interference.resize(n_users);
  rep.private_signal.resize(n_users);
  rep.private_interference.resize(n_users);
  for (int u = 0; u < n_users; ++u) {
    const auto& e = users[u];
    const Real sig_c =
        pa.common_alpha * std::norm(e.e_vv.dot(pre.common));
    Real intf_c = 0;
    for (int n = 0; n < n_users; ++n)
      intf_c += pa.private_betas[n] *
                std::norm(e.e_hv.dot(pre.private_precoders[n]));
    intf_c *= chi;
    const Real sig_p =
        pa.private_betas[u] * std::norm(e.e_hh.dot(pre.private_precoders[u]));
    const Real intf_p =
        chi * pa.common_alpha * std::norm(e.e_vh.dot(pre.common));
    rep.common_signal[u] = sig_c;
    rep.common_interference[u] = intf_c;
    rep.private_signal[u] = sig_p;
    rep.private_interference[u] = intf_p;
    rep.common_sinr[u] = sig_c / (intf_c + noise_var);
    rep.private_sinr[u] = sig_p / (intf_p + noise_var);
  }
  return rep;
}

template <class Real = double>
SinrReport<Real> dp_rsma_sinrs(
    const std::vector<ChannelRealization<Real>>& channels,
    const GroupPrecoder<Real>& f, const PrecoderSet<Real>& pre,
    const PowerAllocation<Real>& pa, Real noise_var) {
  std::vector<DpEffectiveChannels<Real>> users;
  users.reserve(channels.size());
  for (const auto& ch : channels) users.push_back(project_channels(ch, f));
  return dp_rsma_sinrs_effective(users, pre, pa, channels.at(0).ixpd,
                                 noise_var);
}

// Outage per Eq-union rule: a user is in outage iff the common rate or its
// private rate falls strictly below the target.
template <class Real = double>
std::vector<char> outage_indicator(const SinrReport<Real>& report,
                                   const RateTargets<Real>& targets) {
  const int n_users = static_cast<int>(report.common_sinr.size());
  std::vector<char> out(n_users);
  for (int u = 0; u < n_users; ++u) {
    const Real rc = std::log2(Real(1) + report.common_sinr[u]);
    const Real rp = std::log2(Real(1) + report.private_sinr[u]);
    out[u] = (rc < targets.common_rate) || (rp < targets.private_rates[u]);
  }
  return out;
}

template <class Real = double>
struct RateReport {
  Real common_rate = 0;             // min over users of log2(1+common SINR)
  std::vector<Real> private_rates;  // per-user log2(1+private SINR)

  Real group_sum() const {
    Real s = common_rate * Real(private_rates.size());
    for (Real r : private_rates) s += r;
    return s;
  }
};

// Instantaneous rates: the common message must be decodable by every user
// in the group, so its rate is the minimum across users.
template <class Real = double>
RateReport<Real> dp_rsma_rates(const SinrReport<Real>& report) {
  RateReport<Real> rr;
  rr.common_rate = std::numeric_limits<Real>::infinity();
  rr.private_rates.resize(report.private_sinr.size());
  for (std::size_t u = 0; u < report.common_sinr.size(); ++u) {
    rr.common_rate =
        std::min(rr.common_rate, std::log2(Real(1) + report.common_sinr[u]));
    rr.private_rates[u] = std::log2(Real(1) + report.private_sinr[u]);
  }
  return rr;
}

// Single-polarized RSMA baseline: all messages superposed on one array.
// The common message is decoded first (privates as interference), then
// canceled with residual factor xi before private decoding.
template <class Real = double>
SinrReport<Real> sp_rsma_sinrs(
    const std::vector<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>>&
        effective_channels,
    const PrecoderSet<Real>& pre, const PowerAllocation<Real>& pa,
    Real noise_var) {
  const int n_users = static_cast<int>(effective_channels.size());
  SinrReport<Real> rep;
  rep.snr = Real(1) / noise_var;
  rep.common_sinr.resize(n_users);
  rep.private_sinr.resize(n_users);
  rep.common_signal.resize(n_users);
  rep.common_interference.resize(n_users);
  rep.private_signal.resize(n_users);
  rep.private_interference.resize(n_users);
  for (int u = 0; u < n_users; ++u) {
    const auto& e = effective_channels[u];
    const Real common_gain =
        pa.common_alpha * std::norm(e.dot(pre.common));
    Real private_sum = 0;
    for (int n = 0; n < n_users; ++n)
      private_sum +=
          pa.private_betas[n] * std::norm(e.dot(pre.private_precoders[n]));
    const Real own =
        pa.private_betas[u] * std::norm(e.dot(pre.private_precoders[u]));
    const Real other_privates = private_sum - own;
    rep.common_signal[u] = common_gain;
    rep.common_interference[u] = private_sum;
    rep.private_signal[u] = own;
    rep.private_interference[u] =
        pa.sic_error * common_gain + other_privates;
    rep.common_sinr[u] = common_gain / (private_sum + noise_var);
    rep.private_sinr[u] =
        own / (pa.sic_error * common_gain + other_privates + noise_var);
  }
  return rep;
}

// Power-domain NOMA decode chains. Users must be ordered by large-scale
// gain zeta DESCENDING, with powers ascending accordingly (the weakest
// user carries the most power). gains[u] is the effective beam gain of
// user u (zeta included). Returns message_sinr[u][n] for n >= u: the SINR
// at user u when decoding message n, having canceled messages n+1..U-1
// with residual factor xi.
template <class Real = double>
struct NomaReport {
  std::vector<std::vector<Real>> message_sinr;  // [u][n], valid for n >= u
  std::vector<Real> gain;
  Real snr = 0;
};

template <class Real = double>
NomaReport<Real> noma_chain_sinrs(const std::vector<Real>& gains,
                                  const std::vector<Real>& powers, Real xi,
                                  Real noise_var) {
  const int n_users = static_cast<int>(gains.size());
  NomaReport<Real> rep;
  rep.snr = Real(1) / noise_var;
  rep.gain = gains;
  rep.message_sinr.assign(n_users, std::vector<Real>(n_users, Real(0)));
  for (int u = 0; u < n_users; ++u) {
    for (int n = u; n < n_users; ++n) {
      Real interference = 0;
      for (int k = 0; k < n; ++k) interference += powers[k];
      Real residual = 0;
      for (int k = n + 1; k < n_users; ++k) residual += powers[k];
      const Real denom =
          gains[u] * (interference + xi * residual) + noise_var;
      rep.message_sinr[u][n] = gains[u] * powers[n] / denom;
    }
  }
  return rep;
}

// Single-polarized NOMA gain: shared beam b, g_u = |e_u^H b|^2.
template <class Real = double>
std::vector<Real> noma_gains_single(
    const std::vector<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>>&
        effective_channels,
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& beam) {
  std::vector<Real> g(effective_channels.size());
  for (std::size_t u = 0; u < effective_channels.size(); ++u)
    g[u] = std::norm(effective_channels[u].dot(beam));
  return g;
}

// Dual-polarized NOMA gain: the superposed stream is transmitted on both
// polarizations through the same inner beam at half power each and the
// receiver combines its two branches, so
//   g_u = (|(e_vv + sqrt(chi) e_hv)^H b|^2
//        + |(e_hh + sqrt(chi) e_vh)^H b|^2) / 2.
template <class Real = double>
std::vector<Real> noma_gains_dual(
    const std::vector<DpEffectiveChannels<Real>>& users,
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& beam,
    Real chi) {
  const Real root_chi = std::sqrt(chi);
  std::vector<Real> g(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    const auto& e = users[u];
    const auto bv = (e.e_vv + root_chi * e.e_hv).eval();
    const auto bh = (e.e_hh + root_chi * e.e_vh).eval();
    g[u] = (std::norm(bv.dot(beam)) + std::norm(bh.dot(beam))) / 2;
  }
  return g;
}

// NOMA outage: user u fails if any message in its decode chain (its own
// and every higher-power message it must cancel first) misses that
// message's target rate. targets[n] is the per-message target in the same
// (zeta-descending) order as the report.
template <class Real = double>
std::vector<char> noma_outage(const NomaReport<Real>& report,
                              const std::vector<Real>& message_targets) {
  const int n_users = static_cast<int>(report.gain.size());
  std::vector<char> out(n_users, 0);
  for (int u = 0; u < n_users; ++u) {
    for (int n = n_users - 1; n >= u; --n) {
      const Real rate = std::log2(Real(1) + report.message_sinr[u][n]);
      if (rate < message_targets[n]) {
        out[u] = 1;
        break;
      }
    }
  }
  return out;
}

// OMA (TDMA): each user is served alone in a 1/U time share at full power.
template <class Real = double>
std::vector<Real> oma_rate(
    const std::vector<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>>&
        effective_channels,
    const std::vector<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>>&
        precoders,
    Real noise_var) {
  const int n_users = static_cast<int>(effective_channels.size());
  std::vector<Real> rates(n_users);
  for (int u = 0; u < n_users; ++u) {
    const Real g = std::norm(effective_channels[u].dot(precoders[u]));
    rates[u] = std::log2(Real(1) + g / noise_var) / Real(n_users);
  }
  return rates;
}

}  // namespace polar_rsma
