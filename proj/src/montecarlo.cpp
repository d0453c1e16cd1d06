#include "polar_rsma/montecarlo.hpp"

#include "polar_rsma/errors.hpp"
#include "polar_rsma/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

namespace polar_rsma {

namespace {

struct TrialOut {
  // Per-user outage contribution in [0,1]: the 0/1 indicator in general,
  // or the exact conditional outage probability where the event law given
  // the trial's precoders is known (dp-rsma at chi = 0).
  std::vector<double> outage;
  std::vector<double> user_rate;
  double common_sum = 0;  // U * min-common for RSMA schemes, else 0
  double total = 0;
};

// Neumaier-compensated running sum; keeps block reduction exact enough to
// be independent of the number of worker threads.
struct Neumaier {
  double s = 0, c = 0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct Accum {
  std::vector<Neumaier> outage;
  std::vector<Neumaier> rate, rate_sq;
  Neumaier common, common_sq, priv, priv_sq, total, total_sq;
  long long n = 0;

  explicit Accum(int users)
      : outage(static_cast<std::size_t>(users)),
        rate(static_cast<std::size_t>(users)),
        rate_sq(static_cast<std::size_t>(users)) {}

  void add(const TrialOut& t) {
    for (std::size_t u = 0; u < outage.size(); ++u) {
      outage[u].add(t.outage[u]);
      rate[u].add(t.user_rate[u]);
      rate_sq[u].add(t.user_rate[u] * t.user_rate[u]);
    }
    const double p = t.total - t.common_sum;
    common.add(t.common_sum);
    common_sq.add(t.common_sum * t.common_sum);
    priv.add(p);
    priv_sq.add(p * p);
    total.add(t.total);
    total_sq.add(t.total * t.total);
    ++n;
  }

  void merge(const Accum& o) {
    for (std::size_t u = 0; u < outage.size(); ++u) {
      outage[u].add(o.outage[u].value());
      rate[u].add(o.rate[u].value());
      rate_sq[u].add(o.rate_sq[u].value());
    }
    common.add(o.common.value());
    common_sq.add(o.common_sq.value());
    priv.add(o.priv.value());
    priv_sq.add(o.priv_sq.value());
    total.add(o.total.value());
    total_sq.add(o.total_sq.value());
    n += o.n;
  }
};

std::pair<double, double> mean_se(const Neumaier& sum, const Neumaier& sq,
                                  long long n) {
  const double mean = sum.value() / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  const double var =
      std::max(0.0, (sq.value() - static_cast<double>(n) * mean * mean) /
                        static_cast<double>(n - 1));
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

bool is_single_pol(const std::string& scheme) {
  return scheme == "sp-rsma" || scheme == "sp-noma" || scheme == "oma";
}

std::uint64_t dp_seed(std::uint64_t master, double snr_db, double chi,
                      long long trial, std::uint64_t tag) {
  return mix_words({master, bits_of(snr_db), bits_of(chi),
                    static_cast<std::uint64_t>(trial), tag});
}

// Single-polarized schemes never use chi, so their point identity omits
// it; their rows are bitwise equal across the chi grid.
std::uint64_t sp_seed(std::uint64_t master, double snr_db, long long trial,
                      std::uint64_t tag) {
  return mix_words(
      {master, bits_of(snr_db), static_cast<std::uint64_t>(trial), tag});
}

std::vector<DpEffectiveChannels<double>> draw_dp_users(const Scene& sc,
                                                       double snr_db,
                                                       double chi,
                                                       long long trial,
                                                       std::uint64_t master) {
  Rng rng(dp_seed(master, snr_db, chi, trial, kTagDpChannel));
  const auto& w = sc.dp.w;
  const Eigen::Index r = w.cols();
  std::vector<DpEffectiveChannels<double>> users(sc.zetas.size());
  for (std::size_t u = 0; u < sc.zetas.size(); ++u) {
    const double rz = std::sqrt(sc.zetas[u]);
    users[u].e_vv = rz * (w * rng.cnormal_vector(r));
    users[u].e_vh = rz * (w * rng.cnormal_vector(r));
    users[u].e_hv = rz * (w * rng.cnormal_vector(r));
    users[u].e_hh = rz * (w * rng.cnormal_vector(r));
  }
  return users;
}

std::vector<Eigen::VectorXcd> draw_sp_users(const Scene& sc, double snr_db,
                                            long long trial,
                                            std::uint64_t master) {
  Rng rng(sp_seed(master, snr_db, trial, kTagSpChannel));
  const auto& w = sc.sp->w;
  const Eigen::Index r = w.cols();
  std::vector<Eigen::VectorXcd> users(sc.zetas.size());
  for (std::size_t u = 0; u < sc.zetas.size(); ++u)
    users[u] = std::sqrt(sc.zetas[u]) * (w * rng.cnormal_vector(r));
  return users;
}

// Decode-order permutation: indices sorted by zeta descending (the SIC
// chain contract of noma_chain_sinrs).
std::vector<int> zeta_descending_order(const std::vector<double>& zetas) {
  std::vector<int> order(zetas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return zetas[static_cast<std::size_t>(a)] >
           zetas[static_cast<std::size_t>(b)];
  });
  return order;
}

int max_power_user(const std::vector<double>& powers) {
  return static_cast<int>(std::max_element(powers.begin(), powers.end()) -
                          powers.begin());
}

TrialOut rsma_trial_out(const SinrReport<double>& rep,
                        const RateTargets<double>& targets) {
  TrialOut out;
  const auto indicator = outage_indicator(rep, targets);
  out.outage.assign(indicator.begin(), indicator.end());
  const RateReport<double> rr = dp_rsma_rates(rep);
  const std::size_t n = rr.private_rates.size();
  out.user_rate.resize(n);
  for (std::size_t u = 0; u < n; ++u)
    out.user_rate[u] = rr.common_rate + rr.private_rates[u];
  out.common_sum = rr.common_rate * static_cast<double>(n);
  out.total = rr.group_sum();
  return out;
}

TrialOut noma_trial_out(const Scene& sc, const std::vector<double>& gains,
                        double xi, double noise_var) {
  const SystemConfig& cfg = sc.config;
  const auto order = zeta_descending_order(sc.zetas);
  const std::size_t n = gains.size();
  std::vector<double> gains_desc(n), powers_desc(n), targets_desc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(order[i]);
    gains_desc[i] = gains[u];
    powers_desc[i] = cfg.noma_powers[u];
    targets_desc[i] = cfg.rate_common + cfg.rate_private[u];
  }
  const NomaReport<double> rep =
      noma_chain_sinrs(gains_desc, powers_desc, xi, noise_var);
  const auto outage_desc = noma_outage(rep, targets_desc);
  TrialOut out;
  out.outage.resize(n);
  out.user_rate.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(order[i]);
    out.outage[u] = outage_desc[i];
    out.user_rate[u] = std::log2(1.0 + rep.message_sinr[i][i]);
    out.total += out.user_rate[u];
  }
  return out;
}

TrialOut eval_dp_rsma(const Scene& sc, double snr_db, double chi,
                      double noise_var, long long trial,
                      std::uint64_t master) {
  const auto users = draw_dp_users(sc, snr_db, chi, trial, master);
  Rng crng(dp_seed(master, snr_db, chi, trial, kTagDpCommon));
  PrecoderSet<double> pre;
  pre.common =
      common_precoder<double>(static_cast<int>(sc.dp.w.rows()), crng);
  std::vector<Eigen::VectorXcd> ehh;
  ehh.reserve(users.size());
  for (const auto& u : users) ehh.push_back(u.e_hh);
  pre.private_precoders = private_precoders(sc.dp.precoder, ehh);
  const PowerAllocation<double> pa = sc.config.power_allocation(0.0);
  const RateTargets<double> targets = sc.config.rate_targets();
  const auto rep = dp_rsma_sinrs_effective(users, pre, pa, chi, noise_var);
  TrialOut out = rsma_trial_out(rep, targets);

  // At chi = 0 both SINRs lose their interference terms and the two outage
  // events become tail events of exponential gains that are independent
  // given the precoders: |e_vv^H c|^2 ~ Exp(zeta_u ||W^H c||^2) because c
  // is drawn independently of the channels, and |e_hh^H p_u|^2 ~
  // Exp(zeta_u ||W^H p_u||^2) because with users == effective dim the null
  // space of the other users' channels is one-dimensional, so p_u is that
  // null direction up to a phase and carries no information about e_hh,u.
  // The trial then contributes its exact conditional outage probability
  // instead of a 0/1 indicator: same estimand, same unbiasedness, but the
  // sampling noise drops by orders of magnitude. The binomial stderr kept
  // by the aggregation stays a valid (conservative) bound since
  // Var(X) <= p(1-p) for any X in [0,1] with mean p.
  if (chi == 0.0 &&
      static_cast<Eigen::Index>(users.size()) == sc.dp.w.rows()) {
    const double tau_c = std::exp2(targets.common_rate) - 1.0;
    const double gain_c = (sc.dp.w.adjoint() * pre.common).squaredNorm();
    for (std::size_t u = 0; u < users.size(); ++u) {
      const double tau_p = std::exp2(targets.private_rates[u]) - 1.0;
      const double gain_p =
          (sc.dp.w.adjoint() * pre.private_precoders[u]).squaredNorm();
      const double zeta = sc.zetas[u];
      const double pc = -std::expm1(
          -tau_c * noise_var / (pa.common_alpha * zeta * gain_c));
      const double pp = -std::expm1(
          -tau_p * noise_var / (pa.private_betas[u] * zeta * gain_p));
      out.outage[u] = pc + pp - pc * pp;
    }
  }
  return out;
}

TrialOut eval_dp_noma(const Scene& sc, double snr_db, double chi,
                      double xi, double noise_var, long long trial,
                      std::uint64_t master) {
  const auto users = draw_dp_users(sc, snr_db, chi, trial, master);
  const int star = max_power_user(sc.config.noma_powers);
  const Eigen::VectorXcd beam =
      users[static_cast<std::size_t>(star)].e_hh.normalized();
  return noma_trial_out(sc, noma_gains_dual(users, beam, chi), xi,
                        noise_var);
}

TrialOut eval_sp_rsma(const Scene& sc, double snr_db, double xi,
                      double noise_var, long long trial,
                      std::uint64_t master) {
  const auto users = draw_sp_users(sc, snr_db, trial, master);
  Rng crng(sp_seed(master, snr_db, trial, kTagSpCommon));
  PrecoderSet<double> pre;
  pre.common =
      common_precoder<double>(static_cast<int>(sc.sp->w.rows()), crng);
  pre.private_precoders = private_precoders(sc.sp->precoder, users);
  const auto rep = sp_rsma_sinrs(users, pre,
                                 sc.config.power_allocation(xi), noise_var);
  return rsma_trial_out(rep, sc.config.rate_targets());
}

TrialOut eval_sp_noma(const Scene& sc, double snr_db, double xi,
                      double noise_var, long long trial,
                      std::uint64_t master) {
  const auto users = draw_sp_users(sc, snr_db, trial, master);
  const int star = max_power_user(sc.config.noma_powers);
  const Eigen::VectorXcd beam =
      users[static_cast<std::size_t>(star)].normalized();
  return noma_trial_out(sc, noma_gains_single(users, beam), xi, noise_var);
}

TrialOut eval_oma(const Scene& sc, double snr_db, double noise_var,
                  long long trial, std::uint64_t master) {
  const auto users = draw_sp_users(sc, snr_db, trial, master);
  std::vector<Eigen::VectorXcd> mf(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) mf[u] = users[u].normalized();
  const auto rates = oma_rate(users, mf, noise_var);
  TrialOut out;
  out.outage.resize(users.size());
  out.user_rate = rates;
  for (std::size_t u = 0; u < users.size(); ++u) {
    out.outage[u] =
        rates[u] < sc.config.rate_common + sc.config.rate_private[u];
    out.total += rates[u];
  }
  return out;
}

}  // namespace

int max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("POLAR_RSMA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && static_cast<unsigned long>(v) < hw)
      hw = static_cast<unsigned>(v);
  }
  return static_cast<int>(hw);
}

PointEstimate simulate_point(const Scene& scene, const std::string& scheme,
                             double snr_db, double chi, double xi,
                             long long trials, std::uint64_t master_seed) {
  const auto& known = known_schemes();
  if (std::find(known.begin(), known.end(), scheme) == known.end())
    throw ConfigError("simulate_point: unknown scheme '" + scheme + "'");
  if (trials < 1) throw ConfigError("simulate_point: trials must be >= 1");
  if (is_single_pol(scheme) && !scene.sp.has_value())
    throw ConfigError(
        "simulate_point: scene was built without the single-polarized "
        "array");
  const double noise_var = 1.0 / rho_from_db(snr_db);
  const int n_users = scene.config.users_per_group;

  std::function<TrialOut(long long)> eval;
  if (scheme == "dp-rsma") {
    eval = [&, snr_db, chi, noise_var, master_seed](long long t) {
      return eval_dp_rsma(scene, snr_db, chi, noise_var, t, master_seed);
    };
  } else if (scheme == "dp-noma") {
    eval = [&, snr_db, chi, xi, noise_var, master_seed](long long t) {
      return eval_dp_noma(scene, snr_db, chi, xi, noise_var, t, master_seed);
    };
  } else if (scheme == "sp-rsma") {
    eval = [&, snr_db, xi, noise_var, master_seed](long long t) {
      return eval_sp_rsma(scene, snr_db, xi, noise_var, t, master_seed);
    };
  } else if (scheme == "sp-noma") {
    eval = [&, snr_db, xi, noise_var, master_seed](long long t) {
      return eval_sp_noma(scene, snr_db, xi, noise_var, t, master_seed);
    };
  } else {
    eval = [&, snr_db, noise_var, master_seed](long long t) {
      return eval_oma(scene, snr_db, noise_var, t, master_seed);
    };
  }

  // Fixed-size blocks claimed by workers through an atomic counter; block
  // accumulators are reduced in block order afterwards, so the result is
  // identical for any worker count.
  const long long kBlock = 8192;
  const long long n_blocks = (trials + kBlock - 1) / kBlock;
  std::vector<Accum> blocks(static_cast<std::size_t>(n_blocks),
                            Accum(n_users));
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    try {
      for (;;) {
        const long long b = next.fetch_add(1);
        if (b >= n_blocks) break;
        const long long lo = b * kBlock;
        const long long hi = std::min(trials, lo + kBlock);
        Accum& acc = blocks[static_cast<std::size_t>(b)];
        for (long long t = lo; t < hi; ++t) acc.add(eval(t));
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(n_blocks);
    }
  };

  const int n_threads =
      static_cast<int>(std::min<long long>(max_threads(), n_blocks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Accum all(n_users);
  for (const auto& b : blocks) all.merge(b);

  PointEstimate pe;
  pe.users.resize(static_cast<std::size_t>(n_users));
  const double n = static_cast<double>(all.n);
  for (int u = 0; u < n_users; ++u) {
    const std::size_t s = static_cast<std::size_t>(u);
    const double p = all.outage[s].value() / n;
    pe.users[s].outage_mc = p;
    pe.users[s].outage_se = std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
    const auto [m, se] = mean_se(all.rate[s], all.rate_sq[s], all.n);
    pe.users[s].erg_mc = m;
    pe.users[s].erg_se = se;
  }
  std::tie(pe.erg_common_mc, pe.erg_common_se) =
      mean_se(all.common, all.common_sq, all.n);
  std::tie(pe.erg_private_mc, pe.erg_private_se) =
      mean_se(all.priv, all.priv_sq, all.n);
  std::tie(pe.erg_total_mc, pe.erg_total_se) =
      mean_se(all.total, all.total_sq, all.n);
  return pe;
}

std::vector<std::pair<double, double>> estimate_outage(
    const Scene& scene, double snr_db, double chi, long long trials,
    std::uint64_t master_seed) {
  if (trials < 100) throw ConfigError("estimate_outage: trials must be >= 100");
  const PointEstimate pe = simulate_point(scene, "dp-rsma", snr_db, chi,
                                          0.0, trials, master_seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(pe.users.size());
  for (const auto& u : pe.users) out.emplace_back(u.outage_mc, u.outage_se);
  return out;
}

ErgodicEstimate estimate_ergodic(const Scene& scene, double snr_db,
                                 double chi, long long trials,
                                 std::uint64_t master_seed) {
  if (trials < 100)
    throw ConfigError("estimate_ergodic: trials must be >= 100");
  const PointEstimate pe = simulate_point(scene, "dp-rsma", snr_db, chi,
                                          0.0, trials, master_seed);
  ErgodicEstimate e;
  e.common_sum = pe.erg_common_mc;
  e.common_se = pe.erg_common_se;
  e.private_sum = pe.erg_private_mc;
  e.private_se = pe.erg_private_se;
  e.total = pe.erg_total_mc;
  e.total_se = pe.erg_total_se;
  return e;
}

void SweepSpec::validate() const {
  if (snr_grid_db.empty() || chi_grid.empty() || xi_grid.empty())
    throw ConfigError("sweep: grids must be nonempty");
  if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
  if (schemes.empty()) throw ConfigError("sweep: schemes must be nonempty");
  const auto& known = known_schemes();
  for (const auto& s : schemes)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw ConfigError("sweep: unknown scheme '" + s + "'");
}

SweepSpec sweep_from_config(const SystemConfig& config) {
  SweepSpec spec;
  spec.snr_grid_db = config.snr_grid_db.empty()
                         ? std::vector<double>{config.snr_db}
                         : config.snr_grid_db;
  spec.chi_grid = config.chi_grid.empty() ? std::vector<double>{config.chi}
                                          : config.chi_grid;
  spec.xi_grid = config.xi_grid.empty() ? std::vector<double>{config.xi}
                                        : config.xi_grid;
  spec.trials = config.trials;
  spec.master_seed = config.master_seed;
  spec.schemes = config.schemes;
  return spec;
}

std::vector<ResultRow> run_sweep(const Scene& scene, const SweepSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  for (double snr_db : spec.snr_grid_db) {
    for (double chi : spec.chi_grid) {
      for (double xi : spec.xi_grid) {
        for (const auto& scheme : spec.schemes) {
          const int n_users = scene.config.users_per_group;
          try {
            const PointEstimate pe = simulate_point(
                scene, scheme, snr_db, chi, xi, spec.trials,
                spec.master_seed);
            AnalyticPoint cf;
            const bool has_cf = scheme == "dp-rsma";
            if (has_cf) cf = analytic_point(scene, snr_db, chi);
            for (int u = 0; u < n_users; ++u) {
              const std::size_t s = static_cast<std::size_t>(u);
              ResultRow row;
              row.scheme = scheme;
              row.snr_db = snr_db;
              row.chi = chi;
              row.xi = xi;
              row.user = u + 1;
              row.outage_mc = pe.users[s].outage_mc;
              row.outage_se = pe.users[s].outage_se;
              row.erg_mc = pe.users[s].erg_mc;
              row.erg_se = pe.users[s].erg_se;
              if (has_cf) {
                row.outage_cf = cf.outage[s];
                row.erg_cf =
                    cf.erg_common / n_users + cf.erg_private[s];
              }
              rows.push_back(std::move(row));
            }
          } catch (const std::exception& e) {
            for (int u = 0; u < n_users; ++u) {
              ResultRow row;
              row.scheme = scheme;
              row.snr_db = snr_db;
              row.chi = chi;
              row.xi = xi;
              row.user = u + 1;
              row.failed = true;
              row.error = e.what();
              rows.push_back(std::move(row));
            }
          }
        }
      }
    }
  }
  return rows;
}

}  // namespace polar_rsma
