#pragma once

#include "polar_rsma/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polar_rsma {

struct SweepSpec {
  std::vector<double> snr_grid_db;
  std::vector<double> chi_grid;
  std::vector<double> xi_grid;
  long long trials = 100000;
  std::uint64_t master_seed = 271828;
  std::vector<std::string> schemes;

  void validate() const;
};

SweepSpec sweep_from_config(const SystemConfig& config);

// outage_mc averages one outage contribution per trial: the 0/1 indicator
// for the baselines and for dp-rsma with cross-polar leakage, or the exact
// conditional outage probability given the trial's precoders for dp-rsma at
// chi = 0 (unbiased for the same quantity, far lower variance). outage_se
// is the binomial bound sqrt(p(1-p)/trials), conservative in the latter
// case.
struct UserEstimate {
  double outage_mc = 0, outage_se = 0;
  double erg_mc = 0, erg_se = 0;
};

struct PointEstimate {
  std::vector<UserEstimate> users;
  double erg_common_mc = 0, erg_common_se = 0;  // group common sum (RSMA)
  double erg_private_mc = 0, erg_private_se = 0;
  double erg_total_mc = 0, erg_total_se = 0;
};

// Runs `trials` independent fading draws of one scheme at one grid point.
// Deterministic in (scene, scheme, point, trials, master_seed): substream
// seeds derive from the point identity and trial index, never from
// enumeration order or thread count. POLAR_RSMA_THREADS caps parallelism.
PointEstimate simulate_point(const Scene& scene, const std::string& scheme,
                             double snr_db, double chi, double xi,
                             long long trials, std::uint64_t master_seed);

// Per-user (outage estimate, stderr) of the proposed scheme.
std::vector<std::pair<double, double>> estimate_outage(
    const Scene& scene, double snr_db, double chi, long long trials,
    std::uint64_t master_seed);

struct ErgodicEstimate {
  double common_sum = 0, common_se = 0;
  double private_sum = 0, private_se = 0;
  double total = 0, total_se = 0;
};

ErgodicEstimate estimate_ergodic(const Scene& scene, double snr_db,
                                 double chi, long long trials,
                                 std::uint64_t master_seed);

struct ResultRow {
  std::string scheme;
  double snr_db = 0, chi = 0, xi = 0;
  int user = 0;  // 1-based
  double outage_mc = 0, outage_se = 0;
  double erg_mc = 0, erg_se = 0;
  std::optional<double> outage_cf;  // closed forms: dp-rsma rows only
  std::optional<double> erg_cf;
  bool failed = false;
  std::string error;
};

// Cartesian product of (snr, chi, xi, scheme); per-point failures are
// recorded in their rows and the sweep continues.
std::vector<ResultRow> run_sweep(const Scene& scene, const SweepSpec& spec);

int max_threads();

}  // namespace polar_rsma
