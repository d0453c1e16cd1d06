#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polar_rsma {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Precoder orthonormality, inter-group isolation, and private null-steering
// residuals on the reference scenario (both array geometries).
SuiteResult suite_precoder_invariants(std::uint64_t seed);

// Full received-signal assembly with all groups transmitting versus the
// simplified own-group-only form, on seeded fading draws and QPSK symbols.
SuiteResult suite_signal_model(std::uint64_t seed);

// Kolmogorov-Smirnov fits of the simulated common/private signal gains
// against their Gamma laws, plus the rate-normalizer moment checks.
SuiteResult suite_distribution_fits(std::uint64_t seed);

// Closed-form outage vs the joint-PDF double-integral oracle on a random
// parameter grid (30 points, 1e-8 relative).
SuiteResult suite_closed_form_outage(std::uint64_t seed);

// Closed-form ergodic rates vs the survival-function quadrature oracle
// (20 points, 1e-6 relative).
SuiteResult suite_closed_form_ergodic(std::uint64_t seed);

std::vector<SuiteResult> run_validation(std::uint64_t seed);

}  // namespace polar_rsma
