#pragma once

#include "polar_rsma/montecarlo.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace polar_rsma {

// Shortest representation with 9 significant digits ("%.9g"); byte-stable
// across runs.
std::string format_sig9(double x);

// Fixed schema: scheme, snr_db, chi, xi, user, outage_mc, outage_se,
// outage_cf, erg_mc, erg_se, erg_cf. Closed-form columns are empty for
// baseline schemes; the six estimate fields are empty on failed rows.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace polar_rsma
