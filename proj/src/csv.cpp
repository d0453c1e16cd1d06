#include "polar_rsma/csv.hpp"

#include <cstdio>
#include <ostream>

namespace polar_rsma {

std::string format_sig9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "scheme, snr_db, chi, xi, user, outage_mc, outage_se, outage_cf, "
         "erg_mc, erg_se, erg_cf\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << format_sig9(r.snr_db) << ','
        << format_sig9(r.chi) << ',' << format_sig9(r.xi) << ',' << r.user
        << ',';
    if (!r.failed) {
      out << format_sig9(r.outage_mc) << ',' << format_sig9(r.outage_se)
          << ',';
      if (r.outage_cf) out << format_sig9(*r.outage_cf);
      out << ',' << format_sig9(r.erg_mc) << ',' << format_sig9(r.erg_se)
          << ',';
      if (r.erg_cf) out << format_sig9(*r.erg_cf);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
}

}  // namespace polar_rsma
