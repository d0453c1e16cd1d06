#include "polar_rsma/config.hpp"

#include "polar_rsma/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>

namespace polar_rsma {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const std::string& name, int line,
                       const std::string& what) {
  std::ostringstream os;
  os << name << ":" << line << ": " << what;
  throw ConfigError(os.str());
}

double parse_double(const std::string& name, int line,
                    const std::string& tok) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail(name, line, "cannot parse '" + tok + "' as a number");
  }
  if (pos != tok.size())
    fail(name, line, "trailing characters in number '" + tok + "'");
  return v;
}

long long parse_ll(const std::string& name, int line,
                   const std::string& tok) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    fail(name, line, "cannot parse '" + tok + "' as an integer");
  }
  if (pos != tok.size())
    fail(name, line, "trailing characters in integer '" + tok + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& name, int line,
                        const std::string& tok) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception&) {
    fail(name, line, "cannot parse '" + tok + "' as an unsigned integer");
  }
  if (pos != tok.size())
    fail(name, line, "trailing characters in integer '" + tok + "'");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

SystemConfig parse_config(std::istream& in, const std::string& name,
                          SystemConfig base) {
  SystemConfig cfg = std::move(base);
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      fail(name, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(name, line, "empty key");
    if (value.empty()) fail(name, line, "empty value for key '" + key + "'");
    const auto toks = split_ws(value);
    const auto one = [&]() -> const std::string& {
      if (toks.size() != 1)
        fail(name, line, "key '" + key + "' takes a single value");
      return toks[0];
    };
    const auto doubles = [&]() {
      std::vector<double> v;
      v.reserve(toks.size());
      for (const auto& t : toks) v.push_back(parse_double(name, line, t));
      return v;
    };
    seen.insert(key);
    if (key == "m_total") {
      cfg.m_total = static_cast<int>(parse_ll(name, line, one()));
    } else if (key == "groups") {
      cfg.groups = static_cast<int>(parse_ll(name, line, one()));
    } else if (key == "users_per_group") {
      cfg.users_per_group = static_cast<int>(parse_ll(name, line, one()));
    } else if (key == "projected_dim") {
      cfg.projected_dim = static_cast<int>(parse_ll(name, line, one()));
    } else if (key == "chi") {
      cfg.chi = parse_double(name, line, one());
    } else if (key == "xi") {
      cfg.xi = parse_double(name, line, one());
    } else if (key == "snr_db") {
      cfg.snr_db = parse_double(name, line, one());
    } else if (key == "alpha") {
      cfg.alpha = parse_double(name, line, one());
    } else if (key == "betas") {
      cfg.betas = doubles();
    } else if (key == "noma_powers") {
      cfg.noma_powers = doubles();
    } else if (key == "rate_common") {
      cfg.rate_common = parse_double(name, line, one());
    } else if (key == "rate_private") {
      cfg.rate_private = doubles();
    } else if (key == "array_gain") {
      cfg.array_gain = parse_double(name, line, one());
    } else if (key == "pathloss_exp") {
      cfg.pathloss_exp = parse_double(name, line, one());
    } else if (key == "user_distances_m") {
      cfg.user_distances_m = doubles();
    } else if (key == "group_azimuths_deg") {
      cfg.group_azimuths_deg = doubles();
    } else if (key == "angular_spread_deg") {
      cfg.angular_spread_deg = parse_double(name, line, one());
    } else if (key == "antenna_spacing_wl") {
      cfg.antenna_spacing_wl = parse_double(name, line, one());
    } else if (key == "energy_threshold") {
      cfg.energy_threshold = parse_double(name, line, one());
    } else if (key == "trials") {
      cfg.trials = parse_ll(name, line, one());
    } else if (key == "master_seed") {
      cfg.master_seed = parse_u64(name, line, one());
    } else if (key == "snr_grid_db") {
      cfg.snr_grid_db = doubles();
    } else if (key == "chi_grid") {
      cfg.chi_grid = doubles();
    } else if (key == "xi_grid") {
      cfg.xi_grid = doubles();
    } else if (key == "schemes") {
      cfg.schemes = toks;
    } else {
      fail(name, line, "unknown key '" + key + "'");
    }
  }

  // Per-user lists given as one value broadcast to all users; betas left
  // unset follow the equal-split rule (1 - alpha)/U.
  const std::size_t u = static_cast<std::size_t>(cfg.users_per_group);
  const auto broadcast = [&](std::vector<double>& v) {
    if (v.size() == 1 && u > 1) v.assign(u, v[0]);
  };
  if (!seen.count("betas") && u != cfg.betas.size())
    cfg.betas.assign(u, (1.0 - cfg.alpha) / static_cast<double>(u));
  broadcast(cfg.betas);
  broadcast(cfg.rate_private);
  broadcast(cfg.user_distances_m);
  broadcast(cfg.noma_powers);

  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::string& path, SystemConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in, path, std::move(base));
}

namespace {

std::vector<double> linspace_step(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

const std::vector<std::string> kAllSchemes = {"dp-rsma", "sp-rsma",
                                              "sp-noma", "dp-noma", "oma"};

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2a", "fig2b", "fig4a",
                                                 "fig4b", "fig5a", "fig5b"};
  return names;
}

SystemConfig preset_config(const std::string& name) {
  SystemConfig c;
  c.snr_grid_db = linspace_step(0, 30, 2);
  c.xi_grid = {0.0};
  if (name == "fig2a") {
    // Outage vs SNR at chi = 0 for the reference target set.
    c.rate_common = 0.5;
    c.rate_private = {0.1, 0.5, 1.2};
    c.chi_grid = {0.0};
    c.schemes = {"dp-rsma"};
  } else if (name == "fig2b") {
    // Outage vs SNR across cross-polar leakage levels.
    c.rate_common = 0.5;
    c.rate_private = {0.1, 0.5, 1.2};
    c.chi_grid = {0.001, 0.01, 0.1};
    c.schemes = {"dp-rsma"};
  } else if (name == "fig4a") {
    // Outage sum-rate comparison vs SNR, with and without SIC residue.
    c.rate_common = 0.5;
    c.rate_private = {0.1, 1.0, 2.0};
    c.chi_grid = {0.001};
    c.xi_grid = {0.0, 0.1};
    c.schemes = kAllSchemes;
  } else if (name == "fig4b") {
    // Outage sum-rate comparison vs xi at 24 dB.
    c.rate_common = 0.5;
    c.rate_private = {0.1, 1.0, 2.0};
    c.chi_grid = {0.001};
    c.snr_grid_db = {24.0};
    c.xi_grid = {0.0, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0};
    c.schemes = kAllSchemes;
  } else if (name == "fig5a") {
    // Ergodic sum-rate vs SNR across cross-polar leakage levels.
    c.chi_grid = {0.001, 0.01, 0.1};
    c.schemes = {"dp-rsma"};
  } else if (name == "fig5b") {
    // Ergodic sum-rate comparison across schemes.
    c.chi_grid = {0.001};
    c.xi_grid = {0.0, 0.1};
    c.schemes = kAllSchemes;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw ConfigError("unknown preset '" + name + "'; known presets:" +
                      known);
  }
  c.validate();
  return c;
}

}  // namespace polar_rsma
