#pragma once

#include "polar_rsma/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace polar_rsma {

// Flat "key = value" text format; '#' starts a comment, lists are
// whitespace-separated. Unset keys keep the values of `base` (the
// reference-setup defaults unless a preset was applied first).
SystemConfig parse_config(std::istream& in, const std::string& name,
                          SystemConfig base = SystemConfig{});

SystemConfig load_config(const std::string& path,
                         SystemConfig base = SystemConfig{});

// Named experiment presets matching the reported figures.
SystemConfig preset_config(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace polar_rsma
