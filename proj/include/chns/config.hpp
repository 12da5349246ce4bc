#pragma once

#include "chns/simulation.hpp"

#include <string>

namespace chns {

// Parse a config document (sections [grid], [model], [initial], [time], [output],
// [smallness]). Unknown sections or keys are rejected; absent keys fall back to
// defaults and are listed in SimConfig::defaulted_keys. Syntax errors carry the
// line number; semantic violations name the broken constraint.
SimConfig parse_config(const std::string& text);

// Read a config file; for tabulated motility also loads the table (path resolved
// relative to the config file) and validates it.
SimConfig load_config(const std::string& path);

// Canonical document with every key explicit: parse_config(serialize_config(c))
// reproduces c.
std::string serialize_config(const SimConfig& config);

} // namespace chns
