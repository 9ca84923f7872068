#pragma once

#include <string>

#include "windward/evaluator.hpp"

// Scenario config files: a JSON object whose keys mirror the Scenario
// struct one to one. Unknown keys are rejected so typos fail loudly, and
// serialization preserves key order so a resolved-config echo is stable
// byte for byte.

namespace windward {

/// Parse a scenario from JSON text. Throws ConfigError on malformed JSON,
/// unknown keys, or out-of-range values.
Scenario parse_scenario_json(const std::string& text);

/// Read and parse a scenario file. Throws ConfigError when unreadable.
Scenario load_scenario_file(const std::string& path);

/// The fully-resolved scenario as pretty-printed JSON (the config echo).
std::string scenario_to_json(const Scenario& scenario);

}  // namespace windward
