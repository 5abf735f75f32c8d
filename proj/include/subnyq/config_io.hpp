#pragma once

#include <string>
#include <string_view>

#include "subnyq/evaluation.hpp"

namespace subnyq {

// Parses the `key = value` experiment config format: one assignment per
// line, `#` starts a comment, lists are comma separated, keys are the
// ExperimentConfig field names. Unset keys keep their defaults. Throws
// std::runtime_error naming the offending key.
ExperimentConfig parse_experiment_config(std::string_view text);

// Reads and parses a config file; errors name the path or key.
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace subnyq
