#pragma once

#include <string>

#include "config.hpp"
#include "expanse/pseudogroup.hpp"
#include "json.hpp"

namespace expanse::app {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kCounterexample = 2,
  kConstructionFailure = 3,
};

struct RunOutcome {
  int exit_code = kOk;
  std::string message;   // one line for stderr; empty on success
  std::string error_key;  // config key behind a config error, if known
  nlohmann::json report;  // null for config errors
  std::string csv;
  std::string svg;
};

std::string version_string();

// A shipped name (string) or {"name", "generators": [{"type": "affine", "a",
// "b", "domain": [lo, hi], "name"}], "transversal": [[lo, hi], ...]}.
// Inverses are added automatically. Throws ConfigError.
PseudoGroupSpec pseudogroup_from_json(const nlohmann::json& j);

// Runs one validated experiment in process. Never throws for library or
// config failures; they become exit codes with a message.
RunOutcome run(const ExperimentConfig& cfg);

// Writes <out>/<command>.json, .csv and, when requested, .svg.
void write_artifacts(const RunOutcome& outcome, const ExperimentConfig& cfg);

}  // namespace expanse::app
