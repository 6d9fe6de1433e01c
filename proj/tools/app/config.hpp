#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace expanse::app {

// A config problem reported as "<where>:<line>: <message>" (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }
 private:
  std::string key_;
};

inline const char* const kCommands[] = {"entropy",  "pg-entropy", "expansivity",
                                        "uniform-bound", "doubling", "centralizer"};

struct ExperimentConfig {
  std::string command;
  std::string action = "example_32";
  // A shipped pseudo-group name or an inline definition; null when unused.
  nlohmann::json pseudogroup;

  std::vector<double> epsilons{0.2, 0.1, 0.05};
  int n_max = 10;
  int tail_window = 4;
  double delta = 0.04;
  double e = 0.04;
  int grid = 100;  // sample grid resolution, 0 disables grid samples

  std::size_t pairs = 0;  // random pairs (expansivity, uniform-bound)
  std::optional<double> min_distance;  // defaults to delta
  double max_distance = 0.5;
  std::uint64_t seed = 1;

  int depth = 3;
  std::optional<int> N;  // doubling; found by a uniform-bound scan if absent
  std::vector<double> seed_start{0.0, 0.0};
  std::vector<double> seed_lift{0.5, 0.0};
  int seed_samples = 64;
  std::vector<double> seed_interval{0.2, 0.3};  // pseudo-group doubling

  std::string psi = "self";
  std::string psi_prime = "trivial";

  int threads = 1;
  std::string out = ".";
  bool svg = false;

  bool uses_pseudogroup() const { return !pseudogroup.is_null(); }
  double pair_min_distance() const { return min_distance.value_or(delta); }
  // Every field, as the reports embed it.
  nlohmann::json to_json() const;
};

// Applies the keys of a parsed config object; unknown keys and type errors
// raise ConfigError naming the key.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);

// Range and consistency checks for cfg.command.
void validate(const ExperimentConfig& cfg);

// Reads and applies a JSON config file and returns its text. Errors carry
// "path:line:" and are thrown as std::runtime_error.
std::string load_config_file(ExperimentConfig& cfg, const std::string& path);

// Line of the first occurrence of "key" in text (1-based), 0 if absent.
int line_of_key(const std::string& text, const std::string& key);

// EXPANSE_THREADS, if set; ConfigError if it is not a positive integer.
std::optional<int> threads_from_env();

}  // namespace expanse::app
