#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace expanse::app {

using nlohmann::json;

json ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  j["action"] = action;
  j["pseudogroup"] = pseudogroup;
  j["epsilons"] = epsilons;
  j["n_max"] = n_max;
  j["tail_window"] = tail_window;
  j["delta"] = delta;
  j["e"] = e;
  j["grid"] = grid;
  j["pairs"] = pairs;
  j["min_distance"] = pair_min_distance();
  j["max_distance"] = max_distance;
  j["seed"] = seed;
  j["depth"] = depth;
  j["N"] = N ? json(*N) : json(nullptr);
  j["seed_start"] = seed_start;
  j["seed_lift"] = seed_lift;
  j["seed_samples"] = seed_samples;
  j["seed_interval"] = seed_interval;
  j["psi"] = psi;
  j["psi_prime"] = psi_prime;
  j["svg"] = svg;
  // Thread count and output directory do not change results, so they stay
  // out of the reports to keep them byte-identical across machines.
  return j;
}

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "key '" + key + "' has the wrong type");
  }
}

}  // namespace

void apply_json(ExperimentConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") cfg.command = get_as<std::string>(v, key);
    else if (key == "action") cfg.action = get_as<std::string>(v, key);
    else if (key == "pseudogroup") {
      if (!v.is_string() && !v.is_object() && !v.is_null()) {
        throw ConfigError(key, "pseudogroup must be a name or an object");
      }
      cfg.pseudogroup = v;
    }
    else if (key == "epsilons") cfg.epsilons = get_as<std::vector<double>>(v, key);
    else if (key == "n_max") cfg.n_max = get_as<int>(v, key);
    else if (key == "tail_window") cfg.tail_window = get_as<int>(v, key);
    else if (key == "delta") cfg.delta = get_as<double>(v, key);
    else if (key == "e") cfg.e = get_as<double>(v, key);
    else if (key == "grid") cfg.grid = get_as<int>(v, key);
    else if (key == "pairs") {
      if (!v.is_number_unsigned()) throw ConfigError(key, "pairs must be a non-negative integer");
      cfg.pairs = v.get<std::size_t>();
    }
    else if (key == "min_distance") cfg.min_distance = get_as<double>(v, key);
    else if (key == "max_distance") cfg.max_distance = get_as<double>(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(key, "seed must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    }
    else if (key == "depth") cfg.depth = get_as<int>(v, key);
    else if (key == "N") {
      if (v.is_null()) cfg.N.reset();
      else cfg.N = get_as<int>(v, key);
    }
    else if (key == "seed_start") cfg.seed_start = get_as<std::vector<double>>(v, key);
    else if (key == "seed_lift") cfg.seed_lift = get_as<std::vector<double>>(v, key);
    else if (key == "seed_samples") cfg.seed_samples = get_as<int>(v, key);
    else if (key == "seed_interval") cfg.seed_interval = get_as<std::vector<double>>(v, key);
    else if (key == "psi") cfg.psi = get_as<std::string>(v, key);
    else if (key == "psi_prime") cfg.psi_prime = get_as<std::string>(v, key);
    else if (key == "threads") cfg.threads = get_as<int>(v, key);
    else if (key == "out") cfg.out = get_as<std::string>(v, key);
    else if (key == "svg") cfg.svg = get_as<bool>(v, key);
    else throw ConfigError(key, "unknown key '" + key + "'");
  }
}

void validate(const ExperimentConfig& cfg) {
  const auto& c = cfg.command;
  if (std::find(std::begin(kCommands), std::end(kCommands), c) == std::end(kCommands)) {
    throw ConfigError("command", "unknown command '" + c + "'");
  }
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(key, std::string(key) + " must be positive");
  };
  if (cfg.n_max < 0) throw ConfigError("n_max", "n_max must be non-negative");
  if (cfg.threads < 1) throw ConfigError("threads", "threads must be at least 1");
  if (cfg.grid < 0) throw ConfigError("grid", "grid must be non-negative");
  positive(cfg.delta, "delta");
  positive(cfg.e, "e");
  positive(cfg.max_distance, "max_distance");
  if (cfg.min_distance) positive(*cfg.min_distance, "min_distance");
  if (c == "entropy" || c == "pg-entropy") {
    if (cfg.epsilons.empty()) throw ConfigError("epsilons", "epsilons must not be empty");
    for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
      positive(cfg.epsilons[k], "epsilons");
      if (k > 0 && !(cfg.epsilons[k] < cfg.epsilons[k - 1])) {
        throw ConfigError("epsilons", "epsilons must be strictly descending");
      }
    }
    if (cfg.tail_window < 2) throw ConfigError("tail_window", "tail_window must be at least 2");
    if (cfg.tail_window > cfg.n_max) {
      throw ConfigError("tail_window", "tail_window must not exceed n_max");
    }
    if (cfg.grid < 2) throw ConfigError("grid", "grid must be at least 2");
  }
  if (c == "pg-entropy" && !cfg.uses_pseudogroup()) {
    throw ConfigError("pseudogroup", "pg-entropy needs a pseudogroup");
  }
  if (c == "expansivity" || c == "uniform-bound") {
    if (cfg.grid == 1) throw ConfigError("grid", "grid must be 0 or at least 2");
    if (cfg.pairs > 0 && cfg.pair_min_distance() > cfg.max_distance) {
      throw ConfigError("max_distance", "max_distance must be at least min_distance");
    }
    if (cfg.max_distance > 0.5) throw ConfigError("max_distance", "max_distance must be at most 0.5");
  }
  if (c == "doubling") {
    if (cfg.depth < 0 || cfg.depth > 20) throw ConfigError("depth", "depth must lie in 0..20");
    if (cfg.N && *cfg.N < 0) throw ConfigError("N", "N must be non-negative");
    if (cfg.seed_samples < 64) throw ConfigError("seed_samples", "seed_samples must be at least 64");
    if (cfg.seed_start.empty() || cfg.seed_start.size() > 2) {
      throw ConfigError("seed_start", "seed_start needs one or two coordinates");
    }
    if (cfg.seed_lift.empty() || cfg.seed_lift.size() > 2) {
      throw ConfigError("seed_lift", "seed_lift needs one or two coordinates");
    }
    if (cfg.seed_interval.size() != 2 || !(cfg.seed_interval[0] < cfg.seed_interval[1])) {
      throw ConfigError("seed_interval", "seed_interval must be [lo, hi] with lo < hi");
    }
  }
  if (c == "centralizer" && cfg.grid < 2) throw ConfigError("grid", "grid must be at least 2");
}

int line_of_key(const std::string& text, const std::string& key) {
  if (key.empty()) return 0;
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

std::string load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ":0: cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    const auto upto = std::min<std::size_t>(ex.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw std::runtime_error(path + ":" + std::to_string(line) + ": malformed JSON");
  }
  try {
    apply_json(cfg, j);
  } catch (const ConfigError& ex) {
    throw std::runtime_error(path + ":" + std::to_string(std::max(1, line_of_key(text, ex.key()))) +
                             ": " + ex.what());
  }
  return text;
}

std::optional<int> threads_from_env() {
  const char* v = std::getenv("EXPANSE_THREADS");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) {
    throw ConfigError("threads", "EXPANSE_THREADS must be a positive integer");
  }
  return static_cast<int>(n);
}

}  // namespace expanse::app
