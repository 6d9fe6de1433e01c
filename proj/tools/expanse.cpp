// Command-line front end: one experiment per invocation.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "app/config.hpp"
#include "app/run.hpp"

namespace {

using expanse::app::ConfigError;
using expanse::app::ExperimentConfig;

// Flag values land here first and are copied over the config file only when
// given, so inline flags win.
struct Flags {
  std::string config;
  std::string action;
  std::string pseudogroup;
  std::vector<double> epsilons;
  int n_max = 0;
  int tail_window = 0;
  double delta = 0.0;
  double e = 0.0;
  int grid = 0;
  std::size_t pairs = 0;
  double min_distance = 0.0;
  double max_distance = 0.0;
  std::uint64_t seed = 0;
  int depth = 0;
  int N = 0;
  std::vector<double> seed_start;
  std::vector<double> seed_lift;
  int seed_samples = 0;
  std::vector<double> seed_interval;
  std::string psi;
  std::string psi_prime;
  int threads = 0;
  std::string out;
  bool svg = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON experiment config");
  sub->add_option("--action", f.action, "example_31, example_32, cat, rotation:<a>, ...");
  sub->add_option("--pseudogroup", f.pseudogroup,
                  "shipped pseudo-group name or inline JSON definition");
  sub->add_option("--epsilons", f.epsilons, "strictly descending scales")->delimiter(',');
  sub->add_option("--n-max,--n_max", f.n_max, "largest word length");
  sub->add_option("--tail-window,--tail_window", f.tail_window, "regression window");
  sub->add_option("--delta", f.delta, "pair distance floor / split diameter");
  sub->add_option("--e", f.e, "separation threshold");
  sub->add_option("--grid", f.grid, "sample grid resolution");
  sub->add_option("--pairs", f.pairs, "number of random pairs");
  sub->add_option("--min-distance,--min_distance", f.min_distance, "random pair distance floor");
  sub->add_option("--max-distance,--max_distance", f.max_distance, "random pair distance cap");
  sub->add_option("--seed", f.seed, "random pair seed");
  sub->add_option("--depth", f.depth, "doubling depth");
  sub->add_option("-N,--N", f.N, "doubling word length bound");
  sub->add_option("--seed-start,--seed_start", f.seed_start, "seed arc start")->delimiter(',');
  sub->add_option("--seed-lift,--seed_lift", f.seed_lift, "seed arc lift")->delimiter(',');
  sub->add_option("--seed-samples,--seed_samples", f.seed_samples, "seed arc samples");
  sub->add_option("--seed-interval,--seed_interval", f.seed_interval,
                  "pseudo-group seed interval lo,hi")->delimiter(',');
  sub->add_option("--psi", f.psi, "centralizer candidate: self, trivial, endo:<words>");
  sub->add_option("--psi-prime,--psi_prime", f.psi_prime, "second centralizer candidate");
  sub->add_option("--threads", f.threads, "worker threads (default EXPANSE_THREADS or 1)");
  sub->add_option("--out", f.out, "output directory");
  sub->add_flag("--svg", f.svg, "also write an SVG plot");
}

void apply_flags(CLI::App* sub, const Flags& f, ExperimentConfig& cfg) {
  auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
  if (given("--action")) cfg.action = f.action;
  if (given("--pseudogroup")) {
    const auto& p = f.pseudogroup;
    if (!p.empty() && p.front() == '{') {
      try {
        cfg.pseudogroup = nlohmann::json::parse(p);
      } catch (const nlohmann::json::parse_error&) {
        throw ConfigError("pseudogroup", "--pseudogroup is not valid JSON");
      }
    } else {
      cfg.pseudogroup = p;
    }
  }
  if (given("--epsilons")) cfg.epsilons = f.epsilons;
  if (given("--n-max")) cfg.n_max = f.n_max;
  if (given("--tail-window")) cfg.tail_window = f.tail_window;
  if (given("--delta")) cfg.delta = f.delta;
  if (given("--e")) cfg.e = f.e;
  if (given("--grid")) cfg.grid = f.grid;
  if (given("--pairs")) cfg.pairs = f.pairs;
  if (given("--min-distance")) cfg.min_distance = f.min_distance;
  if (given("--max-distance")) cfg.max_distance = f.max_distance;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--depth")) cfg.depth = f.depth;
  if (given("--N")) cfg.N = f.N;
  if (given("--seed-start")) cfg.seed_start = f.seed_start;
  if (given("--seed-lift")) cfg.seed_lift = f.seed_lift;
  if (given("--seed-samples")) cfg.seed_samples = f.seed_samples;
  if (given("--seed-interval")) cfg.seed_interval = f.seed_interval;
  if (given("--psi")) cfg.psi = f.psi;
  if (given("--psi-prime")) cfg.psi_prime = f.psi_prime;
  if (given("--out")) cfg.out = f.out;
  if (given("--svg")) cfg.svg = f.svg;
  if (given("--threads")) {
    cfg.threads = f.threads;
  } else if (auto env = expanse::app::threads_from_env()) {
    cfg.threads = *env;
  }
}

const char* describe(const std::string& command) {
  if (command == "entropy") return "separated-set counts S(n, eps) and the growth-rate estimate";
  if (command == "pg-entropy") return "the same on the transversal of a pseudo-group";
  if (command == "expansivity") return "minimal separating radius of every sampled pair";
  if (command == "uniform-bound") return "largest radius needed by pairs at distance >= delta";
  if (command == "doubling") return "2^depth separated points from a seed arc or interval";
  return "separation witness between two centralizer candidates";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separated sets, entropy and expansiveness of group actions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", expanse::app::version_string());
  Flags flags;
  std::vector<CLI::App*> subs;
  for (const char* name : expanse::app::kCommands) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    add_flags(sub, flags);
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return expanse::app::kConfigError;
  }
  CLI::App* sub = nullptr;
  for (CLI::App* s : subs) {
    if (s->parsed()) sub = s;
  }

  ExperimentConfig cfg;
  std::string text;
  try {
    if (!flags.config.empty()) text = expanse::app::load_config_file(cfg, flags.config);
    cfg.command = sub->get_name();
    apply_flags(sub, flags, cfg);
    expanse::app::validate(cfg);
  } catch (const ConfigError& ex) {
    const int line = expanse::app::line_of_key(text, ex.key());
    if (line > 0) {
      std::cerr << flags.config << ":" << line << ": " << ex.what() << "\n";
    } else {
      std::cerr << "expanse: " << ex.what() << "\n";
    }
    return expanse::app::kConfigError;
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return expanse::app::kConfigError;
  }

  const auto outcome = expanse::app::run(cfg);
  if (!outcome.message.empty()) {
    const int line = expanse::app::line_of_key(text, outcome.error_key);
    if (outcome.exit_code == expanse::app::kConfigError && line > 0) {
      std::cerr << flags.config << ":" << line << ": " << outcome.message << "\n";
    } else {
      std::cerr << "expanse " << cfg.command << ": " << outcome.message << "\n";
    }
  }
  try {
    expanse::app::write_artifacts(outcome, cfg);
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return expanse::app::kConfigError;
  }
  if (outcome.exit_code == expanse::app::kOk || outcome.exit_code == expanse::app::kCounterexample) {
    std::cout << cfg.out << "/" << cfg.command << ".json\n";
  }
  return outcome.exit_code;
}
