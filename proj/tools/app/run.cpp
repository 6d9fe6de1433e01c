#include "run.hpp"

#include <filesystem>
#include <fstream>

#include "expanse/action_zoo.hpp"
#include "expanse/centralizer_lab.hpp"
#include "expanse/errors.hpp"
#include "expanse/expansivity.hpp"
#include "expanse/separation_entropy.hpp"
#include "report.hpp"

#ifndef EXPANSE_VERSION
#define EXPANSE_VERSION "0.0.0"
#endif

namespace expanse::app {

using nlohmann::json;

std::string version_string() { return std::string("expanse ") + EXPANSE_VERSION; }

PseudoGroupSpec pseudogroup_from_json(const json& j) {
  if (j.is_string()) {
    try {
      return make_pseudogroup_spec(j.get<std::string>());
    } catch (const MalformedInput& ex) {
      throw ConfigError("pseudogroup", ex.what());
    }
  }
  if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array() ||
      j["generators"].empty()) {
    throw ConfigError("pseudogroup", "pseudogroup needs a non-empty generators array");
  }
  auto interval = [](const json& d, const char* key) {
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number()) {
      throw ConfigError(key, std::string(key) + " must be [lo, hi]");
    }
    return Interval{d[0].get<double>(), d[1].get<double>()};
  };
  std::vector<NamedMap> maps;
  for (const json& g : j["generators"]) {
    if (!g.is_object()) throw ConfigError("generators", "generators must be objects");
    const std::string type = g.value("type", "affine");
    const Interval dom = interval(g.value("domain", json()), "domain");
    NamedMap m;
    m.name = g.value("name", "g" + std::to_string(maps.size()));
    if (type == "affine") {
      if (!g.contains("a") || !g["a"].is_number()) {
        throw ConfigError("a", "affine generator needs a numeric 'a'");
      }
      const double a = g["a"].get<double>();
      const double b = g.contains("b") && g["b"].is_number() ? g["b"].get<double>() : 0.0;
      m.pieces.push_back({dom, Chain(Branch{Branch::Kind::affine, a, b})});
    } else if (type == "square") {
      m.pieces.push_back({dom, Chain(Branch{Branch::Kind::square})});
    } else if (type == "sqrt") {
      m.pieces.push_back({dom, Chain(Branch{Branch::Kind::sqrt})});
    } else {
      throw ConfigError("type", "unknown generator type '" + type + "'");
    }
    maps.push_back(std::move(m));
  }
  std::vector<Interval> transversal{Interval{0.0, 1.0}};
  if (j.contains("transversal")) {
    transversal.clear();
    if (!j["transversal"].is_array()) {
      throw ConfigError("transversal", "transversal must be a list of [lo, hi]");
    }
    for (const json& t : j["transversal"]) transversal.push_back(interval(t, "transversal"));
  }
  try {
    return make_pseudogroup(j.value("name", "custom"), std::move(maps), std::move(transversal));
  } catch (const Error& ex) {
    throw ConfigError("generators", ex.what());
  }
}

namespace {

// Grid pairs at distance >= min_distance plus antithetic random pairs.
std::vector<PointPair> collect_pairs(const ExperimentConfig& cfg, const Space& space) {
  std::vector<PointPair> pairs;
  if (cfg.grid >= 2) pairs = grid_pairs(space, cfg.grid, cfg.pair_min_distance());
  if (cfg.pairs > 0) {
    const auto extra = random_pairs(space, cfg.pairs, cfg.pair_min_distance(),
                                    cfg.max_distance, cfg.seed);
    pairs.insert(pairs.end(), extra.begin(), extra.end());
  }
  return pairs;
}

Action candidate_action(const std::string& spec, const Action& phi) {
  if (spec == "self") return phi;
  if (spec == "trivial") return trivial_action(phi.group(), phi.space());
  if (spec.rfind("endo:", 0) == 0) {
    std::vector<Word> sigma;
    std::string rest = spec.substr(5);
    std::size_t start = 0;
    while (true) {
      const auto semi = rest.find(';', start);
      sigma.push_back(parse_word(phi.group(), rest.substr(start, semi - start)));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    return endomorphism_action(phi, sigma);
  }
  throw ConfigError("psi", "unknown candidate '" + spec +
                               "' (expected self, trivial or endo:<word>;...)");
}

json base_report(const ExperimentConfig& cfg) {
  json j;
  j["tool"] = version_string();
  j["command"] = cfg.command;
  j["config"] = cfg.to_json();
  j["seed"] = cfg.seed;
  return j;
}

RunOutcome run_entropy(const ExperimentConfig& cfg) {
  RunOutcome out;
  const Action action = make_action(cfg.action);
  const auto samples = sample_grid(action.space(), cfg.grid);
  const EntropyReport r = entropy_estimate(action, samples, cfg.epsilons, cfg.n_max,
                                           cfg.tail_window, cfg.threads);
  out.report = base_report(cfg);
  out.report["action"] = action.name();
  out.report["space"] = action.space().name();
  out.report["result"] = entropy_json(r);
  out.csv = entropy_csv(r);
  if (cfg.svg) out.svg = entropy_svg(r, action.name());
  return out;
}

RunOutcome run_pg_entropy(const ExperimentConfig& cfg) {
  RunOutcome out;
  const PseudoGroupSpec spec = pseudogroup_from_json(cfg.pseudogroup);
  const auto samples = pg_sample_grid(cfg.grid);
  const EntropyReport r = pg_entropy_estimate(spec, samples, cfg.epsilons, cfg.n_max,
                                              cfg.tail_window, cfg.threads);
  out.report = base_report(cfg);
  out.report["pseudogroup"] = spec.name;
  out.report["generators"] = spec.generator_names;
  out.report["result"] = entropy_json(r);
  out.csv = entropy_csv(r);
  if (cfg.svg) out.svg = entropy_svg(r, spec.name);
  return out;
}

RunOutcome run_expansivity(const ExperimentConfig& cfg) {
  RunOutcome out;
  const Action action = make_action(cfg.action);
  const auto pairs = collect_pairs(cfg, action.space());
  const ScanReport r =
      expansivity_scan(action, pairs, cfg.e, cfg.n_max, ScanOptions{cfg.threads, {}});
  out.report = base_report(cfg);
  out.report["action"] = action.name();
  out.report["result"] = scan_json(r, action.space());
  out.report["fully_separated"] = r.fully_separated();
  out.csv = scan_csv(r, pairs, action.space());
  if (!r.fully_separated()) {
    out.exit_code = kCounterexample;
    out.message = "pair " + std::to_string(*r.worst_index) +
                  " has no separating word within n_max";
  }
  return out;
}

RunOutcome run_uniform_bound(const ExperimentConfig& cfg) {
  RunOutcome out;
  out.report = base_report(cfg);
  std::optional<int> bound;
  if (cfg.uses_pseudogroup()) {
    const PseudoGroupSpec spec = pseudogroup_from_json(cfg.pseudogroup);
    auto pairs = pg_grid_pairs(spec, std::max(cfg.grid, 2), cfg.pair_min_distance());
    const auto shifted = pg_shifted_pairs(spec, std::max(cfg.grid, 2), cfg.pair_min_distance());
    pairs.insert(pairs.end(), shifted.begin(), shifted.end());
    bound = pg_uniform_bound(spec, cfg.delta, cfg.e, pairs, cfg.n_max, cfg.threads);
    out.report["pseudogroup"] = spec.name;
    json res;
    res["delta"] = cfg.delta;
    res["e"] = cfg.e;
    res["n_max"] = cfg.n_max;
    res["pairs_sampled"] = pairs.size();
    res["N"] = bound ? json(*bound) : json("unbounded within n_max");
    out.report["result"] = res;
    out.csv = "delta,e,n_max,N\n" + format_real(cfg.delta) + "," + format_real(cfg.e) +
              "," + std::to_string(cfg.n_max) + "," +
              (bound ? std::to_string(*bound) : std::string("unbounded")) + "\n";
  } else {
    const Action action = make_action(cfg.action);
    const auto all = collect_pairs(cfg, action.space());
    std::vector<PointPair> pairs;
    for (const PointPair& p : all) {
      if (at_least(distance(action.space(), p.x, p.y), cfg.delta)) pairs.push_back(p);
    }
    const ScanReport r =
        expansivity_scan(action, pairs, cfg.e, cfg.n_max, ScanOptions{cfg.threads, {}});
    bound = r.n_observed;
    out.report["action"] = action.name();
    json res = scan_json(r, action.space());
    res["delta"] = cfg.delta;
    res["pairs_sampled"] = all.size();
    res["N"] = bound ? json(*bound) : json("unbounded within n_max");
    out.report["result"] = res;
    out.csv = scan_csv(r, pairs, action.space());
  }
  if (!bound) {
    out.exit_code = kCounterexample;
    out.message = "unbounded within n_max";
  }
  return out;
}

RunOutcome run_doubling(const ExperimentConfig& cfg) {
  RunOutcome out;
  out.report = base_report(cfg);
  std::optional<int> N = cfg.N;
  const std::string source = N ? "config" : "uniform-bound";
  // Splitting an image into two pieces of diameter delta needs its ends
  // pushed at least 2 delta apart, so the automatic bound is taken at that
  // threshold whenever it exceeds the separation threshold.
  double bound_threshold = 0.0;
  SeparatedFamily fam;
  int dim = 0;
  if (cfg.uses_pseudogroup()) {
    const PseudoGroupSpec spec = pseudogroup_from_json(cfg.pseudogroup);
    out.report["pseudogroup"] = spec.name;
    if (!N) {
      auto pairs = pg_grid_pairs(spec, std::max(cfg.grid, 2), cfg.delta);
      const auto shifted = pg_shifted_pairs(spec, std::max(cfg.grid, 2), cfg.delta);
      pairs.insert(pairs.end(), shifted.begin(), shifted.end());
      bound_threshold = std::max(cfg.e / 2.0, 2.0 * cfg.delta);
      N = pg_uniform_bound(spec, cfg.delta, bound_threshold, pairs, cfg.n_max, cfg.threads);
    }
    if (N) {
      fam = pg_doubling(spec, Interval{cfg.seed_interval[0], cfg.seed_interval[1]},
                        cfg.delta, cfg.e, *N, cfg.depth, cfg.threads);
    }
  } else {
    const Action action = make_action(cfg.action);
    out.report["action"] = action.name();
    dim = action.space().dim();
    if (!N) {
      ExperimentConfig scan = cfg;
      scan.min_distance = cfg.delta;
      std::vector<PointPair> pairs;
      for (const PointPair& p : collect_pairs(scan, action.space())) {
        if (at_least(distance(action.space(), p.x, p.y), cfg.delta)) pairs.push_back(p);
      }
      bound_threshold = std::max(cfg.e, 2.0 * cfg.delta);
      N = uniform_bound(action, cfg.delta, bound_threshold, pairs, cfg.n_max,
                        ScanOptions{cfg.threads, {}});
    }
    if (N) {
      const Vec2 start{cfg.seed_start[0], cfg.seed_start.size() > 1 ? cfg.seed_start[1] : 0.0};
      const Vec2 lift{cfg.seed_lift[0], cfg.seed_lift.size() > 1 ? cfg.seed_lift[1] : 0.0};
      const Arc seed = Arc::make(action.space(), wrap(action.space(), start),
                                 action.space().dim() == 1 ? Vec2{lift[0], 0.0} : lift,
                                 cfg.seed_samples);
      fam = doubling_lower_bound(action, seed, cfg.delta, cfg.e, *N, cfg.depth,
                                 DoublingOptions{cfg.threads, {}});
    }
  }
  if (!N) {
    out.exit_code = kConstructionFailure;
    out.message = "no uniform bound within n_max; pass N explicitly";
    out.report["result"] = {{"N", "unbounded within n_max"}, {"N_source", source}};
    return out;
  }
  json res = family_json(fam, dim);
  res["N_source"] = source;
  if (!cfg.N) res["N_threshold"] = bound_threshold;
  out.report["result"] = res;
  out.csv = family_csv(fam);
  if (!fam.verified()) {
    out.exit_code = kConstructionFailure;
    out.message = "verification failed: " + std::to_string(fam.pairs_verified) + " of " +
                  std::to_string(fam.pairs_checked) + " pairs separated";
  }
  return out;
}

RunOutcome run_centralizer(const ExperimentConfig& cfg) {
  RunOutcome out;
  const Action phi = make_action(cfg.action);
  const Action psi = candidate_action(cfg.psi, phi);
  const Action psi_prime = candidate_action(cfg.psi_prime, phi);
  const auto samples = sample_grid(phi.space(), cfg.grid);
  const DiscretenessResult r = discreteness_witness(
      phi, psi, psi_prime, cfg.e, cfg.n_max, samples, WitnessOptions{cfg.threads, {}});
  out.report = base_report(cfg);
  out.report["action"] = phi.name();
  out.report["psi"] = psi.name();
  out.report["psi_prime"] = psi_prime.name();
  out.report["result"] = discreteness_json(r, phi.space());
  out.report["result"]["sample_grid"] = cfg.grid;
  out.csv = discreteness_csv(r);
  if (r.status == WitnessStatus::no_witness) {
    out.exit_code = kCounterexample;
    out.message = "no witness within n_max";
  }
  return out;
}

RunOutcome failure(int code, const std::string& message, const ExperimentConfig& cfg) {
  RunOutcome out;
  out.exit_code = code;
  out.message = message;
  if (code != kConfigError) {
    out.report = base_report(cfg);
    out.report["error"] = message;
  }
  return out;
}

}  // namespace

RunOutcome run(const ExperimentConfig& cfg) {
  try {
    validate(cfg);
    const std::string& c = cfg.command;
    if (c == "entropy") return run_entropy(cfg);
    if (c == "pg-entropy") return run_pg_entropy(cfg);
    if (c == "expansivity") return run_expansivity(cfg);
    if (c == "uniform-bound") return run_uniform_bound(cfg);
    if (c == "doubling") return run_doubling(cfg);
    return run_centralizer(cfg);
  } catch (const ConfigError& ex) {
    RunOutcome out = failure(kConfigError, ex.what(), cfg);
    out.error_key = ex.key();
    return out;
  } catch (const MalformedInput& ex) {
    return failure(kConfigError, ex.what(), cfg);
  } catch (const ParameterError& ex) {
    return failure(kConfigError, ex.what(), cfg);
  } catch (const CapacityError& ex) {
    return failure(kConfigError, ex.what(), cfg);
  } catch (const ConstructionFailure& ex) {
    return failure(kConstructionFailure, ex.what(), cfg);
  } catch (const ArcTooShort& ex) {
    return failure(kConstructionFailure, ex.what(), cfg);
  } catch (const Error& ex) {
    return failure(kConstructionFailure, ex.what(), cfg);
  }
}

void write_artifacts(const RunOutcome& outcome, const ExperimentConfig& cfg) {
  if (outcome.report.is_null()) return;
  const std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& ext, const std::string& body) {
    std::ofstream f(dir / (cfg.command + ext), std::ios::binary);
    f << body;
    if (!f) throw std::runtime_error("cannot write " + (dir / (cfg.command + ext)).string());
  };
  put(".json", outcome.report.dump(2) + "\n");
  if (!outcome.csv.empty()) put(".csv", outcome.csv);
  if (!outcome.svg.empty()) put(".svg", outcome.svg);
}

}  // namespace expanse::app
