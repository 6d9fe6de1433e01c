// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "app/config.hpp"
#include "app/run.hpp"
#include "expanse/action_zoo.hpp"
#include "properties.hpp"

using expanse::app::ExperimentConfig;
using expanse::app::RunOutcome;
using nlohmann::json;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Recorded {
  ExperimentConfig cfg;
  std::string report;
  std::string csv;
};

// Every run made by criteria 1-7, replayed by criterion 9.
std::vector<Recorded> g_runs;

RunOutcome run_recorded(const ExperimentConfig& cfg) {
  RunOutcome out = expanse::app::run(cfg);
  g_runs.push_back({cfg, out.report.dump(), out.csv});
  return out;
}

ExperimentConfig make(const std::string& command, const std::string& action) {
  ExperimentConfig cfg;
  cfg.command = command;
  cfg.action = action;
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

std::string counts_text(const json& counts) {
  std::string s;
  for (const auto& row : counts) {
    s += s.empty() ? "[" : " [";
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i].dump();
    s += "]";
  }
  return s;
}

Verdict cat_entropy() {
  ExperimentConfig cfg = make("entropy", "cat");
  cfg.grid = 200;
  cfg.epsilons = {0.2, 0.1, 0.05};
  cfg.n_max = 10;
  cfg.tail_window = 4;
  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome out = run_recorded(cfg);
  const double secs = seconds_since(t0);
  if (out.exit_code != 0) return {false, out.message};
  const double target = std::log(expanse::kCatEigenvalue);
  const double est = out.report["result"]["estimate"].get<double>();
  const bool ok = std::abs(est - target) <= 0.2 * target && secs < 60.0;
  return {ok, "estimate " + fmt(est) + " vs log((3+sqrt5)/2) = " + fmt(target) +
                  " (tolerance 20%), saturated " + out.report["result"]["saturated"].dump() +
                  ", " + fmt(secs, 3) + " s (limit 60)"};
}

Verdict rotation_entropy() {
  ExperimentConfig cfg = make("entropy", "rotation");
  cfg.grid = 100;
  cfg.epsilons = {0.2, 0.1, 0.05};
  cfg.n_max = 10;
  cfg.tail_window = 4;
  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome out = run_recorded(cfg);
  const double secs = seconds_since(t0);
  if (out.exit_code != 0) return {false, out.message};
  bool constant = true;
  for (const auto& row : out.report["result"]["raw_counts"]) {
    for (const auto& c : row) constant = constant && c == row[0];
  }
  const double est = out.report["result"]["estimate"].get<double>();
  return {est < 0.05 && constant && secs < 5.0,
          "estimate " + fmt(est) + " (< 0.05), counts " +
              counts_text(out.report["result"]["counts"]) +
              (constant ? " constant in n" : " NOT constant in n") + ", " + fmt(secs, 3) +
              " s (limit 5)"};
}

Verdict doubling_desk_check() {
  const auto t0 = std::chrono::steady_clock::now();
  // N from a uniform-bound run at the splitting threshold max(e, 2 delta).
  ExperimentConfig ub = make("uniform-bound", "example_32");
  ub.delta = 0.04;
  ub.e = 0.08;
  ub.grid = 500;
  ub.pairs = 2000;
  ub.n_max = 30;
  const RunOutcome bound = run_recorded(ub);
  if (bound.exit_code != 0) return {false, "uniform-bound: " + bound.message};
  const int N = bound.report["result"]["N"].get<int>();

  ExperimentConfig cfg = make("doubling", "example_32");
  cfg.delta = 0.04;
  cfg.e = 0.04;
  cfg.N = N;
  cfg.depth = 8;
  const RunOutcome out = run_recorded(cfg);
  const double secs = seconds_since(t0);
  if (out.exit_code != 0 && out.report.is_null()) return {false, out.message};
  const auto& r = out.report["result"];
  const bool ok = r["point_count"] == 256 && r["pairs_checked"] == 32640 &&
                  r["pairs_verified"] == 32640 && secs < 120.0;
  return {ok, "N = " + std::to_string(N) + ", " + r["point_count"].dump() + " points, " +
                  r["pairs_verified"].dump() + "/" + r["pairs_checked"].dump() +
                  " pairs (" + r["radius"].dump() + ", 0.02)-separated, " + fmt(secs, 3) +
                  " s (limit 120)"};
}

Verdict expansiveness_dichotomy() {
  ExperimentConfig finite = make("uniform-bound", "example_32");
  finite.delta = 0.2;
  finite.e = 0.04;
  finite.n_max = 30;
  finite.grid = 500;
  const RunOutcome a = run_recorded(finite);
  ExperimentConfig rot = make("uniform-bound", "rotation");
  rot.delta = 0.1;
  rot.e = 0.2;
  rot.n_max = 30;
  rot.grid = 500;
  const RunOutcome b = run_recorded(rot);
  const bool finite_ok = a.exit_code == 0 && a.report["result"]["N"].is_number_integer();
  const bool rot_ok = b.exit_code == 2 && b.report["result"]["N"] == "unbounded within n_max";

  // N(delta, e) must not increase with delta nor decrease with e.
  const double grid_vals[] = {0.02, 0.03, 0.04};
  int n[3][3];
  bool all_finite = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ExperimentConfig c = make("uniform-bound", "example_32");
      c.delta = grid_vals[i];
      c.e = grid_vals[j];
      c.n_max = 30;
      c.grid = 300;
      const RunOutcome o = run_recorded(c);
      all_finite = all_finite && o.exit_code == 0;
      n[i][j] = o.exit_code == 0 ? o.report["result"]["N"].get<int>() : -1;
    }
  }
  bool monotone = all_finite;
  std::string table;
  for (int i = 0; i < 3; ++i) {
    table += i ? " | " : "";
    for (int j = 0; j < 3; ++j) {
      table += (j ? "," : "") + std::to_string(n[i][j]);
      if (i > 0) monotone = monotone && n[i][j] <= n[i - 1][j];
      if (j > 0) monotone = monotone && n[i][j] >= n[i][j - 1];
    }
  }
  return {finite_ok && rot_ok && monotone,
          "example_32 N = " + a.report["result"]["N"].dump() + ", rotation N = " +
              b.report["result"]["N"].dump() + ", N(delta row, e col) over {0.02,0.03,0.04}: " +
              table + (monotone ? " monotone" : " NOT monotone")};
}

Verdict example_31() {
  ExperimentConfig cfg = make("expansivity", "example_31");
  cfg.e = 0.04;
  cfg.grid = 0;
  cfg.pairs = 10000;
  cfg.min_distance = 0.05;
  cfg.n_max = 25;
  const RunOutcome out = run_recorded(cfg);
  const expanse::Action a = expanse::make_example_31();
  const double margin = expanse::grid_injectivity_margin(a.generators()[1], a.space(), 400);
  const double frac = out.report.is_null() ? 0.0 : out.report["result"]["separated_fraction"].get<double>();
  return {out.exit_code == 0 && frac == 1.0 && margin > 1e-6,
          "separated_fraction " + fmt(frac, 6) + " over " + std::to_string(cfg.pairs) +
              " pairs, exit " + std::to_string(out.exit_code) +
              ", blown-up injectivity margin on 400x400 " + fmt(margin, 4) + " (> 1e-6)"};
}

Verdict centralizer_suite() {
  const char* candidates[] = {"self", "trivial", "endo:a^2", "endo:a^3"};
  int witnesses = 0, identical = 0, bad = 0;
  std::string failures;
  for (const char* p : candidates) {
    for (const char* q : candidates) {
      ExperimentConfig cfg = make("centralizer", "cat");
      cfg.psi = p;
      cfg.psi_prime = q;
      cfg.e = 0.1;
      cfg.grid = 50;
      cfg.n_max = 10;
      const RunOutcome out = run_recorded(cfg);
      bool ok = out.exit_code == 0;
      if (ok) {
        const auto& r = out.report["result"];
        ok = r["defect_psi"].get<double>() <= 1e-9 && r["defect_psi_prime"].get<double>() <= 1e-9;
        if (r["d0"].get<double>() > 0.0) {
          ok = ok && r["status"] == "witness" && r["witness"]["distance"].get<double>() > 0.1;
          witnesses += ok;
        } else {
          ok = ok && r["status"] == "identical on samples";
          identical += ok;
        }
      }
      if (!ok) {
        ++bad;
        failures += std::string(" ") + p + "/" + q;
      }
    }
  }
  ExperimentConfig rot = make("centralizer", "rotation");
  rot.psi = "self";
  rot.psi_prime = "trivial";
  rot.e = 0.6;
  rot.grid = 50;
  rot.n_max = 10;
  const RunOutcome r = run_recorded(rot);
  const bool rot_ok = r.exit_code == 2 && r.report["result"]["status"] == "no witness within n_max";
  return {bad == 0 && rot_ok,
          std::to_string(witnesses) + " witnesses (distance > 0.1), " + std::to_string(identical) +
              " identical pairs, " + std::to_string(bad) + " failures" + failures +
              "; rotation e=0.6: " + (r.report.is_null() ? r.message : r.report["result"]["status"].dump())};
}

Verdict pseudogroup_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig dy = make("pg-entropy", "example_32");
  dy.pseudogroup = "dyadic";
  dy.grid = 512;
  dy.n_max = 9;
  dy.tail_window = 4;
  dy.epsilons = {0.3, 0.2, 0.1};
  const RunOutcome a = run_recorded(dy);
  ExperimentConfig co = dy;
  co.pseudogroup = "contraction";
  const RunOutcome b = run_recorded(co);
  ExperimentConfig db = make("doubling", "example_32");
  db.pseudogroup = "dyadic_overlap";
  db.delta = 0.1;
  db.e = 0.4;
  db.depth = 6;
  db.grid = 128;
  db.seed_interval = {0.2, 0.3};
  const RunOutcome c = run_recorded(db);
  const double secs = seconds_since(t0);
  if (a.exit_code || b.exit_code || c.report.is_null()) {
    return {false, a.message + b.message + c.message};
  }
  const double target = std::log(2.0);
  const double est = a.report["result"]["estimate"].get<double>();
  const double flat = b.report["result"]["estimate"].get<double>();
  const auto& f = c.report["result"];
  const bool ent_ok = std::abs(est - target) <= 0.2 * target;
  const bool dbl_ok = f["point_count"] == 64 && f["verification"] == "passed";
  return {ent_ok && flat < 0.05 && dbl_ok && secs < 30.0,
          std::string("dyadic estimate ") + fmt(est) + " vs log 2 = " + fmt(target) +
              " (tolerance 20%" + (ent_ok ? "" : ", MISSED") + "), counts " +
              counts_text(a.report["result"]["counts"]) + "; contraction " + fmt(flat) +
              " (< 0.05); dyadic_overlap doubling " + f["point_count"].dump() + " points, " +
              f["pairs_verified"].dump() + "/" + f["pairs_checked"].dump() + " verified; " +
              fmt(secs, 3) + " s (limit 30)"};
}

Verdict properties() {
  const auto results = expanse::testing::run_all_properties(1000, 20240901);
  bool ok = true;
  std::string detail;
  for (const auto& r : results) {
    ok = ok && r.passed() && r.cases >= 1000;
    detail += "\n      " + std::string(r.passed() ? "ok   " : "FAIL ") + r.name + ": " +
              std::to_string(r.cases) + " cases, " + std::to_string(r.failures) + " failures" +
              (r.first_failure.empty() ? "" : " (first: " + r.first_failure + ")");
  }
  return {ok, std::to_string(results.size()) + " suites" + detail};
}

Verdict determinism() {
  const std::vector<Recorded> first = g_runs;
  std::size_t same = 0;
  std::string diffs;
  for (const Recorded& r : first) {
    const RunOutcome again = expanse::app::run(r.cfg);
    if (again.report.dump() == r.report && again.csv == r.csv) {
      ++same;
    } else {
      diffs += " " + r.cfg.command;
    }
  }
  return {same == first.size() && !first.empty(),
          std::to_string(same) + "/" + std::to_string(first.size()) +
              " reruns byte-identical (JSON and CSV)" + diffs};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "cat-map entropy oracle", cat_entropy},
      {2, "isometry has zero entropy", rotation_entropy},
      {3, "doubling desk check on example_32", doubling_desk_check},
      {4, "uniform expansiveness dichotomy", expansiveness_dichotomy},
      {5, "example_31 corroboration", example_31},
      {6, "centralizer witness suite", centralizer_suite},
      {7, "pseudo-group entropy and doubling", pseudogroup_suite},
      {8, "structural property suites", properties},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s [%d] %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
