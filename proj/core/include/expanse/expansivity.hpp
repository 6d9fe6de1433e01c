#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "expanse/action_zoo.hpp"
#include "expanse/phase_spaces.hpp"
#include "expanse/separation_entropy.hpp"

namespace expanse {

struct PointPair {
  Point x;
  Point y;
};

// Empirical expansiveness at threshold e. A pair "separates" when some word
// of length <= n_max moves it more than e apart. Nothing here certifies
// expansiveness; the report only corroborates or refutes it on the samples.
struct ScanReport {
  double e = 0.0;
  double delta = 0.0;  // smallest pair distance among the samples
  int n_max = 0;
  std::size_t pairs_tested = 0;
  std::size_t pairs_separated = 0;
  double separated_fraction = 1.0;
  // The first pair with no witness, else the pair needing the largest radius
  // (lowest index on ties). Empty when no pairs were tested.
  std::optional<std::size_t> worst_index;
  std::optional<PointPair> worst_pair;
  std::optional<int> worst_radius;
  // Max over pairs of the minimal separating radius; empty = unbounded
  // within n_max.
  std::optional<int> n_observed;
  // Per-pair minimal radius in input order.
  std::vector<std::optional<int>> radii;

  bool fully_separated() const { return n_observed.has_value(); }
};

struct ScanOptions {
  int threads = 1;
  SearchLimits limits{};
};

ScanReport expansivity_scan(const Action& action,
                            std::span<const PointPair> pairs, double e,
                            int n_max, const ScanOptions& options = {});

// Max over pairs with d(x,y) >= delta of the minimal separating radius at
// threshold e; nullopt if some qualifying pair has no witness within n_max.
// Pairs closer than delta are skipped; no qualifying pairs yields 0.
std::optional<int> uniform_bound(const Action& action, double delta, double e,
                                 std::span<const PointPair> pairs, int n_max,
                                 const ScanOptions& options = {});

struct ProfileEntry {
  double e = 0.0;
  std::optional<int> bound;
};

std::vector<ProfileEntry> expansivity_profile(const Action& action,
                                              std::span<const double> e_list,
                                              double delta,
                                              std::span<const PointPair> pairs,
                                              int n_max,
                                              const ScanOptions& options = {});

// Every unordered pair of the sample grid at distance >= min_distance.
std::vector<PointPair> grid_pairs(const Space& space, int resolution,
                                  double min_distance);

// count pairs (rounded up to even) in antithetic couples (x, x+d u),
// (x, x-d u) with d uniform in [min_distance, max_distance] and u a uniform
// direction. max_distance <= 1/2 keeps d equal to the quotient distance.
// Deterministic in seed on every platform.
std::vector<PointPair> random_pairs(const Space& space, std::size_t count,
                                    double min_distance, double max_distance,
                                    std::uint64_t seed);

}  // namespace expanse
