#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expanse/action_zoo.hpp"
#include "expanse/group_words.hpp"
#include "expanse/phase_spaces.hpp"

namespace expanse {

// A distance counts as exceeding a threshold only when it clears it by this
// margin, so rounding in long compositions (or grid pairs sitting exactly at
// the threshold) cannot manufacture separations.
inline constexpr double kSeparationSlack = 1e-12;
inline bool exceeds(double d, double threshold) {
  return d > threshold + kSeparationSlack;
}
// The matching test for distance floors ("pairs at distance >= delta"), so a
// grid pair sitting exactly at the floor is not lost to rounding.
inline bool at_least(double d, double floor) {
  return d >= floor - kSeparationSlack;
}

// Caps the number of generator evaluations one word search may spend.
struct SearchLimits {
  std::uint64_t max_evaluations = std::uint64_t{1} << 27;
};

struct SeparationWitness {
  Word word;
  int radius = 0;  // word length
  double distance = 0.0;
};

// First word of K_n_max, in ball order, that moves x and y more than eps
// apart. Iterative deepening keeps memory at O(n_max); words of length i are
// visited in the same order ball() lists them.
std::optional<SeparationWitness> find_separating_word(
    const Action& action, const Point& x, const Point& y, double eps,
    int n_max, const SearchLimits& limits = {});

bool is_separated(const Action& action, const Point& x, const Point& y, int n,
                  double eps, const SearchLimits& limits = {});

std::optional<int> min_separating_radius(const Action& action, const Point& x,
                                         const Point& y, double eps, int n_max,
                                         const SearchLimits& limits = {});

// Greedy (n, eps)-separated packing over the table's base points in order.
// Only words of length <= n are used. Returns indices into the base points.
std::vector<std::size_t> greedy_separated_indices(const OrbitTable& table,
                                                  const Space& space, int n,
                                                  double eps);

std::vector<Point> max_separated_set(const Action& action,
                                     std::span<const Point> samples, int n,
                                     double eps);

struct EntropyReport {
  std::vector<double> epsilons;  // strictly descending
  int n_max = 0;
  int tail_window = 0;
  std::size_t sample_count = 0;
  // counts[k][n]: best separated-set size found for epsilons[k] at radius n.
  std::vector<std::vector<std::size_t>> counts;
  // The greedy sizes before the monotone envelope was applied.
  std::vector<std::vector<std::size_t>> raw_counts;
  std::vector<double> slopes;
  std::vector<bool> saturated_by_eps;
  bool saturated = false;
  double estimate = 0.0;
};

// Builds the report from raw greedy counts: monotone envelope, tail-window
// least-squares slopes of log S (clamped at 0), saturation flags.
EntropyReport assemble_entropy_report(std::vector<double> epsilons,
                                      std::vector<std::vector<std::size_t>> raw,
                                      int tail_window, std::size_t sample_count);

void validate_entropy_query(std::span<const double> epsilons, int n_max,
                            int tail_window, std::size_t sample_count);

EntropyReport entropy_estimate(const Action& action,
                               std::span<const Point> samples,
                               std::span<const double> epsilons, int n_max,
                               int tail_window, int threads = 1);

// 2^depth points with their construction history and the outcome of the
// all-pairs separation re-check.
struct SeparatedFamily {
  int depth = 0;
  double e = 0.0;
  int N = 0;
  double threshold = 0.0;  // e/2
  int radius = 0;          // depth * N
  std::vector<Point> points;
  std::vector<double> parameters;  // seed parameter of each point
  std::vector<std::vector<std::string>> trails;  // separating words along the path
  std::size_t pairs_checked = 0;
  std::size_t pairs_verified = 0;
  bool verified() const { return pairs_verified == pairs_checked; }
};

struct DoublingOptions {
  int threads = 1;
  // Fallback search budget per pair when no construction word separates it.
  SearchLimits pair_limits{std::uint64_t{1} << 20};
};

// Inductive 2^depth construction: separate the current arc's endpoints
// beyond e with a word of length <= N (the farthest-moving one, ties in ball
// order), push the arc through it, split the image into two subarcs of
// diameter >= delta, recurse. Points are the endpoints of the final arcs,
// located on the seed arc. Throws ConstructionFailure if some arc cannot be
// separated within N; ArcTooShort propagates from splitting.
SeparatedFamily doubling_lower_bound(const Action& action, const Arc& seed_arc,
                                     double delta, double e, int N, int depth,
                                     const DoublingOptions& options = {});

}  // namespace expanse
