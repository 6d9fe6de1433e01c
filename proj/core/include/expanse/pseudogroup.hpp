#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "expanse/separation_entropy.hpp"

namespace expanse {

// Closed interval of the transversal [0,1].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
  bool contains(double x) const;  // with kDomainSlack
  bool contains(const Interval& other) const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Endpoint computations go through inverse formulas, so membership tests
// allow this much slack.
inline constexpr double kDomainSlack = 1e-12;

// One strictly increasing or decreasing formula. Affine steps are x -> a x + b;
// square and sqrt are the registered nonlinear pair on [0,1].
struct Branch {
  enum class Kind { affine, square, sqrt };
  Kind kind = Kind::affine;
  double a = 1.0;
  double b = 0.0;

  double operator()(double x) const;
  Branch inverse() const;
  // Sup of |derivative| over the interval; infinity for sqrt touching 0.
  double lipschitz(const Interval& on) const;
};

// Formulas applied first to last. Consecutive affine steps are collapsed.
class Chain {
 public:
  Chain() = default;
  explicit Chain(Branch b) { push(b); }
  void push(Branch b);
  void append(const Chain& later);
  double operator()(double x) const;
  Chain inverse() const;
  double lipschitz(const Interval& on) const;
  std::span<const Branch> steps() const { return steps_; }
  bool is_identity() const { return steps_.empty(); }
 private:
  std::vector<Branch> steps_;
};

struct Piece {
  Interval domain;
  Chain chain;
  Interval image() const;
};

// A partial injective map of [0,1]: a union of pieces with disjoint domains
// and disjoint images. trail lists generator indices with the outermost
// (last applied) first, so size() = trail length.
class PartialMap {
 public:
  PartialMap() = default;
  // Validates domains inside [0,1], monotone pieces, disjoint domains and
  // images. Throws ParameterError.
  PartialMap(std::vector<Piece> pieces, std::vector<int> trail);
  static PartialMap identity();
  static PartialMap affine(double a, double b, Interval domain, int generator);

  std::span<const Piece> pieces() const { return pieces_; }
  const std::vector<int>& trail() const { return trail_; }
  int size() const { return static_cast<int>(trail_.size()); }
  // Piece domains merged where they touch.
  std::vector<Interval> domain() const;
  bool contains(double x) const;
  std::optional<double> operator()(double x) const;
  // Index of the piece whose domain holds the whole interval.
  std::optional<std::size_t> piece_covering(const Interval& iv) const;
  double lipschitz() const;
  PartialMap inverse(std::span<const int> inverse_of) const;

 private:
  std::vector<Piece> pieces_;
  std::vector<int> trail_;
};

// Pieces per map before compose() gives up with CapacityError.
inline constexpr std::size_t kMaxPieces = 64;

// outer o inner on inner^-1(image(inner) n domain(outer)). Intersections
// shorter than 1e-12 are dropped; nullopt when nothing is left.
std::optional<PartialMap> compose(const PartialMap& outer, const PartialMap& inner);

// Holds generators closed under inverses: generator inverse_of[i] undoes i.
struct PseudoGroupSpec {
  std::string name;
  std::vector<PartialMap> generators;
  std::vector<std::string> generator_names;
  std::vector<int> inverse_of;
  std::vector<Interval> transversal{Interval{0.0, 1.0}};

  std::size_t count() const { return generators.size(); }
  double max_lipschitz() const;
  // Index of the transversal piece holding x, if any.
  std::optional<std::size_t> transversal_piece(double x) const;
};

struct NamedMap {
  std::string name;
  std::vector<Piece> pieces;
};

// Appends the inverse of every listed map (named "<name>^-1").
PseudoGroupSpec make_pseudogroup(std::string name, std::vector<NamedMap> maps,
                                 std::vector<Interval> transversal = {Interval{0.0, 1.0}});

// Shipped specs:
//   "dyadic"               x -> 2x on [0,1/2], x -> 2x-1 on [1/2,1]
//   "dyadic_overlap"       x -> 2x - k/4 on [k/8, k/8 + 1/2], k = 0..4
//   "contraction"          x -> x/3 on [0,1]
//   "identity"             x -> x on [0,1]
//   "rotation_restriction" x -> x + 0.3 on [0, 0.7]
//   "square"               x -> x^2 on [0,1]
// each with inverses. Throws MalformedInput on other names.
PseudoGroupSpec make_pseudogroup_spec(std::string_view name);

// Elements of size <= n, breadth first, deduplicated by domain and eight
// sampled values at 1e-12 (first, hence smallest, representative kept).
std::vector<PartialMap> pg_ball(const PseudoGroupSpec& spec, int n);

struct PgSearchLimits {
  std::uint64_t max_states = std::uint64_t{1} << 22;
};

// Smallest size of an element g with x, y in its domain and
// |g(x) - g(y)| > eps; size 0 means |x - y| > eps already. Throws
// SearchBudgetExceeded when the state budget runs out.
std::optional<int> pg_min_separating_size(const PseudoGroupSpec& spec, double x,
                                          double y, double eps, int n_max,
                                          const PgSearchLimits& limits = {});

bool pg_is_separated(const PseudoGroupSpec& spec, double x, double y, int n,
                     double eps, const PgSearchLimits& limits = {});

// (i + 1/2) / r for i < r.
std::vector<double> pg_sample_grid(int resolution);

EntropyReport pg_entropy_estimate(const PseudoGroupSpec& spec,
                                  std::span<const double> samples,
                                  std::span<const double> epsilons, int n_max,
                                  int tail_window, int threads = 1);

using TransversalPair = std::pair<double, double>;

// Max over pairs sharing a transversal piece with |x - y| >= delta of the
// minimal separating size at threshold e; nullopt if one of them has none
// within n_max, 0 if no pair qualifies.
std::optional<int> pg_uniform_bound(const PseudoGroupSpec& spec, double delta,
                                    double e,
                                    std::span<const TransversalPair> pairs,
                                    int n_max, int threads = 1);

// Every pair of the resolution-r grid sharing a transversal piece.
std::vector<TransversalPair> pg_grid_pairs(const PseudoGroupSpec& spec,
                                           int resolution, double min_distance);

// (x, x + offset) for every grid point x whose partner shares its
// transversal piece; pairs at exactly the distance floor.
std::vector<TransversalPair> pg_shifted_pairs(const PseudoGroupSpec& spec,
                                              int resolution, double offset);

// Doubling on the transversal: at every interval pick the size <= N element,
// defined on the whole interval piece by piece, that spreads its endpoints
// farthest (beyond e/2), cut the image into end pieces of length eta and
// recurse. Points are seed coordinates (also stored as Point x-coordinates)
// of the final interval endpoints; the family is re-checked pairwise at
// (depth N, e/2). Throws ConstructionFailure naming the interval and level.
SeparatedFamily pg_doubling(const PseudoGroupSpec& spec, Interval seed,
                            double eta, double e, int N, int depth,
                            int threads = 1);

}  // namespace expanse
