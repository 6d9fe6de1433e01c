#include "expanse/pseudogroup.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <unordered_set>

#include "expanse/errors.hpp"
#include "parallel.hpp"

namespace expanse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinIntersection = 1e-12;

Interval hull(double p, double q) { return {std::min(p, q), std::max(p, q)}; }

void require_transversal(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ParameterError("transversal point " + std::to_string(x) +
                         " lies outside [0,1]");
  }
}

}  // namespace

bool Interval::contains(double x) const {
  return x >= lo - kDomainSlack && x <= hi + kDomainSlack;
}

bool Interval::contains(const Interval& other) const {
  return other.lo >= lo - kDomainSlack && other.hi <= hi + kDomainSlack;
}

double Branch::operator()(double x) const {
  switch (kind) {
    case Kind::affine:
      return a * x + b;
    case Kind::square:
      return x * x;
    case Kind::sqrt:
      return std::sqrt(std::max(x, 0.0));
  }
  return x;
}

Branch Branch::inverse() const {
  switch (kind) {
    case Kind::affine:
      return {Kind::affine, 1.0 / a, -b / a};
    case Kind::square:
      return {Kind::sqrt, 1.0, 0.0};
    case Kind::sqrt:
      return {Kind::square, 1.0, 0.0};
  }
  return *this;
}

double Branch::lipschitz(const Interval& on) const {
  switch (kind) {
    case Kind::affine:
      return std::abs(a);
    case Kind::square:
      return 2.0 * std::max(std::abs(on.lo), std::abs(on.hi));
    case Kind::sqrt:
      return on.lo <= 0.0 ? kInf : 0.5 / std::sqrt(on.lo);
  }
  return kInf;
}

void Chain::push(Branch b) {
  using K = Branch::Kind;
  if (b.kind == K::affine && !steps_.empty() && steps_.back().kind == K::affine) {
    Branch& last = steps_.back();
    last = {K::affine, b.a * last.a, b.a * last.b + b.b};
    if (last.a == 1.0 && last.b == 0.0) steps_.pop_back();
    return;
  }
  if (b.kind == K::affine && b.a == 1.0 && b.b == 0.0) return;
  // square after sqrt (or the reverse) cancels on [0,1].
  if (!steps_.empty() && b.kind != K::affine && steps_.back().kind != K::affine &&
      steps_.back().kind != b.kind) {
    steps_.pop_back();
    return;
  }
  steps_.push_back(b);
}

void Chain::append(const Chain& later) {
  for (const Branch& b : later.steps_) push(b);
}

double Chain::operator()(double x) const {
  for (const Branch& b : steps_) x = b(x);
  return x;
}

Chain Chain::inverse() const {
  Chain out;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) out.push(it->inverse());
  return out;
}

double Chain::lipschitz(const Interval& on) const {
  double l = 1.0;
  Interval cur = on;
  for (const Branch& b : steps_) {
    l *= b.lipschitz(cur);
    cur = hull(b(cur.lo), b(cur.hi));
  }
  return l;
}

Interval Piece::image() const { return hull(chain(domain.lo), chain(domain.hi)); }

PartialMap::PartialMap(std::vector<Piece> pieces, std::vector<int> trail)
    : pieces_(std::move(pieces)), trail_(std::move(trail)) {
  if (pieces_.size() > kMaxPieces) {
    throw CapacityError("partial map needs " + std::to_string(pieces_.size()) +
                        " pieces, more than " + std::to_string(kMaxPieces));
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& p, const Piece& q) { return p.domain.lo < q.domain.lo; });
  std::vector<Interval> images;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Interval& d = pieces_[i].domain;
    if (!(d.lo < d.hi) || d.lo < -kDomainSlack || d.hi > 1.0 + kDomainSlack) {
      throw ParameterError("piece domain [" + std::to_string(d.lo) + ", " +
                           std::to_string(d.hi) + "] is not a subinterval of [0,1]");
    }
    if (i > 0 && d.lo < pieces_[i - 1].domain.hi - kDomainSlack) {
      throw ParameterError("piece domains overlap");
    }
    for (const Branch& b : pieces_[i].chain.steps()) {
      if (b.kind == Branch::Kind::affine && b.a == 0.0) {
        throw ParameterError("affine piece with zero slope is not injective");
      }
    }
    const Interval im = pieces_[i].image();
    if (im.lo < -kDomainSlack || im.hi > 1.0 + kDomainSlack) {
      throw ParameterError("piece image leaves [0,1]");
    }
    images.push_back(im);
  }
  std::sort(images.begin(), images.end(),
            [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
  for (std::size_t i = 1; i < images.size(); ++i) {
    if (images[i].lo < images[i - 1].hi - kDomainSlack) {
      throw ParameterError("piece images overlap, map is not injective");
    }
  }
}

PartialMap PartialMap::identity() {
  return PartialMap({Piece{Interval{0.0, 1.0}, Chain{}}}, {});
}

PartialMap PartialMap::affine(double a, double b, Interval domain, int generator) {
  return PartialMap({Piece{domain, Chain(Branch{Branch::Kind::affine, a, b})}},
                    {generator});
}

std::vector<Interval> PartialMap::domain() const {
  std::vector<Interval> out;
  for (const Piece& p : pieces_) {
    if (!out.empty() && p.domain.lo <= out.back().hi + kDomainSlack) {
      out.back().hi = std::max(out.back().hi, p.domain.hi);
    } else {
      out.push_back(p.domain);
    }
  }
  return out;
}

bool PartialMap::contains(double x) const {
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [x](const Piece& p) { return p.domain.contains(x); });
}

std::optional<double> PartialMap::operator()(double x) const {
  for (const Piece& p : pieces_) {
    if (p.domain.contains(x)) return p.chain(x);
  }
  return std::nullopt;
}

std::optional<std::size_t> PartialMap::piece_covering(const Interval& iv) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].domain.contains(iv)) return i;
  }
  return std::nullopt;
}

double PartialMap::lipschitz() const {
  double l = 0.0;
  for (const Piece& p : pieces_) l = std::max(l, p.chain.lipschitz(p.domain));
  return l;
}

PartialMap PartialMap::inverse(std::span<const int> inverse_of) const {
  std::vector<Piece> pieces;
  for (const Piece& p : pieces_) pieces.push_back({p.image(), p.chain.inverse()});
  std::vector<int> trail;
  for (auto it = trail_.rbegin(); it != trail_.rend(); ++it) {
    trail.push_back(inverse_of[static_cast<std::size_t>(*it)]);
  }
  return PartialMap(std::move(pieces), std::move(trail));
}

std::optional<PartialMap> compose(const PartialMap& outer, const PartialMap& inner) {
  std::vector<Piece> pieces;
  for (const Piece& p : inner.pieces()) {
    const Interval im = p.image();
    const Chain back = p.chain.inverse();
    for (const Piece& q : outer.pieces()) {
      const double lo = std::max(im.lo, q.domain.lo);
      const double hi = std::min(im.hi, q.domain.hi);
      if (!(hi - lo > kMinIntersection)) continue;
      Interval pre = hull(back(lo), back(hi));
      pre.lo = std::max(pre.lo, p.domain.lo);
      pre.hi = std::min(pre.hi, p.domain.hi);
      if (!(pre.lo < pre.hi)) continue;
      Chain c = p.chain;
      c.append(q.chain);
      pieces.push_back({pre, std::move(c)});
      if (pieces.size() > kMaxPieces) {
        throw CapacityError("composition fragments into more than " +
                            std::to_string(kMaxPieces) + " pieces");
      }
    }
  }
  if (pieces.empty()) return std::nullopt;
  std::vector<int> trail = outer.trail();
  trail.insert(trail.end(), inner.trail().begin(), inner.trail().end());
  return PartialMap(std::move(pieces), std::move(trail));
}

double PseudoGroupSpec::max_lipschitz() const {
  double l = 0.0;
  for (const PartialMap& g : generators) l = std::max(l, g.lipschitz());
  return l;
}

std::optional<std::size_t> PseudoGroupSpec::transversal_piece(double x) const {
  for (std::size_t i = 0; i < transversal.size(); ++i) {
    if (transversal[i].contains(x)) return i;
  }
  return std::nullopt;
}

PseudoGroupSpec make_pseudogroup(std::string name, std::vector<NamedMap> maps,
                                 std::vector<Interval> transversal) {
  if (maps.empty()) throw ParameterError("pseudo-group needs a generator");
  if (maps.size() > 127) throw ParameterError("too many generators");
  PseudoGroupSpec spec;
  spec.name = std::move(name);
  spec.transversal = std::move(transversal);
  const int m = static_cast<int>(maps.size());
  for (int i = 0; i < m; ++i) {
    spec.generators.emplace_back(std::move(maps[static_cast<std::size_t>(i)].pieces),
                                 std::vector<int>{i});
    spec.generator_names.push_back(maps[static_cast<std::size_t>(i)].name);
  }
  for (int i = 0; i < m; ++i) spec.inverse_of.push_back(i + m);
  for (int i = 0; i < m; ++i) spec.inverse_of.push_back(i);
  for (int i = 0; i < m; ++i) {
    spec.generators.push_back(spec.generators[static_cast<std::size_t>(i)].inverse(spec.inverse_of));
    spec.generator_names.push_back(spec.generator_names[static_cast<std::size_t>(i)] + "^-1");
  }
  for (const Interval& t : spec.transversal) {
    if (!(t.lo < t.hi) || t.lo < 0.0 || t.hi > 1.0) {
      throw ParameterError("transversal pieces must be subintervals of [0,1]");
    }
  }
  return spec;
}

PseudoGroupSpec make_pseudogroup_spec(std::string_view name) {
  using K = Branch::Kind;
  auto affine = [](std::string n, double a, double b, double lo, double hi) {
    return NamedMap{std::move(n), {Piece{{lo, hi}, Chain(Branch{K::affine, a, b})}}};
  };
  if (name == "dyadic") {
    return make_pseudogroup("dyadic", {affine("left", 2.0, 0.0, 0.0, 0.5),
                                       affine("right", 2.0, -1.0, 0.5, 1.0)});
  }
  if (name == "dyadic_overlap") {
    std::vector<NamedMap> maps;
    for (int k = 0; k <= 4; ++k) {
      maps.push_back(affine("w" + std::to_string(k), 2.0, -k / 4.0, k / 8.0,
                            k / 8.0 + 0.5));
    }
    return make_pseudogroup("dyadic_overlap", std::move(maps));
  }
  if (name == "contraction") {
    return make_pseudogroup("contraction", {affine("third", 1.0 / 3.0, 0.0, 0.0, 1.0)});
  }
  if (name == "identity") {
    return make_pseudogroup("identity", {affine("id", 1.0, 0.0, 0.0, 1.0)});
  }
  if (name == "rotation_restriction") {
    return make_pseudogroup("rotation_restriction",
                            {affine("shift", 1.0, 0.3, 0.0, 0.7)});
  }
  if (name == "square") {
    return make_pseudogroup(
        "square", {NamedMap{"square", {Piece{{0.0, 1.0}, Chain(Branch{K::square})}}}});
  }
  throw MalformedInput("unknown pseudo-group '" + std::string(name) + "'");
}

namespace {

std::vector<std::int64_t> dedup_key(const PartialMap& g) {
  auto q = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1e12)); };
  std::vector<std::int64_t> key;
  const std::vector<Interval> dom = g.domain();
  for (const Interval& iv : dom) {
    key.push_back(q(iv.lo));
    key.push_back(q(iv.hi));
  }
  const double lo = dom.front().lo;
  const double hi = dom.back().hi;
  for (int k = 0; k < 8; ++k) {
    const double x = lo + (k + 0.5) / 8.0 * (hi - lo);
    const auto v = g(x);
    key.push_back(v ? q(*v) : std::numeric_limits<std::int64_t>::min());
  }
  return key;
}

}  // namespace

std::vector<PartialMap> pg_ball(const PseudoGroupSpec& spec, int n) {
  if (n < 0) throw ParameterError("ball radius must be non-negative");
  std::vector<PartialMap> out{PartialMap::identity()};
  std::set<std::vector<std::int64_t>> seen{dedup_key(out.front())};
  std::size_t level_begin = 0;
  for (int s = 1; s <= n; ++s) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const PartialMap& gen : spec.generators) {
        auto c = compose(gen, out[i]);
        if (!c) continue;
        if (seen.insert(dedup_key(*c)).second) out.push_back(std::move(*c));
      }
    }
    level_begin = level_end;
  }
  return out;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    return std::hash<std::uint64_t>{}(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
  }
};

}  // namespace

std::optional<int> pg_min_separating_size(const PseudoGroupSpec& spec, double x,
                                          double y, double eps, int n_max,
                                          const PgSearchLimits& limits) {
  require_transversal(x);
  require_transversal(y);
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  if (n_max < 0) throw ParameterError("n_max must be non-negative");
  if (exceeds(std::abs(x - y), eps)) return 0;
  if (x == y) return std::nullopt;
  const double L = spec.max_lipschitz();
  // A pair at distance d can reach at most d * L^r in r more steps.
  auto hopeless = [&](double d, int remaining) {
    return d * std::pow(L, remaining) <= eps + kSeparationSlack;
  };
  using State = std::pair<double, double>;
  auto canonical = [](double p, double q) {
    return p < q ? State{p, q} : State{q, p};
  };
  auto bits = [](const State& s) {
    return std::pair{std::bit_cast<std::uint64_t>(s.first),
                     std::bit_cast<std::uint64_t>(s.second)};
  };
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> visited;
  std::vector<State> level{canonical(x, y)};
  visited.insert(bits(level.front()));
  std::uint64_t states = 1;
  for (int s = 1; s <= n_max && !level.empty(); ++s) {
    std::vector<State> next;
    for (const State& st : level) {
      for (const PartialMap& gen : spec.generators) {
        const auto gx = gen(st.first);
        if (!gx) continue;
        const auto gy = gen(st.second);
        if (!gy) continue;
        const double d = std::abs(*gx - *gy);
        if (exceeds(d, eps)) return s;
        if (hopeless(d, n_max - s)) continue;
        const State ns = canonical(*gx, *gy);
        if (!visited.insert(bits(ns)).second) continue;
        if (++states > limits.max_states) {
          throw SearchBudgetExceeded("pseudo-group separation search exceeded " +
                                     std::to_string(limits.max_states) + " states");
        }
        next.push_back(ns);
      }
    }
    level.swap(next);
  }
  return std::nullopt;
}

bool pg_is_separated(const PseudoGroupSpec& spec, double x, double y, int n,
                     double eps, const PgSearchLimits& limits) {
  return pg_min_separating_size(spec, x, y, eps, n, limits).has_value();
}

std::vector<double> pg_sample_grid(int resolution) {
  if (resolution < 1) throw ParameterError("grid resolution must be positive");
  std::vector<double> out;
  for (int i = 0; i < resolution; ++i) out.push_back((i + 0.5) / resolution);
  return out;
}

EntropyReport pg_entropy_estimate(const PseudoGroupSpec& spec,
                                  std::span<const double> samples,
                                  std::span<const double> epsilons, int n_max,
                                  int tail_window, int threads) {
  validate_entropy_query(epsilons, n_max, tail_window, samples.size());
  for (double x : samples) require_transversal(x);
  const std::size_t m = samples.size();
  std::vector<std::vector<std::size_t>> raw(epsilons.size());
  detail::parallel_for(epsilons.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const double eps = epsilons[k];
      // Lazily filled minimal separating sizes; -2 unknown, -1 none found.
      std::vector<std::int8_t> cache(m * m, -2);
      auto size_of = [&](std::size_t i, std::size_t j) {
        std::int8_t& c = cache[std::min(i, j) * m + std::max(i, j)];
        if (c == -2) {
          std::optional<int> s;
          try {
            s = pg_min_separating_size(spec, samples[i], samples[j], eps, n_max);
          } catch (const SearchBudgetExceeded&) {
            s.reset();  // unproven pairs count as not separated
          }
          c = static_cast<std::int8_t>(s ? *s : -1);
        }
        return static_cast<int>(c);
      };
      auto& row = raw[k];
      std::vector<std::size_t> chosen;
      for (int n = 0; n <= n_max; ++n) {
        chosen.clear();
        for (std::size_t i = 0; i < m; ++i) {
          const bool ok = std::all_of(chosen.begin(), chosen.end(), [&](std::size_t j) {
            const int s = size_of(i, j);
            return s >= 0 && s <= n;
          });
          if (ok) chosen.push_back(i);
        }
        row.push_back(chosen.size());
      }
    }
  });
  return assemble_entropy_report(std::vector<double>(epsilons.begin(), epsilons.end()),
                                 std::move(raw), tail_window, m);
}

std::optional<int> pg_uniform_bound(const PseudoGroupSpec& spec, double delta,
                                    double e, std::span<const TransversalPair> pairs,
                                    int n_max, int threads) {
  if (!(delta > 0.0) || !(e > 0.0)) throw ParameterError("delta and e must be positive");
  std::vector<TransversalPair> qualifying;
  for (const auto& [x, y] : pairs) {
    require_transversal(x);
    require_transversal(y);
    const auto px = spec.transversal_piece(x);
    if (!px || px != spec.transversal_piece(y)) continue;
    if (at_least(std::abs(x - y), delta)) qualifying.emplace_back(x, y);
  }
  std::vector<int> sizes(qualifying.size(), -1);
  detail::parallel_for(qualifying.size(), threads, [&](std::size_t b, std::size_t end) {
    for (std::size_t i = b; i < end; ++i) {
      const auto s = pg_min_separating_size(spec, qualifying[i].first,
                                            qualifying[i].second, e, n_max);
      sizes[i] = s ? *s : -1;
    }
  });
  int worst = 0;
  for (int s : sizes) {
    if (s < 0) return std::nullopt;
    worst = std::max(worst, s);
  }
  return worst;
}

std::vector<TransversalPair> pg_grid_pairs(const PseudoGroupSpec& spec,
                                           int resolution, double min_distance) {
  const std::vector<double> grid = pg_sample_grid(resolution);
  std::vector<TransversalPair> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto pi = spec.transversal_piece(grid[i]);
    if (!pi) continue;
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      if (spec.transversal_piece(grid[j]) != pi) continue;
      if (at_least(grid[j] - grid[i], min_distance)) out.emplace_back(grid[i], grid[j]);
    }
  }
  return out;
}

std::vector<TransversalPair> pg_shifted_pairs(const PseudoGroupSpec& spec,
                                              int resolution, double offset) {
  std::vector<TransversalPair> out;
  for (double x : pg_sample_grid(resolution)) {
    const double y = x + offset;
    if (y > 1.0) break;
    const auto px = spec.transversal_piece(x);
    if (px && px == spec.transversal_piece(y)) out.emplace_back(x, y);
  }
  return out;
}

namespace {

struct PgNode {
  double t0 = 0.0;  // seed coordinates of the two ends
  double t1 = 0.0;
  Chain path;       // seed -> current image, valid on [t0, t1]
  int path_size = 0;
  std::vector<int> step;  // generators applied at this node, first applied first
  Chain separated;        // path followed by step
  int separated_size = 0;
  int parent = -1;
};

struct StepChoice {
  std::vector<int> gens;
  Chain chain;
  double distance = 0.0;
};

// Farthest spreading of the interval ends (u, v) by a generator sequence of
// length <= N that keeps the whole interval inside one piece at every step.
// Ties go to the shorter, then lexicographically smaller sequence.
std::optional<StepChoice> farthest_step(const PseudoGroupSpec& spec, double u,
                                        double v, double threshold, int N) {
  StepChoice best;
  best.distance = std::abs(u - v);
  std::uint64_t budget = std::uint64_t{1} << 22;
  std::vector<int> gens;
  // Sequences of exactly `remaining` more steps; only full-length ones are
  // scored, so running len = 1..N visits shorter sequences first.
  std::function<void(double, double, int, const Chain&)> dfs;
  dfs = [&](double a, double b, int remaining, const Chain& so_far) {
    if (remaining == 0) {
      const double d = std::abs(a - b);
      if (d > best.distance) best = {gens, so_far, d};
      return;
    }
    for (std::size_t j = 0; j < spec.count(); ++j) {
      if (!gens.empty() &&
          spec.inverse_of[static_cast<std::size_t>(gens.back())] == static_cast<int>(j)) {
        continue;
      }
      const auto piece = spec.generators[j].piece_covering(hull(a, b));
      if (!piece) continue;
      if (budget-- == 0) {
        throw SearchBudgetExceeded("doubling step search exceeded its budget");
      }
      const Chain& pc = spec.generators[j].pieces()[*piece].chain;
      Chain next = so_far;
      next.append(pc);
      gens.push_back(static_cast<int>(j));
      dfs(pc(a), pc(b), remaining - 1, next);
      gens.pop_back();
    }
  };
  for (int len = 1; len <= N; ++len) dfs(u, v, len, Chain{});
  if (!exceeds(best.distance, threshold)) return std::nullopt;
  return best;
}

std::string step_name(const PseudoGroupSpec& spec, const std::vector<int>& gens) {
  if (gens.empty()) return "e";
  std::string s;
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) {
    if (!s.empty()) s += ' ';
    s += spec.generator_names[static_cast<std::size_t>(*it)];
  }
  return s;
}

}  // namespace

SeparatedFamily pg_doubling(const PseudoGroupSpec& spec, Interval seed, double eta,
                            double e, int N, int depth, int threads) {
  if (!(eta > 0.0) || !(e > 0.0)) throw ParameterError("eta and e must be positive");
  if (N < 0 || depth < 0 || depth > 20) {
    throw ParameterError("need N >= 0 and 0 <= depth <= 20");
  }
  require_transversal(seed.lo);
  require_transversal(seed.hi);
  if (!(seed.length() >= eta - kDomainSlack)) throw ArcTooShort("seed interval is shorter than eta");

  SeparatedFamily fam;
  fam.depth = depth;
  fam.e = e;
  fam.N = N;
  fam.threshold = e / 2.0;
  fam.radius = depth * N;
  if (depth == 0) {
    fam.points.push_back(Point{{seed.lo, 0.0}});
    fam.parameters.push_back(seed.lo);
    fam.trails.emplace_back();
    return fam;
  }

  std::vector<PgNode> nodes(1);
  nodes[0].t0 = seed.lo;
  nodes[0].t1 = seed.hi;
  std::vector<std::size_t> level{0};
  for (int lv = 0; lv < depth; ++lv) {
    for (std::size_t id : level) {
      PgNode& node = nodes[id];
      const double u = node.path(node.t0);
      const double v = node.path(node.t1);
      std::optional<StepChoice> choice;
      try {
        choice = farthest_step(spec, u, v, fam.threshold, N);
      } catch (const SearchBudgetExceeded& ex) {
        throw ConstructionFailure("interval " + std::to_string(id) + " at level " +
                                  std::to_string(lv) + ": " + ex.what());
      }
      if (!choice) {
        throw ConstructionFailure(
            "interval " + std::to_string(id) + " at level " + std::to_string(lv) +
            " (seed [" + std::to_string(node.t0) + ", " + std::to_string(node.t1) +
            "], image [" + std::to_string(std::min(u, v)) + ", " +
            std::to_string(std::max(u, v)) + "]) has no element of size <= " +
            std::to_string(N) + " defined on it that spreads it beyond e/2");
      }
      node.step = choice->gens;
      node.separated = node.path;
      node.separated.append(choice->chain);
      node.separated_size = node.path_size + static_cast<int>(choice->gens.size());
    }
    if (lv + 1 == depth) break;
    std::vector<std::size_t> next;
    for (std::size_t id : level) {
      const PgNode node = nodes[id];
      const double u = node.separated(node.t0);
      const double v = node.separated(node.t1);
      if (!(std::abs(v - u) > 2.0 * eta)) {
        throw ConstructionFailure("interval " + std::to_string(id) + " at level " +
                                  std::to_string(lv) + ": image length " +
                                  std::to_string(std::abs(v - u)) +
                                  " is too short to cut two pieces of length eta");
      }
      const double sgn = v > u ? 1.0 : -1.0;
      const Chain back = node.separated.inverse();
      PgNode left;
      left.t0 = node.t0;
      left.t1 = back(u + sgn * eta);
      left.path = node.separated;
      left.path_size = node.separated_size;
      left.parent = static_cast<int>(id);
      PgNode right = left;
      right.t0 = back(v - sgn * eta);
      right.t1 = node.t1;
      nodes.push_back(std::move(left));
      next.push_back(nodes.size() - 1);
      nodes.push_back(std::move(right));
      next.push_back(nodes.size() - 1);
    }
    level.swap(next);
  }

  std::vector<std::size_t> owner;
  for (std::size_t id : level) {
    for (double t : {nodes[id].t0, nodes[id].t1}) {
      fam.points.push_back(Point{{t, 0.0}});
      fam.parameters.push_back(t);
      owner.push_back(id);
      std::vector<std::string> trail;
      for (int k = static_cast<int>(id); k >= 0; k = nodes[static_cast<std::size_t>(k)].parent) {
        trail.push_back(step_name(spec, nodes[static_cast<std::size_t>(k)].step));
      }
      std::reverse(trail.begin(), trail.end());
      fam.trails.push_back(std::move(trail));
    }
  }

  const std::size_t count = fam.points.size();
  const double threshold = fam.threshold;
  const int radius = fam.radius;
  auto covers = [&](const PgNode& nd, double a, double b) {
    const Interval iv = hull(nd.t0, nd.t1);
    return iv.contains(a) && iv.contains(b);
  };
  auto separates = [&](const PgNode& nd, double a, double b) {
    return nd.separated_size <= radius && covers(nd, a, b) &&
           exceeds(std::abs(nd.separated(a) - nd.separated(b)), threshold);
  };
  auto lca = [&](std::size_t a, std::size_t b) {
    std::vector<int> path;
    for (int k = static_cast<int>(a); k >= 0; k = nodes[static_cast<std::size_t>(k)].parent) {
      path.push_back(k);
    }
    for (int k = static_cast<int>(b); k >= 0; k = nodes[static_cast<std::size_t>(k)].parent) {
      if (std::find(path.begin(), path.end(), k) != path.end()) {
        return static_cast<std::size_t>(k);
      }
    }
    return std::size_t{0};
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(count * (count - 1) / 2);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
  }
  std::atomic<std::size_t> verified{0};
  detail::parallel_for(pairs.size(), threads, [&](std::size_t b, std::size_t end) {
    std::size_t local = 0;
    for (std::size_t k = b; k < end; ++k) {
      const auto [i, j] = pairs[k];
      const double a = fam.parameters[i];
      const double c = fam.parameters[j];
      bool ok = separates(nodes[lca(owner[i], owner[j])], a, c);
      for (std::size_t n = 0; !ok && n < nodes.size(); ++n) ok = separates(nodes[n], a, c);
      if (!ok) {
        try {
          ok = pg_is_separated(spec, a, c, radius, threshold,
                               PgSearchLimits{std::uint64_t{1} << 20});
        } catch (const SearchBudgetExceeded&) {
          ok = false;
        }
      }
      if (ok) ++local;
    }
    verified += local;
  });
  fam.pairs_checked = pairs.size();
  fam.pairs_verified = verified.load();
  return fam;
}

}  // namespace expanse
