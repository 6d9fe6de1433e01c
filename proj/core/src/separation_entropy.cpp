#include "expanse/separation_entropy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "expanse/errors.hpp"
#include "parallel.hpp"

namespace expanse {

namespace {

// Axis-aligned buckets of width >= eps over base positions.
class CellIndex {
 public:
  CellIndex(const Space& space, double eps) : dim_(space.dim()) {
    const double per_axis = std::floor(1.0 / eps);
    const int cap = dim_ == 1 ? 1 << 16 : 1 << 9;
    cells_ = static_cast<int>(std::clamp(per_axis, 1.0, static_cast<double>(cap)));
    buckets_.resize(dim_ == 1 ? static_cast<std::size_t>(cells_)
                              : static_cast<std::size_t>(cells_) * cells_);
  }

  void insert(const Point& p, std::size_t id) {
    buckets_[key(cell(p.x()), dim_ == 1 ? 0 : cell(p.y()))].push_back(id);
  }

  template <typename F>
  bool any_neighbor(const Point& p, F&& f) const {
    const int cx = cell(p.x());
    const int cy = dim_ == 1 ? 0 : cell(p.y());
    int xs[3], ys[3];
    const int nx = around(cx, xs);
    const int ny = dim_ == 1 ? 1 : around(cy, ys);
    if (dim_ == 1) ys[0] = 0;
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        for (std::size_t id : buckets_[key(xs[i], ys[j])]) {
          if (f(id)) return true;
        }
      }
    }
    return false;
  }

 private:
  int cell(double v) const {
    return std::min(cells_ - 1, static_cast<int>(v * cells_));
  }
  std::size_t key(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(cells_) +
           static_cast<std::size_t>(cx);
  }
  int around(int c, int* out) const {
    if (cells_ == 1) {
      out[0] = 0;
      return 1;
    }
    if (cells_ == 2) {
      out[0] = 0;
      out[1] = 1;
      return 2;
    }
    out[0] = (c + cells_ - 1) % cells_;
    out[1] = c;
    out[2] = (c + 1) % cells_;
    return 3;
  }

  int dim_;
  int cells_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

void check_eps(double eps) {
  if (!(eps > 0.0)) throw ParameterError("separation threshold must be positive");
}

}  // namespace

std::optional<SeparationWitness> find_separating_word(
    const Action& action, const Point& x, const Point& y, double eps,
    int n_max, const SearchLimits& limits) {
  check_eps(eps);
  const Space& space = action.space();
  const double d0 = distance(space, x, y);
  if (exceeds(d0, eps)) return SeparationWitness{Word{}, 0, d0};
  const GroupSpec& group = action.group();
  const std::vector<Letter> letters = alphabet(group);
  const int branching = static_cast<int>(letters.size());

  std::vector<int> choice(static_cast<std::size_t>(n_max) + 1, -1);
  std::vector<Point> xs(static_cast<std::size_t>(n_max) + 1);
  std::vector<Point> ys(static_cast<std::size_t>(n_max) + 1);
  std::uint64_t spent = 0;

  for (int target = 1; target <= n_max; ++target) {
    xs[0] = x;
    ys[0] = y;
    int depth = 0;
    choice[0] = -1;
    while (depth >= 0) {
      // Advance the choice at this depth to the next admissible letter.
      const Letter* outer =
          depth == 0 ? nullptr : &letters[static_cast<std::size_t>(choice[depth - 1])];
      int& c = choice[static_cast<std::size_t>(depth)];
      do {
        ++c;
      } while (c < branching &&
               !extends(group.kind, letters[static_cast<std::size_t>(c)], outer));
      if (c >= branching) {
        --depth;
        continue;
      }
      const Letter l = letters[static_cast<std::size_t>(c)];
      const auto d = static_cast<std::size_t>(depth);
      xs[d + 1] = action.apply(l, xs[d]);
      ys[d + 1] = action.apply(l, ys[d]);
      spent += 2;
      if (spent > limits.max_evaluations) {
        throw SearchBudgetExceeded("separating-word search exceeded " +
                                   std::to_string(limits.max_evaluations) +
                                   " evaluations at radius " +
                                   std::to_string(target));
      }
      if (depth + 1 == target) {
        const double dist = distance(space, xs[d + 1], ys[d + 1]);
        if (exceeds(dist, eps)) {
          std::vector<Letter> raw;
          for (int k = target - 1; k >= 0; --k) {
            raw.push_back(letters[static_cast<std::size_t>(choice[static_cast<std::size_t>(k)])]);
          }
          return SeparationWitness{reduce(group, raw), target, dist};
        }
        continue;  // try the next letter at this depth
      }
      ++depth;
      choice[static_cast<std::size_t>(depth)] = -1;
    }
  }
  return std::nullopt;
}

bool is_separated(const Action& action, const Point& x, const Point& y, int n,
                  double eps, const SearchLimits& limits) {
  return find_separating_word(action, x, y, eps, n, limits).has_value();
}

std::optional<int> min_separating_radius(const Action& action, const Point& x,
                                         const Point& y, double eps, int n_max,
                                         const SearchLimits& limits) {
  auto w = find_separating_word(action, x, y, eps, n_max, limits);
  if (!w) return std::nullopt;
  return w->radius;
}

std::vector<std::size_t> greedy_separated_indices(const OrbitTable& table,
                                                  const Space& space, int n,
                                                  double eps) {
  check_eps(eps);
  const std::size_t words = table.ball().prefix_size(n);
  const auto& base = table.base_points();
  CellIndex index(space, eps + kSeparationSlack);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto orbit_i = table.orbit(i);
    const bool blocked = index.any_neighbor(base[i], [&](std::size_t m) {
      if (exceeds(distance(space, base[i], base[m]), eps)) return false;
      const auto orbit_m = table.orbit(m);
      // Longer words expand more, so test them first; only the boolean
      // outcome matters here.
      for (std::size_t w = words; w-- > 1;) {
        if (exceeds(distance(space, orbit_i[w], orbit_m[w]), eps)) return false;
      }
      return true;
    });
    if (!blocked) {
      members.push_back(i);
      index.insert(base[i], i);
    }
  }
  return members;
}

std::vector<Point> max_separated_set(const Action& action,
                                     std::span<const Point> samples, int n,
                                     double eps) {
  if (samples.empty()) throw ParameterError("sample list is empty");
  if (n < 0) throw ParameterError("radius must be non-negative");
  const OrbitTable table = orbit_table(action, ball(action.group(), n), samples);
  std::vector<Point> out;
  for (std::size_t i : greedy_separated_indices(table, action.space(), n, eps)) {
    out.push_back(samples[i]);
  }
  return out;
}

void validate_entropy_query(std::span<const double> epsilons, int n_max,
                            int tail_window, std::size_t sample_count) {
  if (sample_count == 0) throw ParameterError("sample list is empty");
  if (epsilons.empty()) throw ParameterError("epsilon list is empty");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw ParameterError("epsilons must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw ParameterError("epsilons must be sorted strictly descending");
    }
  }
  if (tail_window < 2 || n_max < tail_window) {
    throw ParameterError("need n_max >= tail_window >= 2");
  }
}

EntropyReport assemble_entropy_report(std::vector<double> epsilons,
                                      std::vector<std::vector<std::size_t>> raw,
                                      int tail_window, std::size_t sample_count) {
  EntropyReport r;
  r.epsilons = std::move(epsilons);
  r.raw_counts = std::move(raw);
  r.n_max = static_cast<int>(r.raw_counts.front().size()) - 1;
  r.tail_window = tail_window;
  r.sample_count = sample_count;
  r.counts = r.raw_counts;
  // A set separated at (n-1, eps) is separated at (n, eps), and one separated
  // at a larger eps is separated at a smaller one.
  for (std::size_t k = 0; k < r.counts.size(); ++k) {
    for (std::size_t n = 0; n < r.counts[k].size(); ++n) {
      auto& c = r.counts[k][n];
      if (n > 0) c = std::max(c, r.counts[k][n - 1]);
      if (k > 0) c = std::max(c, r.counts[k - 1][n]);
    }
  }
  const int first = r.n_max - tail_window + 1;
  double mean_x = 0.0;
  for (int n = first; n <= r.n_max; ++n) mean_x += n;
  mean_x /= tail_window;
  for (std::size_t k = 0; k < r.counts.size(); ++k) {
    double mean_y = 0.0;
    for (int n = first; n <= r.n_max; ++n) {
      mean_y += std::log(static_cast<double>(r.counts[k][static_cast<std::size_t>(n)]));
    }
    mean_y /= tail_window;
    double sxy = 0.0, sxx = 0.0;
    for (int n = first; n <= r.n_max; ++n) {
      const double y =
          std::log(static_cast<double>(r.counts[k][static_cast<std::size_t>(n)]));
      sxy += (n - mean_x) * (y - mean_y);
      sxx += (n - mean_x) * (n - mean_x);
    }
    r.slopes.push_back(std::max(0.0, sxy / sxx));
    const bool sat = static_cast<double>(r.counts[k].back()) >=
                     0.9 * static_cast<double>(sample_count);
    r.saturated_by_eps.push_back(sat);
    r.saturated = r.saturated || sat;
  }
  r.estimate = r.slopes.back();
  return r;
}

EntropyReport entropy_estimate(const Action& action,
                               std::span<const Point> samples,
                               std::span<const double> epsilons, int n_max,
                               int tail_window, int threads) {
  validate_entropy_query(epsilons, n_max, tail_window, samples.size());
  const OrbitTable table =
      orbit_table(action, ball(action.group(), n_max), samples, threads);
  std::vector<std::vector<std::size_t>> raw(epsilons.size());
  detail::parallel_for(epsilons.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      auto& row = raw[k];
      for (int n = 0; n <= n_max; ++n) {
        // Once every sample is pairwise separated it stays so for larger n.
        if (!row.empty() && row.back() == samples.size()) {
          row.push_back(samples.size());
          continue;
        }
        row.push_back(
            greedy_separated_indices(table, action.space(), n, epsilons[k]).size());
      }
    }
  });
  return assemble_entropy_report(std::vector<double>(epsilons.begin(), epsilons.end()),
                                 std::move(raw), tail_window, samples.size());
}

namespace {

struct ArcNode {
  double t0 = 0.0, t1 = 1.0;
  Word trail;       // composite word carrying the seed arc to this arc
  Word separated;   // step * trail, moves the endpoints beyond e
  Word step;        // the separating word chosen at this node
  int parent = -1;
};

// Farthest-moving word of K_N for the pair; ties go to the earlier word.
std::optional<SeparationWitness> farthest_word(const Action& action,
                                               const Ball& kn, const Point& p,
                                               const Point& q, double e) {
  std::vector<Point> ip(kn.size()), iq(kn.size());
  ip[0] = p;
  iq[0] = q;
  std::size_t best = 0;
  double best_d = distance(action.space(), p, q);
  for (std::size_t w = 1; w < kn.size(); ++w) {
    const auto par = static_cast<std::size_t>(kn.parent[w]);
    ip[w] = action.apply(kn.head[w], ip[par]);
    iq[w] = action.apply(kn.head[w], iq[par]);
    const double d = distance(action.space(), ip[w], iq[w]);
    if (d > best_d) {
      best_d = d;
      best = w;
    }
  }
  if (!exceeds(best_d, e)) return std::nullopt;
  return SeparationWitness{kn.elements[best], kn.elements[best].length(), best_d};
}

}  // namespace

SeparatedFamily doubling_lower_bound(const Action& action, const Arc& seed_arc,
                                     double delta, double e, int N, int depth,
                                     const DoublingOptions& options) {
  if (!(delta > 0.0) || !(e > 0.0)) {
    throw ParameterError("delta and e must be positive");
  }
  if (N < 0 || depth < 0 || depth > 20) {
    throw ParameterError("need N >= 0 and 0 <= depth <= 20");
  }
  if (!(seed_arc.space == action.space())) {
    throw ParameterError("seed arc lives on a different space");
  }
  if (seed_arc.diameter() < delta) {
    throw ArcTooShort("seed arc diameter is below delta");
  }
  const Space& space = action.space();
  const GroupSpec& group = action.group();

  SeparatedFamily fam;
  fam.depth = depth;
  fam.e = e;
  fam.N = N;
  fam.threshold = e / 2.0;
  fam.radius = depth * N;

  if (depth == 0) {
    fam.points.push_back(seed_arc.at(0.0));
    fam.parameters.push_back(0.0);
    fam.trails.emplace_back();
    return fam;
  }

  const Ball kn = ball(group, N);
  std::vector<ArcNode> nodes{ArcNode{}};
  std::vector<std::size_t> level{0};
  for (int lv = 0; lv < depth; ++lv) {
    for (std::size_t id : level) {
      ArcNode& node = nodes[id];
      const Point p = apply_word(action, node.trail, seed_arc.at(node.t0));
      const Point q = apply_word(action, node.trail, seed_arc.at(node.t1));
      const auto w = farthest_word(action, kn, p, q, e);
      if (!w) {
        throw ConstructionFailure(
            "arc " + std::to_string(id) + " at level " + std::to_string(lv) +
            " (seed parameters [" + std::to_string(node.t0) + ", " +
            std::to_string(node.t1) + "], endpoint distance " +
            std::to_string(distance(space, p, q)) +
            ") has no word of length <= " + std::to_string(N) +
            " separating it beyond e");
      }
      node.step = w->word;
      node.separated = multiply(group, w->word, node.trail);
    }
    if (lv + 1 == depth) break;
    std::vector<std::size_t> next;
    for (std::size_t id : level) {
      const ArcNode node = nodes[id];
      const auto curve = [&](double t) {
        return apply_word(action, node.separated, seed_arc.at(t));
      };
      CurveSplit split{};
      try {
        split = split_curve(space, curve, node.t0, node.t1, delta, seed_arc.samples);
      } catch (const ArcTooShort& ex) {
        throw ArcTooShort("arc " + std::to_string(id) + " at level " +
                          std::to_string(lv) + ": " + ex.what());
      }
      ArcNode left;
      left.t0 = node.t0;
      left.t1 = split.first_end;
      left.trail = node.separated;
      left.parent = static_cast<int>(id);
      ArcNode right = left;
      right.t0 = split.second_begin;
      right.t1 = node.t1;
      nodes.push_back(left);
      next.push_back(nodes.size() - 1);
      nodes.push_back(right);
      next.push_back(nodes.size() - 1);
    }
    level.swap(next);
  }

  std::vector<std::size_t> owner;
  for (std::size_t id : level) {
    for (double t : {nodes[id].t0, nodes[id].t1}) {
      fam.points.push_back(seed_arc.at(t));
      fam.parameters.push_back(t);
      owner.push_back(id);
      std::vector<std::string> trail;
      for (int k = static_cast<int>(id); k >= 0; k = nodes[static_cast<std::size_t>(k)].parent) {
        trail.push_back(nodes[static_cast<std::size_t>(k)].step.to_string());
      }
      std::reverse(trail.begin(), trail.end());
      fam.trails.push_back(std::move(trail));
    }
  }

  // All-pairs re-check. Candidate witnesses: the lowest common ancestor's
  // separating word, then every construction word, then a bounded search.
  const std::size_t count = fam.points.size();
  const double threshold = fam.threshold;
  const int radius = fam.radius;
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
  auto separates = [&](const Word& w, const Point& a, const Point& b) {
    if (w.length() > radius) return false;
    return exceeds(distance(space, apply_word(action, w, a), apply_word(action, w, b)),
                   threshold);
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(count * (count - 1) / 2);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
  }
  std::atomic<std::size_t> verified{0};
  detail::parallel_for(pairs.size(), options.threads, [&](std::size_t b, std::size_t end) {
    std::size_t local = 0;
    for (std::size_t k = b; k < end; ++k) {
      const auto [i, j] = pairs[k];
      const Point& a = fam.points[i];
      const Point& c = fam.points[j];
      bool ok = separates(nodes[lca(owner[i], owner[j])].separated, a, c);
      for (std::size_t n = 0; !ok && n < nodes.size(); ++n) {
        ok = separates(nodes[n].separated, a, c);
      }
      if (!ok) {
        try {
          ok = is_separated(action, a, c, radius, threshold, options.pair_limits);
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
