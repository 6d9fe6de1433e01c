#include "expanse/expansivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "expanse/errors.hpp"
#include "parallel.hpp"

namespace expanse {

namespace {

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ScanReport expansivity_scan(const Action& action,
                            std::span<const PointPair> pairs, double e,
                            int n_max, const ScanOptions& options) {
  if (!(e > 0.0)) throw ParameterError("expansivity threshold must be positive");
  if (n_max < 0) throw ParameterError("n_max must be non-negative");
  ScanReport r;
  r.e = e;
  r.n_max = n_max;
  r.pairs_tested = pairs.size();
  r.radii.resize(pairs.size());
  detail::parallel_for(pairs.size(), options.threads, [&](std::size_t b, std::size_t end) {
    for (std::size_t i = b; i < end; ++i) {
      r.radii[i] = min_separating_radius(action, pairs[i].x, pairs[i].y, e, n_max,
                                         options.limits);
    }
  });
  if (pairs.empty()) {
    r.n_observed = 0;
    return r;
  }
  r.delta = distance(action.space(), pairs[0].x, pairs[0].y);
  int worst = -1;
  bool unbounded = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    r.delta = std::min(r.delta, distance(action.space(), pairs[i].x, pairs[i].y));
    if (!r.radii[i]) {
      if (!unbounded) {
        unbounded = true;
        r.worst_index = i;
      }
      continue;
    }
    ++r.pairs_separated;
    if (!unbounded && *r.radii[i] > worst) {
      worst = *r.radii[i];
      r.worst_index = i;
    }
  }
  r.separated_fraction =
      static_cast<double>(r.pairs_separated) / static_cast<double>(pairs.size());
  if (!unbounded) r.n_observed = worst;
  r.worst_pair = pairs[*r.worst_index];
  r.worst_radius = r.radii[*r.worst_index];
  return r;
}

std::optional<int> uniform_bound(const Action& action, double delta, double e,
                                 std::span<const PointPair> pairs, int n_max,
                                 const ScanOptions& options) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  std::vector<PointPair> qualifying;
  for (const PointPair& p : pairs) {
    if (at_least(distance(action.space(), p.x, p.y), delta)) qualifying.push_back(p);
  }
  return expansivity_scan(action, qualifying, e, n_max, options).n_observed;
}

std::vector<ProfileEntry> expansivity_profile(const Action& action,
                                              std::span<const double> e_list,
                                              double delta,
                                              std::span<const PointPair> pairs,
                                              int n_max,
                                              const ScanOptions& options) {
  std::vector<ProfileEntry> out;
  for (double e : e_list) {
    out.push_back({e, uniform_bound(action, delta, e, pairs, n_max, options)});
  }
  return out;
}

std::vector<PointPair> grid_pairs(const Space& space, int resolution,
                                  double min_distance) {
  const std::vector<Point> grid = sample_grid(space, resolution);
  std::vector<PointPair> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      if (at_least(distance(space, grid[i], grid[j]), min_distance)) {
        out.push_back({grid[i], grid[j]});
      }
    }
  }
  return out;
}

std::vector<PointPair> random_pairs(const Space& space, std::size_t count,
                                    double min_distance, double max_distance,
                                    std::uint64_t seed) {
  if (!(min_distance > 0.0) || max_distance < min_distance || max_distance > 0.5) {
    throw ParameterError("need 0 < min_distance <= max_distance <= 1/2");
  }
  std::mt19937_64 rng(seed);
  std::vector<PointPair> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    Point x;
    x.coords[0] = unit_double(rng);
    if (space.dim() == 2) x.coords[1] = unit_double(rng);
    const double d = min_distance + (max_distance - min_distance) * unit_double(rng);
    Vec2 u{1.0, 0.0};
    if (space.dim() == 2) {
      const double angle = 2.0 * std::numbers::pi * unit_double(rng);
      u = {std::cos(angle), std::sin(angle)};
    }
    const Point y = wrap(space, {x.x() + d * u[0], x.y() + d * u[1]});
    const Point z = wrap(space, {x.x() - d * u[0], x.y() - d * u[1]});
    out.push_back({x, y});
    out.push_back({x, z});
  }
  return out;
}

}  // namespace expanse
