#include "expanse/phase_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expanse/errors.hpp"

namespace expanse {

namespace {

constexpr int kBisectionSteps = 64;
constexpr std::size_t kMaxCurveSamples = 1u << 18;

double coord_gap(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace

double Space::diameter() const {
  return dim_ == 1 ? 0.5 : std::sqrt(0.5);
}

double wrap_unit(double v) {
  double w = v - std::floor(v);
  // v slightly below an integer can round up to exactly 1.
  if (w >= 1.0) w = 0.0;
  return w;
}

Point wrap(const Space& space, Vec2 lift) {
  Point p;
  p.coords[0] = wrap_unit(lift[0]);
  p.coords[1] = space.dim() == 2 ? wrap_unit(lift[1]) : 0.0;
  return p;
}

double distance(const Space& space, const Point& p, const Point& q) {
  const double dx = coord_gap(p.coords[0], q.coords[0]);
  if (space.dim() == 1) return dx;
  const double dy = coord_gap(p.coords[1], q.coords[1]);
  return std::sqrt(dx * dx + dy * dy);
}

Vec2 displacement(const Space& space, const Point& p, const Point& q) {
  Vec2 d{0.0, 0.0};
  for (int i = 0; i < space.dim(); ++i) {
    double v = q.coords[static_cast<std::size_t>(i)] -
               p.coords[static_cast<std::size_t>(i)];
    v -= std::round(v);
    d[static_cast<std::size_t>(i)] = v;
  }
  return d;
}

std::vector<Point> sample_grid(const Space& space, int resolution) {
  if (resolution < 2) {
    throw ParameterError("grid resolution must be >= 2, got " +
                         std::to_string(resolution));
  }
  std::vector<Point> out;
  const double h = 1.0 / resolution;
  if (space.dim() == 1) {
    out.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) out.push_back(circle_point(i * h));
  } else {
    out.reserve(static_cast<std::size_t>(resolution) *
                static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        out.push_back(torus_point(i * h, j * h));
      }
    }
  }
  return out;
}

Arc Arc::make(const Space& space, Point start, Vec2 lift, int samples) {
  if (samples < 64) {
    throw ParameterError("arcs need at least 64 samples, got " +
                         std::to_string(samples));
  }
  Arc a;
  a.space = space;
  a.start = wrap(space, start.coords);
  a.lift = lift;
  if (space.dim() == 1) a.lift[1] = 0.0;
  a.samples = samples;
  return a;
}

Point Arc::at(double t) const {
  return wrap(space, {start.coords[0] + t * lift[0],
                      start.coords[1] + t * lift[1]});
}

std::vector<Point> Arc::sample_points() const {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(samples) + 1);
  for (int k = 0; k <= samples; ++k) {
    out.push_back(at(static_cast<double>(k) / samples));
  }
  return out;
}

double Arc::diameter() const { return sampled_diameter(space, sample_points()); }

Arc Arc::sub(double t0, double t1) const {
  Arc a = *this;
  a.start = at(t0);
  a.lift = {lift[0] * (t1 - t0), lift[1] * (t1 - t0)};
  return a;
}

double sampled_diameter(const Space& space, const std::vector<Point>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, distance(space, pts[i], pts[j]));
    }
  }
  return best;
}

bool diameter_at_least(const Space& space, const std::vector<Point>& pts,
                       double bound) {
  if (pts.empty()) return bound <= 0.0;
  for (const Point& p : pts) {
    if (distance(space, pts.front(), p) >= bound) return true;
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (distance(space, pts[i], pts[j]) >= bound) return true;
    }
  }
  return false;
}

CurveSplit split_curve(const Space& space,
                       const std::function<Point(double)>& curve, double t0,
                       double t1, double delta, int base_samples) {
  if (!(delta > 0.0)) throw ParameterError("split threshold must be positive");
  if (base_samples < 1) base_samples = 1;

  std::vector<double> ts;
  std::vector<Point> pts;
  for (int k = 0; k <= base_samples; ++k) {
    const double t = t0 + (t1 - t0) * k / base_samples;
    ts.push_back(t);
    pts.push_back(curve(t));
  }
  // Refine where consecutive images are far apart.
  const double max_step = delta / 4.0;
  bool refined = true;
  while (refined && ts.size() < kMaxCurveSamples) {
    refined = false;
    std::vector<double> nts;
    std::vector<Point> npts;
    nts.reserve(ts.size() * 2);
    npts.reserve(ts.size() * 2);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      nts.push_back(ts[i]);
      npts.push_back(pts[i]);
      if (distance(space, pts[i], pts[i + 1]) > max_step &&
          ts[i + 1] - ts[i] > 1e-15 * std::max(1.0, std::fabs(ts[i]))) {
        const double mid = 0.5 * (ts[i] + ts[i + 1]);
        nts.push_back(mid);
        npts.push_back(curve(mid));
        refined = true;
      }
    }
    nts.push_back(ts.back());
    npts.push_back(pts.back());
    ts.swap(nts);
    pts.swap(npts);
  }

  if (!diameter_at_least(space, pts, 2.0 * delta)) {
    throw ArcTooShort("arc diameter is below 2*delta = " +
                      std::to_string(2.0 * delta));
  }

  const Point head = pts.front();
  const Point tail = pts.back();
  std::size_t i = 1;
  while (i < pts.size() && distance(space, head, pts[i]) < delta) ++i;
  std::size_t j = pts.size() - 1;
  while (j > 0 && distance(space, pts[j - 1], tail) < delta) --j;
  if (i >= pts.size() || j == 0) {
    throw ArcTooShort("no sample at distance delta from an endpoint");
  }
  --j;  // pts[j] is the last sample with d(pts[j], tail) >= delta

  double lo = ts[i - 1], hi = ts[i];
  for (int k = 0; k < kBisectionSteps; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (distance(space, head, curve(mid)) >= delta) hi = mid; else lo = mid;
  }
  const double first_end = hi;

  lo = ts[j];
  hi = ts[j + 1];
  for (int k = 0; k < kBisectionSteps; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (distance(space, curve(mid), tail) >= delta) lo = mid; else hi = mid;
  }
  const double second_begin = lo;

  if (!(first_end < second_begin)) {
    throw ArcTooShort("subarcs of diameter delta would overlap");
  }
  return {first_end, second_begin};
}

ArcSplit split_arc(const Arc& arc, double delta) {
  if (arc.diameter() < 2.0 * delta) {
    throw ArcTooShort("arc diameter " + std::to_string(arc.diameter()) +
                      " is below 2*delta = " + std::to_string(2.0 * delta));
  }
  const auto split = split_curve(
      arc.space, [&arc](double t) { return arc.at(t); }, 0.0, 1.0, delta,
      arc.samples);
  ArcSplit out;
  out.first = arc.sub(0.0, split.first_end);
  out.second = arc.sub(split.second_begin, 1.0);
  out.first_inner = arc.at(split.first_end);
  out.second_inner = arc.at(split.second_begin);
  return out;
}

}  // namespace expanse
