#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace expanse {

// The circle R/Z (dim 1) or the flat torus R^2/Z^2 (dim 2).
class Space {
 public:
  static Space circle() { return Space(1); }
  static Space torus() { return Space(2); }

  int dim() const { return dim_; }
  // Largest possible distance: 1/2 on the circle, sqrt(2)/2 on the torus.
  double diameter() const;
  std::string name() const { return dim_ == 1 ? "circle" : "torus"; }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  explicit Space(int dim) : dim_(dim) {}
  int dim_ = 1;
};

using Vec2 = std::array<double, 2>;

// Canonical coordinates in [0,1). On the circle coords[1] is always 0.
struct Point {
  Vec2 coords{0.0, 0.0};

  double x() const { return coords[0]; }
  double y() const { return coords[1]; }

  friend bool operator==(const Point&, const Point&) = default;
};

double wrap_unit(double v);
Point wrap(const Space& space, Vec2 lift);
inline Point circle_point(double x) { return Point{{wrap_unit(x), 0.0}}; }
inline Point torus_point(double x, double y) {
  return Point{{wrap_unit(x), wrap_unit(y)}};
}

// Flat quotient metric: per-coordinate min(|d|, 1-|d|), Euclidean norm.
double distance(const Space& space, const Point& p, const Point& q);

// Shortest lift displacement q - p, each coordinate in [-1/2, 1/2].
Vec2 displacement(const Space& space, const Point& p, const Point& q);

// r equally spaced circle points, or r*r torus points in row-major order.
std::vector<Point> sample_grid(const Space& space, int resolution);

// A segment of the universal cover projected to the space:
// t in [0,1] maps to wrap(start + t * lift). Its samples are the m+1
// parameters k/m.
struct Arc {
  Space space = Space::circle();
  Point start;
  Vec2 lift{0.0, 0.0};
  int samples = 64;

  static Arc make(const Space& space, Point start, Vec2 lift, int samples = 64);

  Point at(double t) const;
  std::vector<Point> sample_points() const;
  double diameter() const;
  // Sub-arc over parameters [t0, t1].
  Arc sub(double t0, double t1) const;
};

struct ArcSplit {
  Arc first;
  Arc second;
  Point first_inner;   // far end of `first`, at distance >= delta from arc(0)
  Point second_inner;  // near end of `second`, at distance >= delta from arc(1)
};

// Splits into two disjoint subarcs of diameter >= delta. Throws ArcTooShort
// when the sampled diameter is below 2*delta or the pieces would overlap.
ArcSplit split_arc(const Arc& arc, double delta);

// The same construction for any continuous curve on [t0, t1]. Sampling is
// refined until consecutive images are closer than delta/4 (or the point
// budget runs out), then the crossings are located by bisection.
struct CurveSplit {
  double first_end;     // smallest t with d(curve(t0), curve(t)) >= delta
  double second_begin;  // largest t with d(curve(t), curve(t1)) >= delta
};
CurveSplit split_curve(const Space& space,
                       const std::function<Point(double)>& curve, double t0,
                       double t1, double delta, int base_samples);

// Max pairwise distance over a point list.
double sampled_diameter(const Space& space, const std::vector<Point>& pts);
bool diameter_at_least(const Space& space, const std::vector<Point>& pts,
                       double bound);

}  // namespace expanse
