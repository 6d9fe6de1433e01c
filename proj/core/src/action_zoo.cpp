#include "expanse/action_zoo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "expanse/errors.hpp"
#include "parallel.hpp"

namespace expanse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxInverseIterations = 100;

Point cat_forward(const Point& p) {
  return torus_point(2.0 * p.x() + p.y(), p.x() + p.y());
}

Point cat_inverse(const Point& p) {
  return torus_point(p.x() - p.y(), 2.0 * p.y() - p.x());
}

double norm(Vec2 v) { return std::hypot(v[0], v[1]); }

// Unit eigenvector of [[2,1],[1,1]] for the expanding eigenvalue.
struct CatEigen {
  double ux, uy;
  CatEigen() {
    const double vx = 1.0, vy = kCatEigenvalue - 2.0;
    const double n = std::hypot(vx, vy);
    ux = vx / n;
    uy = vy / n;
  }
};

// A^t for real t: lambda^t P + lambda^-t (I - P).
Vec2 cat_power(Vec2 v, double t) {
  static const CatEigen e;
  const double along = v[0] * e.ux + v[1] * e.uy;
  const double across_x = v[0] - along * e.ux;
  const double across_y = v[1] - along * e.uy;
  const double up = std::pow(kCatEigenvalue, t);
  const double down = 1.0 / up;
  return {up * along * e.ux + down * across_x,
          up * along * e.uy + down * across_y};
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw MalformedInput("cannot parse " + std::string(what) + " from '" +
                         std::string(text) + "'");
  }
  return v;
}

std::pair<double, double> parse_pair(std::string_view text,
                                     std::string_view what) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw MalformedInput(std::string(what) + " needs two comma separated values");
  }
  return {parse_double(text.substr(0, comma), what),
          parse_double(text.substr(comma + 1), what)};
}

}  // namespace

Homeomorphism::Homeomorphism(std::string name, Fn forward, Fn inverse)
    : name_(std::move(name)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)) {}

Homeomorphism Homeomorphism::identity() {
  auto id = [](const Point& p) { return p; };
  return Homeomorphism("id", id, id);
}

Homeomorphism Homeomorphism::inverted() const {
  return Homeomorphism(name_ + "^-1", inverse_, forward_);
}

Action::Action(std::string name, GroupSpec group, Space space,
               std::vector<Homeomorphism> generators)
    : name_(std::move(name)),
      group_(group),
      space_(space),
      generators_(std::move(generators)) {
  if (static_cast<int>(generators_.size()) != group_.rank) {
    throw ParameterError("action " + name_ + " has " +
                         std::to_string(generators_.size()) +
                         " generators for a rank " +
                         std::to_string(group_.rank) + " group");
  }
}

Point apply_word(const Action& action, const Word& w, const Point& x) {
  Point p = x;
  const auto letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    p = action.apply(*it, p);
  }
  return p;
}

OrbitTable::OrbitTable(Ball ball, std::vector<Point> base,
                       std::vector<Point> images)
    : ball_(std::move(ball)), base_(std::move(base)), images_(std::move(images)) {}

OrbitTable orbit_table(const Action& action, const Ball& ball,
                       std::span<const Point> points, int threads) {
  if (!(ball.group == action.group())) {
    throw ParameterError("ball and action use different groups");
  }
  const std::size_t words = ball.size();
  const std::size_t n = points.size();
  if (n != 0 && words > kMaxOrbitEntries / n) {
    throw CapacityError("orbit table of " + std::to_string(words) +
                        " words x " + std::to_string(n) +
                        " points exceeds the entry cap");
  }
  std::vector<Point> images(words * n);
  detail::parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Point* row = images.data() + i * words;
      row[0] = points[i];
      for (std::size_t w = 1; w < words; ++w) {
        row[w] = action.apply(ball.head[w],
                              row[static_cast<std::size_t>(ball.parent[w])]);
      }
    }
  });
  return OrbitTable(ball, std::vector<Point>(points.begin(), points.end()),
                    std::move(images));
}

Action make_rotation(double alpha) {
  Homeomorphism rot(
      "rotation",
      [alpha](const Point& p) { return circle_point(p.x() + alpha); },
      [alpha](const Point& p) { return circle_point(p.x() - alpha); });
  return Action("rotation:" + std::to_string(alpha),
                GroupSpec::free_abelian(1), Space::circle(), {rot});
}

Action make_morse_smale(double a) {
  if (!(a > 0.0 && a < 1.0 / kTwoPi)) {
    throw ParameterError("Morse-Smale amplitude must lie in (0, 1/(2 pi)), got " +
                         std::to_string(a));
  }
  auto forward = [a](const Point& p) {
    return circle_point(p.x() + a * std::sin(kTwoPi * p.x()));
  };
  // Lift equation x + a sin(2 pi x) = y has its root in [y - a, y + a] and
  // the lift is strictly increasing, so safeguarded Newton always converges.
  auto inverse = [a](const Point& p) {
    const double y = p.x();
    double lo = y - a, hi = y + a;
    double x = y - a * std::sin(kTwoPi * y);
    for (int it = 0; it < kMaxInverseIterations; ++it) {
      const double f = x + a * std::sin(kTwoPi * x) - y;
      if (f > 0) hi = x; else lo = x;
      const double df = 1.0 + a * kTwoPi * std::cos(kTwoPi * x);
      double next = x - f / df;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::fabs(next - x) <= 1e-16 || hi - lo <= 1e-16) {
        x = next;
        break;
      }
      x = next;
    }
    return circle_point(x);
  };
  return Action("morse_smale:" + std::to_string(a), GroupSpec::free_abelian(1),
                Space::circle(),
                {Homeomorphism("morse_smale", forward, inverse)});
}

Action make_cat_map() {
  return Action("cat", GroupSpec::free_abelian(1), Space::torus(),
                {Homeomorphism("cat", cat_forward, cat_inverse)});
}

namespace blowup {

double ramp(double rho, double outer, double inner) {
  if (rho <= inner) return 0.0;
  if (rho >= outer) return 1.0;
  const double u = std::log(rho / inner) / std::log(outer / inner);
  return u * u * (3.0 - 2.0 * u);
}

Vec2 lift_map(Vec2 v, double outer, double inner) {
  const double s = ramp(norm(v), outer, inner);
  if (s == 0.0) return v;
  if (s == 1.0) return {2.0 * v[0] + v[1], v[0] + v[1]};
  return cat_power(v, s);
}

}  // namespace blowup

Action make_blown_up_cat(double outer, double inner) {
  if (!(inner > 0.0 && inner < outer && outer <= 0.2)) {
    throw ParameterError("blow-up radii need 0 < r1 < r0 <= 0.2");
  }
  // Radial stretching must not fold the annulus: the Jacobian determinant is
  // det(A^s) (1 + rho s'(rho) <u, log(A) u>) and max rho s' = 1.5/log(r0/r1).
  if (1.5 * std::log(kCatEigenvalue) / std::log(outer / inner) >= 1.0) {
    throw ParameterError(
        "blow-up ramp too steep: need log(r0/r1) > 1.5 log((3+sqrt5)/2)");
  }
  const Point origin{};
  const Space torus = Space::torus();
  auto forward = [=](const Point& p) {
    const Vec2 v = displacement(torus, origin, p);
    const double rho = norm(v);
    if (rho >= outer) return cat_forward(p);
    if (rho <= inner) return p;
    return wrap(torus, blowup::lift_map(v, outer, inner));
  };
  auto inverse = [=](const Point& q) {
    const Point pre = cat_inverse(q);
    const Vec2 l0 = displacement(torus, origin, pre);
    if (norm(l0) >= outer) return pre;
    // q lies in the image of the disc; its lift there is A l0. Solve
    // |A^{-s(rho)} Y| = rho for rho, then x = A^{-s(rho)} Y.
    const Vec2 target{2.0 * l0[0] + l0[1], l0[0] + l0[1]};
    if (norm(target) <= inner) return wrap(torus, target);
    double lo = 0.0, hi = outer;
    for (int it = 0; it < kMaxInverseIterations && hi - lo > 1e-17; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Vec2 x = cat_power(target, -blowup::ramp(mid, outer, inner));
      if (norm(x) - mid > 0.0) lo = mid; else hi = mid;
    }
    const double rho = 0.5 * (lo + hi);
    const Vec2 x = cat_power(target, -blowup::ramp(rho, outer, inner));
    const Vec2 back = blowup::lift_map(x, outer, inner);
    if (std::hypot(back[0] - target[0], back[1] - target[1]) > 1e-9) {
      throw EvaluationError("blown-up cat inverse did not converge");
    }
    return wrap(torus, x);
  };
  return Action("blown_cat:" + std::to_string(outer) + "," + std::to_string(inner),
                GroupSpec::free_abelian(1), torus,
                {Homeomorphism("blown_cat", forward, inverse)});
}

double grid_injectivity_margin(const Homeomorphism& h, const Space& space,
                               int resolution) {
  const std::vector<Point> grid = sample_grid(space, resolution);
  const int r = resolution;
  const int cells_y = space.dim() == 2 ? r : 1;
  std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(r * cells_y));
  std::vector<Point> images(grid.size());
  auto cell_of = [&](double v) {
    return std::min(r - 1, static_cast<int>(std::floor(v * r)));
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    images[i] = h.forward(grid[i]);
    const int cx = cell_of(images[i].x());
    const int cy = space.dim() == 2 ? cell_of(images[i].y()) : 0;
    cells[static_cast<std::size_t>(cy * r + cx)].push_back(i);
  }
  double margin = 1.0 / r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int cx = cell_of(images[i].x());
    const int cy = space.dim() == 2 ? cell_of(images[i].y()) : 0;
    for (int dy = (space.dim() == 2 ? -1 : 0); dy <= (space.dim() == 2 ? 1 : 0); ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = (cx + dx + r) % r;
        const int ny = (cy + dy + cells_y) % cells_y;
        for (std::size_t j : cells[static_cast<std::size_t>(ny * r + nx)]) {
          if (j <= i) continue;
          margin = std::min(margin, distance(space, images[i], images[j]));
        }
      }
    }
  }
  return margin;
}

Action make_torus_translation(double bx, double by) {
  return Action("translation", GroupSpec::free_abelian(1), Space::torus(),
                {torus_translation_isometry(bx, by)});
}

Action make_identity_action(const Space& space) {
  return Action(space.dim() == 1 ? "identity" : "identity_torus",
                GroupSpec::free_abelian(1), space, {Homeomorphism::identity()});
}

Action make_example_31() {
  const Action g = make_blown_up_cat(kBlowUpOuterRadius, kBlowUpInnerRadius);
  Homeomorphism f = torus_translation_isometry(kTranslationX, kTranslationY);
  return Action("example_31", GroupSpec::free_group(2), Space::torus(),
                {f, g.generators()[0]});
}

Action make_example_32() {
  const Action rot = make_rotation(kGoldenRotation);
  const Action ms = make_morse_smale(kMorseSmaleAmplitude);
  return Action("example_32", GroupSpec::free_group(2), Space::circle(),
                {rot.generators()[0], ms.generators()[0]});
}

Action conjugate_action(const Action& action, const Homeomorphism& h) {
  std::vector<Homeomorphism> gens;
  for (const Homeomorphism& g : action.generators()) {
    gens.emplace_back(
        h.name() + "^-1 " + g.name() + " " + h.name(),
        [g, h](const Point& p) { return h.inverse(g.forward(h.forward(p))); },
        [g, h](const Point& p) { return h.inverse(g.inverse(h.forward(p))); });
  }
  return Action("conj(" + action.name() + "," + h.name() + ")", action.group(),
                action.space(), std::move(gens));
}

Homeomorphism circle_rotation_isometry(double beta) {
  return Homeomorphism(
      "R" + std::to_string(beta),
      [beta](const Point& p) { return circle_point(p.x() + beta); },
      [beta](const Point& p) { return circle_point(p.x() - beta); });
}

Homeomorphism circle_reflection_isometry() {
  auto flip = [](const Point& p) { return circle_point(-p.x()); };
  return Homeomorphism("reflect", flip, flip);
}

Homeomorphism torus_translation_isometry(double bx, double by) {
  return Homeomorphism(
      "T(" + std::to_string(bx) + "," + std::to_string(by) + ")",
      [bx, by](const Point& p) { return torus_point(p.x() + bx, p.y() + by); },
      [bx, by](const Point& p) { return torus_point(p.x() - bx, p.y() - by); });
}

Homeomorphism torus_swap_isometry() {
  auto swap = [](const Point& p) { return Point{{p.y(), p.x()}}; };
  return Homeomorphism("swap", swap, swap);
}

Action make_action(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "example_31" && args.empty()) return make_example_31();
  if (head == "example_32" && args.empty()) return make_example_32();
  if (head == "cat" && args.empty()) return make_cat_map();
  if (head == "identity" && args.empty()) return make_identity_action(Space::circle());
  if (head == "identity_torus" && args.empty()) {
    return make_identity_action(Space::torus());
  }
  if (head == "rotation") {
    return make_rotation(args.empty() ? kGoldenRotation
                                      : parse_double(args, "rotation angle"));
  }
  if (head == "morse_smale") {
    return make_morse_smale(args.empty() ? kMorseSmaleAmplitude
                                         : parse_double(args, "amplitude"));
  }
  if (head == "blown_cat") {
    if (args.empty()) return make_blown_up_cat(kBlowUpOuterRadius, kBlowUpInnerRadius);
    const auto [r0, r1] = parse_pair(args, "blow-up radii");
    return make_blown_up_cat(r0, r1);
  }
  if (head == "translation") {
    if (args.empty()) return make_torus_translation(kTranslationX, kTranslationY);
    const auto [bx, by] = parse_pair(args, "translation vector");
    return make_torus_translation(bx, by);
  }
  throw MalformedInput("unknown action '" + std::string(spec) + "'");
}

}  // namespace expanse
