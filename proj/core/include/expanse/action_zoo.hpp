#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expanse/group_words.hpp"
#include "expanse/phase_spaces.hpp"

namespace expanse {

// An invertible self-map with an exact (or numerically converged) inverse.
class Homeomorphism {
 public:
  using Fn = std::function<Point(const Point&)>;

  Homeomorphism(std::string name, Fn forward, Fn inverse);

  static Homeomorphism identity();

  const std::string& name() const { return name_; }
  Point forward(const Point& p) const { return forward_(p); }
  Point inverse(const Point& p) const { return inverse_(p); }
  Point apply(const Point& p, int sign) const {
    return sign > 0 ? forward_(p) : inverse_(p);
  }
  Homeomorphism inverted() const;

 private:
  std::string name_;
  Fn forward_;
  Fn inverse_;
};

// A finitely generated group acting on the circle or torus: generator i of
// the group acts by generators()[i]. Words act by right-to-left composition,
// so the cocycle identity holds by construction.
class Action {
 public:
  Action(std::string name, GroupSpec group, Space space,
         std::vector<Homeomorphism> generators);

  const std::string& name() const { return name_; }
  const GroupSpec& group() const { return group_; }
  const Space& space() const { return space_; }
  const std::vector<Homeomorphism>& generators() const { return generators_; }
  int rank() const { return group_.rank; }

  Point apply(Letter l, const Point& x) const {
    return generators_[l.gen].apply(x, l.sign);
  }

 private:
  std::string name_;
  GroupSpec group_;
  Space space_;
  std::vector<Homeomorphism> generators_;
};

Point apply_word(const Action& action, const Word& w, const Point& x);

// Images of base points under every ball element, built by one generator
// application per entry from the parent element's image.
class OrbitTable {
 public:
  OrbitTable(Ball ball, std::vector<Point> base, std::vector<Point> images);

  const Ball& ball() const { return ball_; }
  std::size_t word_count() const { return ball_.size(); }
  std::size_t point_count() const { return base_.size(); }
  const std::vector<Point>& base_points() const { return base_; }

  const Point& image(std::size_t word, std::size_t point) const {
    return images_[point * ball_.size() + word];
  }
  // All word images of one base point, in ball order.
  std::span<const Point> orbit(std::size_t point) const {
    return std::span<const Point>(images_).subspan(point * ball_.size(),
                                                   ball_.size());
  }

 private:
  Ball ball_;
  std::vector<Point> base_;
  std::vector<Point> images_;  // point-major
};

// Largest table orbit_table() will allocate (entries = words x points).
inline constexpr std::size_t kMaxOrbitEntries = std::size_t{1} << 25;

OrbitTable orbit_table(const Action& action, const Ball& ball,
                       std::span<const Point> points, int threads = 1);

// Smallest distance between images of distinct points of the resolution-r
// sample grid. Only pairs landing in neighbouring cells of width 1/r are
// compared, so a result equal to 1/r means "at least 1/r". Zero means the
// map is not injective on the grid.
double grid_injectivity_margin(const Homeomorphism& h, const Space& space,
                               int resolution);

// Constants used by the named examples.
inline constexpr double kGoldenRotation = 0.61803398874989484820;
inline constexpr double kMorseSmaleAmplitude = 0.1;
inline constexpr double kBlowUpOuterRadius = 0.15;
inline constexpr double kBlowUpInnerRadius = 0.03;
inline constexpr double kTranslationX = 0.41421356237309504880;  // sqrt(2)-1
inline constexpr double kTranslationY = 0.73205080756887729353;  // sqrt(3)-1
// Leading eigenvalue (3+sqrt(5))/2 of [[2,1],[1,1]].
inline constexpr double kCatEigenvalue = 2.61803398874989484820;

Action make_rotation(double alpha);
Action make_morse_smale(double amplitude);
Action make_cat_map();
Action make_blown_up_cat(double outer_radius, double inner_radius);
Action make_torus_translation(double bx, double by);
// Rank-1 action whose generator is the identity map.
Action make_identity_action(const Space& space);

// Torus, free group of rank 2: translation by (sqrt(2)-1, sqrt(3)-1) and the
// blown-up cat map.
Action make_example_31();
// Circle, free group of rank 2: golden rotation and the Morse-Smale map.
Action make_example_32();

// Generators replaced by h^-1 o gen o h.
Action conjugate_action(const Action& action, const Homeomorphism& h);

Homeomorphism circle_rotation_isometry(double beta);
Homeomorphism circle_reflection_isometry();
Homeomorphism torus_translation_isometry(double bx, double by);
Homeomorphism torus_swap_isometry();

// Named actions as written in experiment configs: "example_31",
// "example_32", "cat", "identity", "identity_torus", "rotation",
// "rotation:<alpha>", "morse_smale:<a>", "blown_cat:<r0>,<r1>",
// "translation:<bx>,<by>". Throws MalformedInput on unknown names.
Action make_action(std::string_view spec);

// Blow-up surgery pieces, exposed for tests.
namespace blowup {
// Ramp s(rho): 0 for rho <= inner, 1 for rho >= outer, cubic smoothstep in
// log(rho) between.
double ramp(double rho, double outer, double inner);
// Lift of the blown-up map near the fixed point: A^{s(|v|)} v.
Vec2 lift_map(Vec2 v, double outer, double inner);
}  // namespace blowup

}  // namespace expanse
