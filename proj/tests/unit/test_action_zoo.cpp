#include <doctest.h>

#include <cmath>

#include "expanse/action_zoo.hpp"
#include "expanse/errors.hpp"

using namespace expanse;

namespace {

// Exact integer orbit of the cat map on lattice points k/q.
std::pair<long, long> cat_int(std::pair<long, long> v, long q) {
  return {((2 * v.first + v.second) % q + q) % q, ((v.first + v.second) % q + q) % q};
}

}  // namespace

TEST_CASE("cat map agrees with integer matrix arithmetic on a lattice") {
  const Action cat = make_cat_map();
  const long q = 97;
  std::pair<long, long> v{13, 58};
  Point p = torus_point(13.0 / q, 58.0 / q);
  for (int i = 0; i < 12; ++i) {
    v = cat_int(v, q);
    p = cat.apply({0, 1}, p);
    CHECK(distance(cat.space(), p, torus_point(double(v.first) / q, double(v.second) / q)) < 1e-9);
  }
}

TEST_CASE("rotation and Morse-Smale basics") {
  const Action rot = make_rotation(0.25);
  CHECK(apply_word(rot, parse_word(rot.group(), "a^3"), circle_point(0.5)).x() ==
        doctest::Approx(0.25));
  const Action ms = make_morse_smale(0.1);
  CHECK(ms.apply({0, 1}, circle_point(0.0)).x() == 0.0);
  CHECK(ms.apply({0, 1}, circle_point(0.25)).x() == doctest::Approx(0.35));
  CHECK(ms.apply({0, -1}, circle_point(0.35)).x() == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_morse_smale(0.2), ParameterError);
}

TEST_CASE("blown-up cat is the identity near the origin and the cat map far away") {
  const Action b = make_blown_up_cat(kBlowUpOuterRadius, kBlowUpInnerRadius);
  const Action cat = make_cat_map();
  const Point near = torus_point(0.01, 0.01);
  CHECK(b.apply({0, 1}, near) == near);
  const Point far = torus_point(0.4, 0.3);
  CHECK(distance(b.space(), b.apply({0, 1}, far), cat.apply({0, 1}, far)) < 1e-15);
  const Point mid = torus_point(0.07, -0.02);
  CHECK(distance(b.space(), b.apply({0, -1}, b.apply({0, 1}, mid)), mid) < 1e-9);
  CHECK(blowup::ramp(0.02, 0.15, 0.03) == 0.0);
  CHECK(blowup::ramp(0.2, 0.15, 0.03) == 1.0);
  CHECK_THROWS_AS(make_blown_up_cat(0.15, 0.1), ParameterError);
}

TEST_CASE("blown-up generator is injective on a fine grid") {
  const Action b = make_blown_up_cat(kBlowUpOuterRadius, kBlowUpInnerRadius);
  CHECK(grid_injectivity_margin(b.generators()[0], b.space(), 100) > 1e-6);
  // A constant map is caught.
  const Homeomorphism collapse("collapse", [](const Point&) { return Point{}; },
                               [](const Point& p) { return p; });
  CHECK(grid_injectivity_margin(collapse, Space::torus(), 20) == 0.0);
}

TEST_CASE("orbit tables match direct word application") {
  const Action a = make_example_31();
  const Ball k = ball(a.group(), 3);
  const auto pts = sample_grid(a.space(), 5);
  const OrbitTable t = orbit_table(a, k, pts, 2);
  for (std::size_t w = 0; w < k.size(); w += 7) {
    for (std::size_t i = 0; i < pts.size(); i += 3) {
      CHECK(distance(a.space(), t.image(w, i), apply_word(a, k.elements[w], pts[i])) < 1e-12);
    }
  }
}

TEST_CASE("named actions parse") {
  CHECK(make_action("example_32").rank() == 2);
  CHECK(make_action("rotation:0.1").space() == Space::circle());
  CHECK(make_action("translation:0.1,0.2").space() == Space::torus());
  CHECK(make_action("blown_cat:0.15,0.03").rank() == 1);
  CHECK_THROWS_AS(make_action("nope"), MalformedInput);
  CHECK_THROWS_AS(make_action("rotation:x"), MalformedInput);
}

TEST_CASE("conjugation by an isometry") {
  const Action cat = make_cat_map();
  const Action c = conjugate_action(cat, torus_swap_isometry());
  const Point p = torus_point(0.2, 0.1);
  // swap A swap = [[1,1],[1,2]]
  CHECK(distance(c.space(), c.apply({0, 1}, p), torus_point(0.3, 0.4)) < 1e-12);
}
