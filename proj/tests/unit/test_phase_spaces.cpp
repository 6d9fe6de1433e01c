#include <doctest.h>

#include <cmath>

#include "expanse/errors.hpp"
#include "expanse/phase_spaces.hpp"

using namespace expanse;

TEST_CASE("circle distance wraps around") {
  const Space c = Space::circle();
  CHECK(distance(c, circle_point(0.05), circle_point(0.95)) == doctest::Approx(0.1));
  CHECK(distance(c, circle_point(0.0), circle_point(0.5)) == doctest::Approx(0.5));
  CHECK(circle_point(-0.25).x() == doctest::Approx(0.75));
  CHECK(circle_point(1.0).x() == 0.0);
}

TEST_CASE("torus distance is the flat quotient metric") {
  const Space t = Space::torus();
  CHECK(distance(t, torus_point(0.9, 0.1), torus_point(0.1, 0.9)) ==
        doctest::Approx(std::sqrt(0.08)));
  CHECK(t.diameter() == doctest::Approx(std::sqrt(0.5)));
  const Vec2 d = displacement(t, torus_point(0.9, 0.5), torus_point(0.1, 0.4));
  CHECK(d[0] == doctest::Approx(0.2));
  CHECK(d[1] == doctest::Approx(-0.1));
}

TEST_CASE("sample grids") {
  CHECK(sample_grid(Space::circle(), 10).size() == 10);
  const auto g = sample_grid(Space::torus(), 4);
  REQUIRE(g.size() == 16);
  CHECK(g[1].x() == 0.0);
  CHECK(g[1].y() == doctest::Approx(0.25));
  CHECK(g[4].x() == doctest::Approx(0.25));
  CHECK_THROWS_AS(sample_grid(Space::circle(), 1), ParameterError);
}

TEST_CASE("arcs and sub-arcs") {
  const Arc a = Arc::make(Space::circle(), circle_point(0.9), {0.3, 0.0});
  CHECK(a.at(1.0).x() == doctest::Approx(0.2));
  CHECK(a.diameter() == doctest::Approx(0.3));
  const Arc s = a.sub(0.5, 1.0);
  CHECK(s.at(0.0).x() == doctest::Approx(0.05));
  CHECK(a.sample_points().size() == 65);
}

TEST_CASE("split_arc yields two disjoint pieces of diameter at least delta") {
  const Arc a = Arc::make(Space::circle(), circle_point(0.0), {0.4, 0.0}, 128);
  const ArcSplit s = split_arc(a, 0.1);
  CHECK(s.first.diameter() >= 0.1 - 1e-12);
  CHECK(s.second.diameter() >= 0.1 - 1e-12);
  CHECK(distance(Space::circle(), a.at(0.0), s.first_inner) >= 0.1 - 1e-12);
  CHECK(s.first.at(1.0).x() < s.second.at(0.0).x());
  CHECK_THROWS_AS(split_arc(a, 0.25), ArcTooShort);
}

TEST_CASE("split_curve locates crossings by bisection") {
  auto curve = [](double t) { return circle_point(0.3 * t * t); };
  const CurveSplit s = split_curve(Space::circle(), curve, 0.0, 1.0, 0.075, 16);
  CHECK(0.3 * s.first_end * s.first_end == doctest::Approx(0.075).epsilon(1e-6));
  CHECK(0.3 - 0.3 * s.second_begin * s.second_begin == doctest::Approx(0.075).epsilon(1e-6));
}

TEST_CASE("sampled diameter") {
  const std::vector<Point> pts{circle_point(0.1), circle_point(0.3), circle_point(0.95)};
  CHECK(sampled_diameter(Space::circle(), pts) == doctest::Approx(0.35));
  CHECK(diameter_at_least(Space::circle(), pts, 0.3));
  CHECK_FALSE(diameter_at_least(Space::circle(), pts, 0.4));
}
