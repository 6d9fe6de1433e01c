#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>

#include "expanse/errors.hpp"
#include "expanse/separation_entropy.hpp"

using namespace expanse;

namespace {

// Greedy packing on the integer circle Z/r with separation |i - j| > k.
std::size_t integer_circle_packing(int r, int k) {
  std::vector<int> kept;
  for (int i = 0; i < r; ++i) {
    bool ok = true;
    for (int j : kept) {
      const int d = std::abs(i - j);
      if (std::min(d, r - d) <= k) ok = false;
    }
    if (ok) kept.push_back(i);
  }
  return kept.size();
}

using IMat = std::array<long, 4>;
IMat mul(const IMat& a, const IMat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Smallest |n| with |A^n v| > eps for the displacement v = (h, 0) small
// enough that no wrapping happens.
int cat_radius_oracle(double h, double eps, int n_max) {
  IMat f{1, 0, 0, 1}, b{1, 0, 0, 1};
  const IMat a{2, 1, 1, 1}, ainv{1, -1, -1, 2};
  for (int n = 0; n <= n_max; ++n) {
    for (const IMat& m : {f, b}) {
      if (std::hypot(m[0] * h, m[2] * h) > eps) return n;
    }
    f = mul(a, f);
    b = mul(ainv, b);
  }
  return -1;
}

}  // namespace

TEST_CASE("rotation packing on the 100-grid matches the integer oracle") {
  const Action rot = make_rotation(kGoldenRotation);
  const auto grid = sample_grid(rot.space(), 100);
  const std::size_t oracle = integer_circle_packing(100, 5);
  CHECK(oracle == 16);
  for (int n : {0, 3, 6}) CHECK(max_separated_set(rot, grid, n, 0.05).size() == oracle);
}

TEST_CASE("cat-map separation radius matches integer matrix powers") {
  const Action cat = make_cat_map();
  const auto r = min_separating_radius(cat, torus_point(0, 0), torus_point(0.01, 0), 0.1, 10);
  REQUIRE(r.has_value());
  CHECK(*r == 3);
  CHECK(*r == cat_radius_oracle(0.01, 0.1, 10));
  CHECK(cat_radius_oracle(0.001, 0.1, 10) ==
        *min_separating_radius(cat, torus_point(0, 0), torus_point(0.001, 0), 0.1, 10));
}

TEST_CASE("separating word search") {
  const Action a = make_example_32();
  const Point x = circle_point(0.1), y = circle_point(0.12);
  const auto w = find_separating_word(a, x, y, 0.1, 10);
  REQUIRE(w.has_value());
  CHECK(w->radius == w->word.length());
  CHECK(distance(a.space(), apply_word(a, w->word, x), apply_word(a, w->word, y)) == doctest::Approx(w->distance));
  CHECK(w->distance > 0.1);
  CHECK(is_separated(a, x, y, w->radius, 0.1));
  CHECK_FALSE(is_separated(a, x, y, w->radius - 1, 0.1));
  // Radius 0 uses the plain distance.
  CHECK(min_separating_radius(a, circle_point(0.0), circle_point(0.3), 0.2, 5) == 0);
  // Rotations never separate close points.
  CHECK_FALSE(min_separating_radius(make_rotation(0.3), x, y, 0.1, 8).has_value());
  CHECK_THROWS_AS(find_separating_word(a, x, y, 0.0, 3), ParameterError);
}

TEST_CASE("search budget is enforced") {
  SearchLimits tight{100};
  CHECK_THROWS_AS(find_separating_word(make_example_32(), circle_point(0.1),
                                       circle_point(0.1 + 1e-9), 0.4, 12, tight),
                  SearchBudgetExceeded);
}

TEST_CASE("greedy sets are separated and counts grow for the cat map") {
  const Action cat = make_cat_map();
  const auto grid = sample_grid(cat.space(), 20);
  const auto s1 = max_separated_set(cat, grid, 1, 0.2);
  const auto s3 = max_separated_set(cat, grid, 3, 0.2);
  CHECK(s1.size() < s3.size());
  for (std::size_t i = 0; i < s3.size(); ++i) {
    for (std::size_t j = i + 1; j < s3.size(); ++j) CHECK(is_separated(cat, s3[i], s3[j], 3, 0.2));
  }
}

TEST_CASE("report assembly: envelope, slopes and saturation") {
  std::vector<std::vector<std::size_t>> raw{{1, 2, 4, 8, 16}, {1, 2, 3, 8, 32}};
  const EntropyReport r = assemble_entropy_report({0.2, 0.1}, raw, 3, 1000);
  CHECK(r.slopes[0] == doctest::Approx(std::log(2.0)));
  CHECK(r.counts[1][2] == 4);  // lifted by the larger epsilon
  CHECK(r.estimate == doctest::Approx(r.slopes[1]));
  CHECK_FALSE(r.saturated);
  const EntropyReport s = assemble_entropy_report({0.1}, {{5, 40, 40}}, 2, 40);
  CHECK(s.saturated);
  CHECK(s.slopes[0] == 0.0);
}

TEST_CASE("entropy query validation") {
  const Action rot = make_rotation(0.1);
  const auto grid = sample_grid(rot.space(), 10);
  const std::vector<double> up{0.1, 0.2};
  CHECK_THROWS_AS(entropy_estimate(rot, grid, up, 4, 2), ParameterError);
  const std::vector<double> ok{0.2, 0.1};
  CHECK_THROWS_AS(entropy_estimate(rot, grid, ok, 2, 3), ParameterError);
  CHECK_THROWS_AS(entropy_estimate(rot, std::span<const Point>{}, ok, 4, 2), ParameterError);
}

TEST_CASE("entropy estimate is thread invariant") {
  const Action a = make_example_32();
  const auto grid = sample_grid(a.space(), 200);
  const std::vector<double> eps{0.2, 0.1};
  const EntropyReport one = entropy_estimate(a, grid, eps, 5, 3, 1);
  const EntropyReport four = entropy_estimate(a, grid, eps, 5, 3, 4);
  CHECK(one.counts == four.counts);
  CHECK(one.estimate == four.estimate);
}

TEST_CASE("doubling on example_32 produces a verified family") {
  const Action a = make_example_32();
  const Arc seed = Arc::make(a.space(), circle_point(0.0), {0.5, 0.0});
  const SeparatedFamily f = doubling_lower_bound(a, seed, 0.04, 0.04, 4, 3);
  CHECK(f.points.size() == 8);
  CHECK(f.pairs_checked == 28);
  CHECK(f.verified());
  CHECK(f.radius == 12);
  CHECK(f.threshold == doctest::Approx(0.02));
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    for (std::size_t j = i + 1; j < f.points.size(); ++j) {
      CHECK(is_separated(a, f.points[i], f.points[j], f.radius, f.threshold));
    }
  }
  CHECK(f.trails.size() == f.points.size());
}

TEST_CASE("doubling fails cleanly") {
  const Action rot = make_rotation(kGoldenRotation);
  const Arc seed = Arc::make(rot.space(), circle_point(0.0), {0.1, 0.0});
  CHECK_THROWS_AS(doubling_lower_bound(rot, seed, 0.02, 0.2, 3, 2), ConstructionFailure);
  const Arc tiny = Arc::make(rot.space(), circle_point(0.0), {0.01, 0.0});
  CHECK_THROWS_AS(doubling_lower_bound(rot, tiny, 0.02, 0.2, 3, 2), ArcTooShort);
  CHECK_THROWS_AS(doubling_lower_bound(rot, seed, 0.0, 0.2, 3, 2), ParameterError);
}
