#include <doctest.h>

#include "expanse/expansivity.hpp"

using namespace expanse;

TEST_CASE("grid pairs respect the distance floor") {
  const auto all = grid_pairs(Space::circle(), 10, 0.0);
  CHECK(all.size() == 45);
  const auto far = grid_pairs(Space::circle(), 10, 0.3);
  // distances 0.3, 0.4, 0.5: 10 + 10 + 5 pairs
  CHECK(far.size() == 25);
  for (const auto& p : far) CHECK(distance(Space::circle(), p.x, p.y) >= 0.3 - 1e-12);
}

TEST_CASE("random pairs are deterministic and inside the distance band") {
  const auto a = random_pairs(Space::torus(), 501, 0.05, 0.3, 7);
  const auto b = random_pairs(Space::torus(), 501, 0.05, 0.3, 7);
  const auto c = random_pairs(Space::torus(), 501, 0.05, 0.3, 8);
  REQUIRE(a.size() == 502);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].x == b[i].x && a[i].y == b[i].y;
    differs = differs || !(a[i].x == c[i].x);
    const double d = distance(Space::torus(), a[i].x, a[i].y);
    CHECK(d >= 0.05 - 1e-12);
    CHECK(d <= 0.3 + 1e-12);
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("scan of an isometry reports the first unseparated pair") {
  const Action rot = make_rotation(kGoldenRotation);
  const std::vector<PointPair> pairs{{circle_point(0.0), circle_point(0.3)},
                                     {circle_point(0.0), circle_point(0.1)},
                                     {circle_point(0.5), circle_point(0.55)}};
  const ScanReport r = expansivity_scan(rot, pairs, 0.2, 6);
  CHECK_FALSE(r.fully_separated());
  CHECK(r.pairs_separated == 1);
  CHECK(r.separated_fraction == doctest::Approx(1.0 / 3.0));
  CHECK(r.worst_index == 1);
  CHECK_FALSE(r.worst_radius.has_value());
  CHECK(r.delta == doctest::Approx(0.05));
  CHECK(r.radii[0] == 0);
}

TEST_CASE("scan of example_32 picks the largest radius") {
  const Action a = make_example_32();
  const auto pairs = grid_pairs(a.space(), 40, 0.025);
  const ScanReport r = expansivity_scan(a, pairs, 0.08, 20, {2});
  REQUIRE(r.fully_separated());
  int worst = 0;
  for (const auto& v : r.radii) worst = std::max(worst, *v);
  CHECK(r.n_observed == worst);
  CHECK(r.worst_radius == worst);
  CHECK(r.radii[*r.worst_index] == worst);
  const ScanReport t = expansivity_scan(a, pairs, 0.08, 20, {1});
  CHECK(t.radii == r.radii);
}

TEST_CASE("uniform bound dichotomy and edge cases") {
  const Action a = make_example_32();
  const auto pairs = grid_pairs(a.space(), 100, 0.0);
  const auto n = uniform_bound(a, 0.05, 0.08, pairs, 30);
  REQUIRE(n.has_value());
  CHECK(*n >= 1);
  CHECK_FALSE(uniform_bound(make_rotation(kGoldenRotation), 0.1, 0.2, pairs, 30).has_value());
  // Vacuous: no pair at distance >= 0.6 on the circle.
  CHECK(uniform_bound(a, 0.6, 0.08, pairs, 30) == 0);
  const ScanReport empty = expansivity_scan(a, std::span<const PointPair>{}, 0.1, 3);
  CHECK(empty.n_observed == 0);
  CHECK_FALSE(empty.worst_index.has_value());
}

TEST_CASE("profile bound grows with e") {
  const Action a = make_example_32();
  const auto pairs = grid_pairs(a.space(), 60, 0.0);
  const std::vector<double> es{0.02, 0.04, 0.08};
  const auto prof = expansivity_profile(a, es, 0.05, pairs, 30);
  REQUIRE(prof.size() == 3);
  for (std::size_t i = 1; i < prof.size(); ++i) {
    REQUIRE(prof[i].bound.has_value());
    CHECK(*prof[i - 1].bound <= *prof[i].bound);
  }
}
