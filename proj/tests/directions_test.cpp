#include "birksec/directions.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"

using namespace birksec;

namespace {

constexpr double kPi = std::numbers::pi;

// Samples of an analytic direction curve rotating from angle a0 to a1.
DirectionSet rotating_directions(double a0, double a1, int n) {
  std::vector<DirectionSample> samples;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    const double ang = a0 + t * (a1 - a0);
    samples.push_back({t, {std::cos(ang), std::sin(ang)}});
  }
  return DirectionSet::from_samples(samples);
}

}  // namespace

TEST_CASE("admissible cone of a single direction is an open half-plane") {
  const auto d = DirectionSet::from_samples({{0.0, {1, 1}}});
  const auto cone = admissible_cone(d);
  REQUIRE_FALSE(cone.empty);
  // Classes strictly below the diagonal (p > q) belong to the cone.
  CHECK(cone.contains({1, 0}));
  CHECK(cone.contains({0, -1}));
  CHECK(cone.contains({1, -1}));
  CHECK_FALSE(cone.contains({1, 1}));
  CHECK_FALSE(cone.contains({-1, -1}));
  CHECK_FALSE(cone.contains({0, 1}));
  CHECK(integer_points_in_cone(cone, 1) ==
        std::vector<HomologyClass>{{0, -1}, {1, -1}, {1, 0}});
}

TEST_CASE("admissible cone of the symbolic first quadrant is the closed fourth quadrant") {
  const auto cone = admissible_cone(DirectionSet::first_quadrant());
  REQUIRE_FALSE(cone.empty);
  CHECK(cone.contains({1, 0}));
  CHECK(cone.contains({0, -1}));
  CHECK(cone.contains({3, -2}));
  CHECK_FALSE(cone.contains({-1, 0}));
  CHECK_FALSE(cone.contains({0, 1}));
  CHECK_FALSE(cone.contains({1, 1}));
  CHECK(integer_points_in_cone(cone, 1) ==
        std::vector<HomologyClass>{{0, -1}, {1, -1}, {1, 0}});
}

TEST_CASE("full projective coverage leaves an empty cone") {
  const auto d = rotating_directions(0.0, kPi, 181);
  CHECK(covers_all_directions(d));
  CHECK(admissible_cone(d).empty);
  CHECK(integer_points_in_cone(admissible_cone(d), 5).empty());
}

TEST_CASE("coverage detection on sampled arcs") {
  CHECK(covers_all_directions(rotating_directions(0.3, 0.3 + kPi, 181)));
  CHECK_FALSE(covers_all_directions(DirectionSet::from_samples(
      {{0.0, {1, 1}}, {0.5, {1, 1}}, {1.0, {1, 1}}})));
  // A quarter-circle arc sweeps pi/2 < pi of projective directions.
  CHECK_FALSE(covers_all_directions(rotating_directions(0.0, kPi / 2, 91)));
  CHECK_THROWS_AS(covers_all_directions(DirectionSet::from_samples({{0.0, {0, 0}}})),
                  std::invalid_argument);
}

TEST_CASE("cone membership implies positive transversality at every sample") {
  const auto d = rotating_directions(0.2, 1.2, 50);
  const auto cone = admissible_cone(d);
  for (const auto& c : integer_points_in_cone(cone, 6)) {
    for (const auto& smp : d.samples) {
      CHECK(is_positively_transverse(c, smp.dir));
    }
  }
}

TEST_CASE("greedy window count on analytic rotations") {
  CHECK(count_disjoint_coverage_windows(DirectionSet::from_samples(
            {{0.0, {1, 1}}, {1.0, {1, 1}}})) == 0);
  CHECK(count_disjoint_coverage_windows(rotating_directions(0.0, kPi, 361)) == 1);
  // A rotation by k*pi + slack yields exactly k disjoint covering windows.
  for (int k = 1; k <= 4; ++k) {
    const auto d = rotating_directions(0.0, k * kPi + 0.3, 200 * k);
    CHECK(count_disjoint_coverage_windows(d) == k);
  }
}

TEST_CASE("window count is stable under refinement of the same curve") {
  for (const int n : {73, 145, 289, 577, 1153}) {
    const auto d = rotating_directions(0.1, 0.1 + 2 * kPi + 0.2, n);
    CHECK(count_disjoint_coverage_windows(d) == 2);
  }
}

TEST_CASE("windows of one covering sweep are reported with their interval") {
  const auto d = rotating_directions(0.0, kPi + 0.4, 400);
  const auto w = coverage_windows(d);
  REQUIRE(w.size() == 1);
  CHECK(w[0].first == doctest::Approx(0.0));
  CHECK(w[0].second < 1.0);
}

TEST_CASE("interpolated direction follows the shorter arc") {
  const auto d = rotating_directions(0.0, kPi / 2, 3);
  const auto v = direction_at(d, 0.5);
  CHECK(std::atan2(v.b, v.a) == doctest::Approx(kPi / 4));
}
