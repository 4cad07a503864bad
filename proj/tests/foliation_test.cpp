#include "birksec/foliation.hpp"

#include <random>

#include "doctest.h"
#include "test_support.hpp"

using namespace birksec;
using namespace birksec::testsupport;

TEST_CASE("the round sphere model validates cleanly") {
  const auto m = round_sphere_manifold();
  CHECK(validate_manifold(m).empty());
}

TEST_CASE("dangling broken-face references are diagnosed") {
  auto m = round_sphere_manifold();
  m.families[0].end_hi = TorusEnd::broken_face(7, 0);
  const auto diags = validate_manifold(m);
  REQUIRE_FALSE(diags.empty());
  CHECK(diags.front().message.find("missing broken torus") != std::string::npos);
}

TEST_CASE("an edge used by two minus faces is diagnosed") {
  FoliatedManifold m;
  auto b = figure_eight_graph();
  b.faces[1].side = BrokenFaceRec::Side::Minus;  // edge 0 now on two minus faces
  m.broken.push_back(b);
  bool found = false;
  for (const auto& d : validate_manifold(m)) {
    if (d.message.find("minus side") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("balance equations on the figure-eight broken torus") {
  const auto b = figure_eight_graph();
  std::map<int, HomologyClass> classes;
  classes[0] = {1, 3};
  classes[1] = {1, 1};
  classes[2] = {1, 2};
  CHECK(broken_balance_check(b, classes));

  classes[2] = {1, 1};
  CHECK_FALSE(broken_balance_check(b, classes));

  classes[0] = {0, 3};
  classes[1] = {0, 1};
  classes[2] = {0, 2};
  CHECK_FALSE(broken_balance_check(b, classes));  // p must be nonzero

  classes.erase(2);
  CHECK_THROWS_AS(broken_balance_check(b, classes), std::invalid_argument);
}

TEST_CASE("balance equations transpose for horizontal broken tori") {
  const auto b = figure_eight_graph(BrokenTorusGraph::Orientation::Horizontal);
  std::map<int, HomologyClass> classes;
  classes[0] = {3, -1};
  classes[1] = {1, -1};
  classes[2] = {2, -1};
  CHECK(broken_balance_check(b, classes));
  classes[1] = {1, -2};
  CHECK_FALSE(broken_balance_check(b, classes));
}

TEST_CASE("edge assignment on the figure-eight graph") {
  const auto b = figure_eight_graph();
  std::map<int, std::int64_t> values{{0, 3}, {1, 1}, {2, 2}};
  const auto x = broken_edge_assignment(b, values);
  REQUIRE(x.has_value());
  CHECK(x->at(0) == 1);
  CHECK(x->at(1) == 2);

  values[2] = 1;
  CHECK_FALSE(broken_edge_assignment(b, values).has_value());
}

TEST_CASE("edge assignment on a single self-loop is forced") {
  BrokenTorusGraph b;
  b.id = 0;
  b.vertices = {0};
  b.edges = {{0, 0, 0}};
  b.faces = {{0, BrokenFaceRec::Side::Minus, 0, {{0, 1}}},
             {1, BrokenFaceRec::Side::Plus, 1, {{0, 1}}}};
  for (std::int64_t q : {-4, 0, 7}) {
    const auto x = broken_edge_assignment(b, {{0, q}, {1, q}});
    REQUIRE(x.has_value());
    CHECK(x->at(0) == q);
  }
  CHECK_FALSE(broken_edge_assignment(b, {{0, 1}, {1, 2}}).has_value());
}

TEST_CASE("end boundary multiplicities follow the vertical/horizontal rule") {
  CHECK(end_boundary_multiplicity(TorusEnd::vertical(), {3, 0}) == 0);
  CHECK(end_boundary_multiplicity(TorusEnd::vertical(), {0, -1}) == 1);
  CHECK(end_boundary_multiplicity(TorusEnd::horizontal(), {2, 5}) == 2);
  CHECK(end_boundary_multiplicity(TorusEnd::horizontal(), {0, 9}) == 0);
  CHECK_THROWS_AS(end_boundary_multiplicity(TorusEnd::broken_face(0, 0), {1, 1}),
                  std::invalid_argument);
}

TEST_CASE("junction multiplicity on a rational torus") {
  auto jt = junction_multiplicity({4, 3}, {4, 0}, {0, -3});
  CHECK(jt.kind == JunctionTransition::Kind::Boundary);
  CHECK(jt.k == -1);

  jt = junction_multiplicity({1, 1}, {1, 0}, {1, 0});
  CHECK(jt.kind == JunctionTransition::Kind::NoBoundary);

  jt = junction_multiplicity({2, 1}, {1, 0}, {0, 1});
  CHECK(jt.kind == JunctionTransition::Kind::Invalid);

  // A multiple of the orbit class on the plus side is forbidden.
  jt = junction_multiplicity({1, 1}, {1, 1}, {2, 2});
  CHECK(jt.kind == JunctionTransition::Kind::Invalid);
}

TEST_CASE("junction multiplicity over a small exhaustive range") {
  for (std::int64_t P = -3; P <= 3; ++P) {
    for (std::int64_t Q = -3; Q <= 3; ++Q) {
      if ((P == 0 && Q == 0) || std::gcd(std::abs(P), std::abs(Q)) != 1) continue;
      const PrimitiveOrbitClass orbit{P, Q};
      for (std::int64_t p = -6; p <= 6; ++p) {
        for (std::int64_t q = -6; q <= 6; ++q) {
          const HomologyClass c{p, q};
          if (c.is_zero()) continue;
          const bool multiple = c.p * Q - c.q * P == 0;
          const auto same = junction_multiplicity(orbit, c, c);
          if (multiple) {
            CHECK(same.kind == JunctionTransition::Kind::Invalid);
          } else {
            CHECK(same.kind == JunctionTransition::Kind::NoBoundary);
          }
          for (std::int64_t k : {-3, -1, 1, 2}) {
            const auto jump = junction_multiplicity(orbit, c, c + k * orbit.as_class());
            if (multiple) {
              CHECK(jump.kind == JunctionTransition::Kind::Invalid);
            } else {
              CHECK(jump.kind == JunctionTransition::Kind::Boundary);
              CHECK(jump.k == k);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("assignment feasibility matches brute force on sampled graphs") {
  const auto corpus = broken_graph_corpus(3);
  REQUIRE_FALSE(corpus.empty());
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::int64_t> val(-6, 6);
  for (const auto& b : corpus) {
    for (int trial = 0; trial < 12; ++trial) {
      std::map<int, std::int64_t> values;
      for (const auto& fc : b.faces) values[fc.id] = val(rng);
      const auto x = broken_edge_assignment(b, values);
      const bool brute = brute_force_assignment_feasible(b, values);
      CHECK(x.has_value() == brute);
      if (x) {
        for (const auto& fc : b.faces) {
          std::int64_t sum = 0;
          for (const auto& use : fc.edges) sum += use.mult * x->at(use.edge);
          CHECK(sum == values.at(fc.id));
        }
      }
    }
  }
}

TEST_CASE("balance check agrees with assignment feasibility plus common p") {
  const auto corpus = broken_graph_corpus(3);
  std::mt19937 rng(21);
  std::uniform_int_distribution<std::int64_t> val(-4, 4);
  std::uniform_int_distribution<std::int64_t> pval(-3, 3);
  for (const auto& b : corpus) {
    for (int trial = 0; trial < 10; ++trial) {
      std::map<int, HomologyClass> classes;
      std::map<int, std::int64_t> qvals;
      const bool same_p = trial % 2 == 0;
      const std::int64_t p0 = pval(rng);
      for (const auto& fc : b.faces) {
        const std::int64_t p = same_p ? p0 : pval(rng);
        const std::int64_t q = val(rng);
        classes[fc.id] = {p, q};
        qvals[fc.id] = q;
      }
      bool common_nonzero = true;
      std::int64_t first = classes.begin()->second.p;
      for (const auto& [id, c] : classes) {
        if (c.p != first) common_nonzero = false;
      }
      if (first == 0) common_nonzero = false;
      const bool balance = broken_balance_check(b, classes);
      const bool feasible = broken_edge_assignment(b, qvals).has_value();
      CHECK(balance == (feasible && common_nonzero));
    }
  }
}
