#include <doctest.h>

#include <cmath>
#include <set>
#include <unordered_set>

#include <glab/group.hpp>
#include <glab/kesten.hpp>

#include "oracles.hpp"

using namespace glab;

namespace {

// Associativity, identity, inverses and length subadditivity over a ball.
template <GroupLike G>
void check_axioms(const G& g, const std::vector<typename G::Element>& ball) {
  auto e = g.identity();
  for (const auto& a : ball) {
    CHECK(g.mul(a, e) == a);
    CHECK(g.mul(e, a) == a);
    CHECK(g.mul(a, g.inv(a)) == e);
    CHECK(g.word_length(g.inv(a)) == g.word_length(a));
  }
  for (const auto& a : ball)
    for (const auto& b : ball) {
      CHECK(g.word_length(g.mul(a, b)) <= g.word_length(a) + g.word_length(b));
      for (const auto& c : ball)
        CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
    }
}

template <GroupLike G>
void check_serialization(const G& g, const std::vector<typename G::Element>& ball) {
  std::set<std::string> seen;
  for (const auto& a : ball) {
    std::string s = g.to_string(a);
    CHECK(g.parse(s) == a);
    CHECK(seen.insert(s).second);  // names are unique
  }
}

}  // namespace

TEST_SUITE("groups") {

TEST_CASE("lattice group") {
  LatticeGroup z2(2);
  auto x = z2.from_coords({3, -1});
  auto y = z2.from_coords({-1, 2});
  CHECK(z2.mul(x, y) == z2.from_coords({2, 1}));
  CHECK(z2.inv(x) == z2.from_coords({-3, 1}));
  CHECK(z2.word_length(x) == 4);
  CHECK(z2.to_string(x) == "(3,-1)");
  CHECK(z2.parse("(3,-1)") == x);

  auto ball = z2.ball(2);
  CHECK(ball.size() == 13);  // 1 + 4 + 8
  check_axioms(z2, ball);
  check_serialization(z2, z2.ball(3));
  for (int r = 0; r <= 6; ++r)
    for (int d = 1; d <= 3; ++d)
      CHECK(LatticeGroup::ball_size(d, r) ==
            doctest::Approx(double(LatticeGroup(d).ball(r).size())));

  CHECK_THROWS_AS(LatticeGroup(5), std::invalid_argument);
  CHECK_THROWS_AS(z2.parse("(1,2,3)"), std::invalid_argument);
  CHECK_THROWS_AS(z2.parse("nope"), std::invalid_argument);
}

TEST_CASE("free group") {
  FreeGroup f2(2);
  auto a = f2.generator(0);
  auto b = f2.generator(1);
  auto ai = f2.generator(0, true);

  CHECK(f2.mul(a, ai) == f2.identity());
  CHECK(f2.mul(f2.mul(a, b), f2.inv(b)) == a);
  CHECK(f2.word_length(f2.mul(a, a)) == 2);
  CHECK(f2.to_string(f2.identity()) == "e");
  CHECK(f2.parse("e") == f2.identity());
  CHECK(f2.parse("a^2 b^-1") == f2.mul(f2.mul(a, a), f2.inv(b)));
  CHECK(f2.to_string(f2.parse("a^2 b^-1")) == "a^2 b^-1");

  // |ball(r)| = 2*3^r - 1 for rank 2
  CHECK(f2.ball(0).size() == 1);
  CHECK(f2.ball(1).size() == 5);
  CHECK(f2.ball(2).size() == 17);
  CHECK(f2.ball(3).size() == 53);
  for (int r = 0; r <= 5; ++r)
    CHECK(FreeGroup::ball_size(2, r) == doctest::Approx(2 * std::pow(3, r) - 1));

  check_axioms(f2, f2.ball(2));
  check_serialization(f2, f2.ball(3));

  // abelianization takes exponent sums
  auto ab = f2.abelianization();
  CHECK(f2.abelianize(f2.parse("a b a^-1 b^-1")) == ab.identity());
  CHECK(f2.abelianize(f2.parse("a^2 b")) == ab.from_coords({2, 1}));
  CHECK(f2.abelianize(f2.parse("b a b")) == ab.from_coords({1, 2}));

  CHECK_THROWS_AS(FreeGroup(5), std::invalid_argument);
  CHECK_THROWS_AS(f2.parse("c"), std::invalid_argument);
}

TEST_CASE("cyclic group") {
  CyclicGroup z5(5);
  CHECK(z5.mul({3}, {4}).v == 2);
  CHECK(z5.inv({2}).v == 3);
  CHECK(z5.word_length({3}) == 2);
  CHECK(z5.ball(1).size() == 3);
  CHECK(z5.ball(2).size() == 5);
  CHECK(z5.ball(9).size() == 5);
  CHECK(CyclicGroup::ball_size(5, 1) == doctest::Approx(3.0));
  check_axioms(z5, z5.ball(2));
  check_serialization(z5, z5.ball(2));

  CyclicGroup one(1);
  CHECK(one.mul(one.identity(), one.identity()) == one.identity());
  CHECK(one.ball(4).size() == 1);

  CHECK_THROWS_AS(CyclicGroup(0), std::invalid_argument);
  CHECK_THROWS_AS(z5.parse("x"), std::invalid_argument);
}

TEST_CASE("cocycles multiply labels along the orbit") {
  RandomSFT sft = oracles::full2();
  FreeGroup f2(2);
  SkewLabeling<FreeGroup> psi;
  psi.label = {{f2.generator(0), f2.generator(1)}};
  std::vector<int> w = {0, 1, 0};
  CHECK(cocycle(f2, psi, sft, 0, w) == f2.parse("a b a"));

  SkewLabeling<FreeGroup> inv_psi;
  inv_psi.label = {{f2.generator(0), f2.generator(0, true)}};
  std::vector<int> cancel = {0, 1};
  CHECK(cocycle(f2, inv_psi, sft, 0, cancel) == f2.identity());

  // abelianized labels give exponent sums
  auto psi_ab = abelianize_labeling(f2, psi);
  LatticeGroup ab = f2.abelianization();
  CHECK(cocycle(ab, psi_ab, sft, 0, w) == ab.from_coords({2, 1}));

  // per-state labels on a period-2 system
  RandomSFT alt = oracles::alternating23();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> tilt;
  tilt.label = {{z1.from_coords({1}), z1.from_coords({-1})},
                {z1.from_coords({1}), z1.from_coords({1}), z1.from_coords({-1})}};
  std::vector<int> word = {1, 2, 0};
  CHECK(cocycle(z1, tilt, alt, 0, word) == z1.from_coords({-1 - 1 + 1}));
}

TEST_CASE("walk radius estimate on finite and trivial groups") {
  CyclicGroup one(1);
  std::vector<std::pair<CyclicGroup::Element, double>> still = {
      {one.identity(), 1.0}};
  auto p = kesten_spectral_radius(one, still, 2);
  CHECK(p.converged);
  CHECK(p.estimate == doctest::Approx(1.0).epsilon(1e-12));

  // Z/5 walk has radius 1 and ball(2) already covers the group
  CyclicGroup z5(5);
  std::vector<std::pair<CyclicGroup::Element, double>> pm = {{{1}, 0.5},
                                                             {{4}, 0.5}};
  auto q = kesten_spectral_radius(z5, pm, 2);
  CHECK(q.converged);
  CHECK(q.ball_size == 5);
  CHECK(q.estimate == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lattice walk estimates match the Dirichlet eigenvalue") {
  LatticeGroup z1(1);
  std::vector<std::pair<LatticeGroup::Element, double>> steps = {
      {z1.from_coords({1}), 0.5}, {z1.from_coords({-1}), 0.5}};
  // the ball of radius L is a path with 2L+1 sites
  auto p30 = kesten_spectral_radius(z1, steps, 30);
  CHECK(p30.converged);
  CHECK(p30.ball_size == 61);
  CHECK(p30.estimate == doctest::Approx(std::cos(M_PI / 62)).epsilon(1e-8));

  auto p10 = kesten_spectral_radius(z1, steps, 10);
  auto p20 = kesten_spectral_radius(z1, steps, 20);
  CHECK(p10.estimate < p20.estimate);
  CHECK(p20.estimate < p30.estimate);
}

TEST_CASE("free group walk estimate at a fixed truncation") {
  FreeGroup f2(2);
  std::vector<std::pair<FreeGroup::Element, double>> steps;
  for (int i = 0; i < 2; ++i) {
    steps.push_back({f2.generator(i), 0.25});
    steps.push_back({f2.generator(i, true), 0.25});
  }
  auto p = kesten_spectral_radius(f2, steps, 6);
  CHECK(p.converged);
  CHECK(p.ball_size == 2 * 729 - 1);
  CHECK(p.estimate == doctest::Approx(0.8113619196903922).epsilon(1e-9));
}

TEST_CASE("walk input validation") {
  LatticeGroup z1(1);
  std::vector<std::pair<LatticeGroup::Element, double>> lop = {
      {z1.from_coords({1}), 0.7}, {z1.from_coords({-1}), 0.3}};
  CHECK_THROWS_AS(kesten_spectral_radius(z1, lop, 4), EstimationError);

  std::vector<std::pair<LatticeGroup::Element, double>> sub = {
      {z1.from_coords({1}), 0.25}, {z1.from_coords({-1}), 0.25}};
  CHECK_THROWS_AS(kesten_spectral_radius(z1, sub, 4), EstimationError);
}

TEST_CASE("truncation ladder extrapolation") {
  // synthetic points following est(L) = A - B/(L+2)^2 exactly
  double A = 0.87, B = 2.3;
  std::vector<KestenPoint> pts;
  for (int L : {8, 10, 12}) {
    KestenPoint p;
    p.truncation = L;
    p.estimate = A - B / ((L + 2.0) * (L + 2.0));
    pts.push_back(p);
  }
  auto ex = richardson_extrapolate(pts);
  CHECK(ex.ok);
  CHECK(ex.value == doctest::Approx(A).epsilon(1e-12));
  CHECK(ex.model_residual == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<KestenPoint> single = {pts[0]};
  CHECK_FALSE(richardson_extrapolate(single).ok);
}

TEST_CASE("exact boundary defects") {
  LatticeGroup z1(1);
  auto A = z1.ball(50);
  std::vector<LatticeGroup::Element> test = {z1.from_coords({1}),
                                             z1.from_coords({-1})};
  auto rep = folner_defect(z1, A, test);
  CHECK(rep.numerator == 4);
  CHECK(rep.denominator == 101);
  CHECK(rep.value == doctest::Approx(4.0 / 101).epsilon(1e-15));

  auto one_sided = folner_defect(z1, A, {z1.from_coords({1})});
  CHECK(one_sided.numerator == 2);

  FreeGroup f2(2);
  std::vector<FreeGroup::Element> gens;
  for (int i = 0; i < 2; ++i) {
    gens.push_back(f2.generator(i));
    gens.push_back(f2.generator(i, true));
  }
  auto frep = folner_defect(f2, f2.ball(4), gens);
  CHECK(frep.denominator == 161);
  CHECK(frep.numerator == 648);
  CHECK(frep.value >= 1.0);  // balls are never almost invariant here

  // independent set-based recount on Z^2
  LatticeGroup z2(2);
  auto ball3 = z2.ball(3);
  std::vector<LatticeGroup::Element> tests2 = {z2.from_coords({1, 0}),
                                               z2.from_coords({0, 1})};
  auto rep2 = folner_defect(z2, ball3, tests2);
  std::set<std::pair<int, int>> S;
  for (const auto& e : ball3) S.insert({e.v[0], e.v[1]});
  long long moved = 0;
  for (auto [hx, hy] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}})
    for (auto [x, y] : S) {
      if (!S.count({x + hx, y + hy})) ++moved;
      if (!S.count({x - hx, y - hy})) ++moved;
    }
  CHECK(rep2.numerator == moved);

  // larger lattice balls have smaller defect
  auto rep6 = folner_defect(z2, z2.ball(6), tests2);
  CHECK(rep6.value < rep2.value);

  CHECK_THROWS_AS(folner_defect(z1, {}, test), EstimationError);
  std::vector<LatticeGroup::Element> dup = {z1.identity(), z1.identity()};
  CHECK_THROWS_AS(folner_defect(z1, dup, test), EstimationError);
}

}  // TEST_SUITE
