#include <doctest.h>

#include <cmath>

#include <glab/extension.hpp>
#include <glab/gurevich.hpp>

#include "oracles.hpp"

using namespace glab;

namespace {

// Compare one DP sweep against enumeration at every n; returns the series
// so callers can stack further checks on it.
template <GroupLike G>
ConstrainedSeries<G> against_oracle(const RandomSFT& sft,
                                    const LocallyConstantPotential& phi,
                                    const SkewLabeling<G>& psi, const G& group,
                                    int state, int a, int b,
                                    const typename G::Element& target,
                                    int n_max) {
  auto series =
      constrained_series(sft, phi, psi, group, state, a, b, target, n_max);
  REQUIRE(series.ns.size() == size_t(n_max));
  for (int n = 1; n <= n_max; ++n) {
    auto ref = oracles::constrained(sft, phi, psi, group, state, n, a, b, target);
    INFO("state ", state, " n ", n, " a ", a, " b ", b);
    CHECK(series.counts[n - 1] == BigCount(ref.count));
    if (ref.log_z == kNegInf)
      CHECK(series.log_z[n - 1] == kNegInf);
    else
      CHECK(series.log_z[n - 1] == doctest::Approx(ref.log_z).epsilon(1e-10));
  }
  return series;
}

}  // namespace

TEST_SUITE("extension") {

TEST_CASE("lattice-constrained counts match enumeration") {
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> psi;
  psi.label = {{z1.from_coords({1}), z1.from_coords({-1})}};

  for (const auto& phi :
       {LocallyConstantPotential::zero(sft), oracles::range1(sft, {{0.3, -0.2}}),
        oracles::staircase(sft, 2, 0.1)})
    for (int b : {-1, 0})
      against_oracle(sft, phi, psi, z1, 0, 0, b, z1.identity(), 8);

  // a fixed nontrivial target
  against_oracle(sft, LocallyConstantPotential::zero(sft), psi, z1, 0, 0, -1,
                 z1.from_coords({2}), 8);
}

TEST_CASE("identity returns on the two-shift are central binomials") {
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> psi;
  psi.label = {{z1.from_coords({1}), z1.from_coords({-1})}};
  auto s = constrained_series(sft, LocallyConstantPotential::zero(sft), psi, z1,
                              0, 0, -1, z1.identity(), 24);
  for (int n = 1; n <= 24; ++n) {
    if (n % 2 == 1) {
      CHECK(s.counts[n - 1] == 0);
      CHECK(s.log_z[n - 1] == kNegInf);
    } else {
      // first letter fixed to 0 (label +1), so choose the remaining ups
      CHECK(s.counts[n - 1] == oracles::binomial(n - 1, n / 2 - 1));
    }
  }
  CHECK(s.log_z[3] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("free-group identity returns match enumeration") {
  RandomSFT sft = oracles::full4();
  FreeGroup f2(2);
  SkewLabeling<FreeGroup> psi;
  psi.label = {{f2.generator(0), f2.generator(1), f2.generator(0, true),
                f2.generator(1, true)}};
  auto phi = oracles::range1(sft, {{0.05, -0.1, 0.2, 0.0}});
  auto s = against_oracle(sft, phi, psi, f2, 0, 0, -1, f2.identity(), 6);

  // with zero potential, n = 2 has exactly one return (a then a^-1)
  auto z = constrained_series(sft, LocallyConstantPotential::zero(sft), psi, f2,
                              0, 0, -1, f2.identity(), 6);
  CHECK(z.counts[1] == 1);
  CHECK(z.log_z[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s.peak_cells > 0);
}

TEST_CASE("period-2 lattice labels match enumeration") {
  RandomSFT sft = oracles::alternating23();
  LatticeGroup z2(2);
  SkewLabeling<LatticeGroup> psi;
  psi.label = {{z2.from_coords({1, 0}), z2.from_coords({0, 1})},
               {z2.from_coords({1, 1}), z2.from_coords({-1, 0}),
                z2.from_coords({0, -1})}};
  auto phi = oracles::range1(sft, {{0.1, 0.2}, {-0.1, 0.0, 0.4}});
  for (int state = 0; state < 2; ++state)
    against_oracle(sft, phi, psi, z2, state, 0, -1, z2.identity(), 8);
}

TEST_CASE("period-3 mixed system with cyclic labels matches enumeration") {
  RandomSFT sft = oracles::period3_mixed();
  CyclicGroup z3(3);
  SkewLabeling<CyclicGroup> psi;
  psi.label = {{{1}, {2}}, {{0}, {1}, {2}}, {{2}, {1}}};
  auto phi = oracles::staircase(sft, 2, 0.07);
  for (int state = 0; state < 3; ++state)
    for (int target = 0; target < 3; ++target)
      against_oracle(sft, phi, psi, z3, state, 0, -1,
                     CyclicGroup::Element{target}, 7);
}

TEST_CASE("range-3 potentials exercise the deep cylinder path") {
  RandomSFT sft = oracles::golden_mean();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> psi;
  psi.label = {{z1.from_coords({1}), z1.from_coords({-1})}};
  auto phi = oracles::staircase(sft, 3, 0.11);
  against_oracle(sft, phi, psi, z1, 0, 0, -1, z1.identity(), 7);
  against_oracle(sft, phi, psi, z1, 0, 0, 1, z1.from_coords({2}), 7);
}

TEST_CASE("constraint nesting never gains weight") {
  RandomSFT sft = oracles::full4();
  FreeGroup f2(2);
  SkewLabeling<FreeGroup> psi;
  psi.label = {{f2.generator(0), f2.generator(1), f2.generator(0, true),
                f2.generator(1, true)}};
  auto phi = oracles::range1(sft, {{0.05, -0.1, 0.2, 0.0}});
  LatticeGroup ab = f2.abelianization();
  auto psi_ab = abelianize_labeling(f2, psi);
  CyclicGroup triv(1);

  auto full = constrained_series(sft, phi, psi, f2, 0, 0, -1, f2.identity(), 10);
  auto abel =
      constrained_series(sft, phi, psi_ab, ab, 0, 0, -1, ab.identity(), 10);
  auto open = constrained_series(sft, phi, trivial_labeling(sft, triv), triv, 0,
                                 0, -1, triv.identity(), 10);
  for (int n = 0; n < 10; ++n) {
    CHECK(full.log_z[n] <= abel.log_z[n] + 1e-12);
    CHECK(abel.log_z[n] <= open.log_z[n] + 1e-12);
    CHECK(full.counts[n] <= abel.counts[n]);
    CHECK(abel.counts[n] <= open.counts[n]);
  }
  // identity-return word sets concatenate, so counts are supermultiplicative
  CHECK(full.counts[3] * full.counts[3] <= full.counts[7]);
}

TEST_CASE("truncation is monotone and exact once it covers the walk") {
  RandomSFT sft = oracles::full4();
  FreeGroup f2(2);
  SkewLabeling<FreeGroup> psi;
  psi.label = {{f2.generator(0), f2.generator(1), f2.generator(0, true),
                f2.generator(1, true)}};
  auto phi = LocallyConstantPotential::zero(sft);

  DpOptions o2, o3, o4;
  o2.truncation = 2;
  o3.truncation = 3;
  o4.truncation = 4;
  auto s2 = constrained_series(sft, phi, psi, f2, 0, 0, -1, f2.identity(), 8, o2);
  auto s3 = constrained_series(sft, phi, psi, f2, 0, 0, -1, f2.identity(), 8, o3);
  auto s4 = constrained_series(sft, phi, psi, f2, 0, 0, -1, f2.identity(), 8, o4);
  auto sfull = constrained_series(sft, phi, psi, f2, 0, 0, -1, f2.identity(), 8);

  for (int n = 0; n < 8; ++n) {
    CHECK(s2.log_z[n] <= s3.log_z[n] + 1e-12);
    CHECK(s3.log_z[n] <= s4.log_z[n] + 1e-12);
    // an 8-step identity return can stray at most 4 letters from home
    if (std::isinf(sfull.log_z[n]))
      CHECK(std::isinf(s4.log_z[n]));
    else
      CHECK(s4.log_z[n] == doctest::Approx(sfull.log_z[n]).epsilon(1e-13));
    CHECK(s4.counts[n] == sfull.counts[n]);
  }
  // the tight truncation visibly drops mass, the covering one does not
  CHECK(s2.leak_log.back() > kNegInf);
  CHECK(sfull.leak_log.back() == kNegInf);
}

TEST_CASE("parity makes odd identity returns impossible") {
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> psi;
  psi.label = {{z1.from_coords({1}), z1.from_coords({-1})}};
  auto s = constrained_series(sft, LocallyConstantPotential::zero(sft), psi, z1,
                              0, 0, -1, z1.identity(), 11);
  for (int n = 1; n <= 11; n += 2) CHECK(s.counts[n - 1] == 0);
}

TEST_CASE("reachable element sets") {
  RandomSFT sft = oracles::full4();
  FreeGroup f2(2);
  SkewLabeling<FreeGroup> psi;
  psi.label = {{f2.generator(0), f2.generator(1), f2.generator(0, true),
                f2.generator(1, true)}};
  auto r1 = reachable_group_elements(sft, psi, f2, 0, 1);
  CHECK(r1.size() == 4);
  auto r2 = reachable_group_elements(sft, psi, f2, 0, 2);
  CHECK(r2.size() == 13);  // identity + the 12 reduced two-letter words
  bool has_id = false;
  for (const auto& g : r2) has_id = has_id || g == f2.identity();
  CHECK(has_id);

  RandomSFT two = oracles::full2();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> pm;
  pm.label = {{z1.from_coords({1}), z1.from_coords({-1})}};
  auto r3 = reachable_group_elements(two, pm, z1, 0, 3);
  REQUIRE(r3.size() == 4);  // odd sums -3, -1, 1, 3
  CHECK(r3.front() == z1.from_coords({-3}));
  CHECK(r3.back() == z1.from_coords({3}));
}

TEST_CASE("state budget aborts oversized sweeps") {
  RandomSFT sft = oracles::full4();
  FreeGroup f2(2);
  SkewLabeling<FreeGroup> psi;
  psi.label = {{f2.generator(0), f2.generator(1), f2.generator(0, true),
                f2.generator(1, true)}};
  DpOptions tiny;
  tiny.state_budget = 50;
  CHECK_THROWS_AS(constrained_series(sft, LocallyConstantPotential::zero(sft),
                                     psi, f2, 0, 0, -1, f2.identity(), 10, tiny),
                  BudgetError);
}

TEST_CASE("counts promote to big integers on overflow") {
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> psi;
  psi.label = {{z1.from_coords({1}), z1.from_coords({-1})}};

  // C(71, 35) > 2^64, so the 64-bit pass must overflow and the promoted
  // rerun must deliver the exact value.
  auto s = constrained_series(sft, LocallyConstantPotential::zero(sft), psi, z1,
                              0, 0, -1, z1.identity(), 72);
  CHECK_FALSE(s.count_overflow);
  CHECK(s.counts[71] == oracles::binomial(71, 35));

  DpOptions lean;
  lean.exact_counts = false;
  auto t = constrained_series(sft, LocallyConstantPotential::zero(sft), psi, z1,
                              0, 0, -1, z1.identity(), 72, lean);
  CHECK(t.count_overflow);
}

TEST_CASE("input validation") {
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  SkewLabeling<LatticeGroup> psi;
  psi.label = {{z1.from_coords({1}), z1.from_coords({-1})}};
  auto phi = LocallyConstantPotential::zero(sft);
  CHECK_THROWS_AS(
      constrained_series(sft, phi, psi, z1, 0, 0, -1, z1.identity(), 0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      constrained_series(sft, phi, psi, z1, 2, 0, -1, z1.identity(), 4),
      std::invalid_argument);
  CHECK_THROWS_AS(
      constrained_series(sft, phi, psi, z1, 0, 7, -1, z1.identity(), 4),
      std::invalid_argument);
  CHECK_THROWS_AS(constrained_partition(sft, phi, psi, z1, 0, 4, 0, 9,
                                        z1.identity()),
                  std::invalid_argument);
}

TEST_CASE("unconstrained partition matches enumeration") {
  for (const auto& sft : oracles::corpus()) {
    auto phi = oracles::staircase(sft, 1, 0.13);
    for (int s = 0; s < sft.states(); ++s)
      for (int n = 1; n <= 6; ++n) {
        double dp = partition_function(sft, phi, s, n, 0, 0);
        double ref = oracles::log_partition(sft, phi, s, n, 0, 0);
        if (ref == kNegInf)
          CHECK(dp == kNegInf);
        else
          CHECK(dp == doctest::Approx(ref).epsilon(1e-12));
      }
  }
}

TEST_CASE("growth fit recovers exact linear series") {
  Environment env = build_cyclic_environment(2);
  std::vector<std::vector<int>> ns(2);
  std::vector<std::vector<double>> lz(2);
  for (int s = 0; s < 2; ++s)
    for (int n = 1; n <= 20; ++n) {
      ns[s].push_back(n);
      lz[s].push_back(0.7 * n + 0.3 * (s + 1));
    }
  auto est = gurevich_estimate(env, ns, lz);
  CHECK(est.value == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(est.stderr_ <= 1e-12);
  CHECK(est.per_state.size() == 2);
}

TEST_CASE("growth fit removes a known polynomial correction") {
  Environment env = build_cyclic_environment(1);
  std::vector<std::vector<int>> ns(1);
  std::vector<std::vector<double>> lz(1);
  for (int n = 4; n <= 40; ++n) {
    ns[0].push_back(n);
    lz[0].push_back(1.1 * n - 1.5 * std::log(n) + 0.2);
  }
  GurevichOptions o;
  o.correction = 1.5;
  auto est = gurevich_estimate(env, ns, lz, o);
  CHECK(est.value == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(est.stderr_ <= 1e-10);
}

TEST_CASE("growth fit on central binomials lands near log 2") {
  Environment env = build_cyclic_environment(1);
  std::vector<std::vector<int>> ns(1);
  std::vector<std::vector<double>> lz(1);
  for (int n = 1; n <= 24; ++n) {
    ns[0].push_back(n);
    if (n % 2) {
      lz[0].push_back(kNegInf);  // estimator must skip these
    } else {
      BigCount c = oracles::binomial(n, n / 2);
      lz[0].push_back(std::log(c.convert_to<double>()));
    }
  }
  GurevichOptions o;
  o.window_lo = 12;
  o.window_hi = 24;
  o.correction = 0.5;
  auto est = gurevich_estimate(env, ns, lz, o);
  CHECK(std::fabs(est.value - std::log(2.0)) < 0.01);
}

TEST_CASE("growth fit complains about starved windows") {
  Environment env = build_cyclic_environment(1);
  std::vector<std::vector<int>> ns = {{1, 2, 3, 4, 5, 6}};
  std::vector<std::vector<double>> lz = {{1, 2, 3, 4, 5, 6}};
  GurevichOptions o;
  o.window_lo = 4;
  o.window_hi = 6;
  CHECK_THROWS_AS(gurevich_estimate(env, ns, lz, o), EstimationError);
}

}  // TEST_SUITE
