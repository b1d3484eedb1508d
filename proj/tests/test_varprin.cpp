#include <doctest.h>

#include <cmath>

#include <glab/varprin.hpp>

#include "oracles.hpp"

using namespace glab;

namespace {

// 3-symbol full shift with abelian labels +1, +1, -1; the tilted pressure
// is log(2 e^xi + e^-xi), minimized at xi = -ln(2)/2 with value log(2 sqrt 2).
struct Tilted1d {
  RandomSFT sft = oracles::full3();
  LatticeGroup z1{1};
  TiltDirections dirs;
  LocallyConstantPotential phi = LocallyConstantPotential::zero(sft);
  Tilted1d() {
    dirs.label = {{z1.from_coords({1}), z1.from_coords({1}),
                   z1.from_coords({-1})}};
  }
  double closed_form(double xi) const {
    return std::log(2 * std::exp(xi) + std::exp(-xi));
  }
};

}  // namespace

TEST_SUITE("varprin") {

TEST_CASE("tilted pressure matches the closed form") {
  Tilted1d t;
  for (double xi : {-0.8, -0.5, 0.0, 0.3, 1.1}) {
    auto p = tilted_pressure(t.sft, t.phi, t.dirs, 1, {xi});
    CHECK(p.value == doctest::Approx(t.closed_form(xi)).epsilon(1e-10));
  }
}

TEST_CASE("drift is the gradient of the tilted pressure") {
  Tilted1d t;
  // d/dxi log(2e^xi + e^-xi) = (2e^xi - e^-xi) / (2e^xi + e^-xi)
  for (double xi : {0.0, 0.2, -0.4}) {
    double expect = (2 * std::exp(xi) - std::exp(-xi)) /
                    (2 * std::exp(xi) + std::exp(-xi));
    auto g = equilibrium_drift(t.sft, t.phi, t.dirs, 1, {xi});
    REQUIRE(g.size() == 1);
    CHECK(g[0] == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("pressure is convex along midpoints") {
  Tilted1d t;
  std::vector<std::pair<double, double>> pairs = {
      {-1.0, 0.5}, {-0.3, 0.8}, {0.1, 1.4}};
  for (auto [x, y] : pairs) {
    double px = tilted_pressure(t.sft, t.phi, t.dirs, 1, {x}).value;
    double py = tilted_pressure(t.sft, t.phi, t.dirs, 1, {y}).value;
    double pm = tilted_pressure(t.sft, t.phi, t.dirs, 1, {(x + y) / 2}).value;
    CHECK(pm <= (px + py) / 2 + 1e-12);
  }
}

TEST_CASE("descent finds the one-dimensional minimizer") {
  Tilted1d t;
  auto res = minimize_pressure(t.sft, t.phi, t.dirs, 1, {0.0});
  CHECK(res.xi[0] == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-6));
  CHECK(res.value ==
        doctest::Approx(std::log(2.0 * std::sqrt(2.0))).epsilon(1e-10));
  CHECK(res.grad_norm <= 1e-6);
  CHECK(res.iterations >= 1);

  // trace rows line up and the objective never increases
  REQUIRE(res.trace.iter.size() == res.trace.value.size());
  REQUIRE(res.trace.iter.size() == res.trace.xi.size());
  REQUIRE(res.trace.iter.size() == res.trace.grad_norm.size());
  for (size_t i = 1; i < res.trace.value.size(); ++i)
    CHECK(res.trace.value[i] <= res.trace.value[i - 1] + 1e-12);
}

TEST_CASE("symmetric labels have a symmetric pressure with minimum at 0") {
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  TiltDirections dirs;
  dirs.label = {{z1.from_coords({1}), z1.from_coords({-1})}};
  auto phi = LocallyConstantPotential::zero(sft);

  for (double xi : {0.3, 0.9}) {
    double plus = tilted_pressure(sft, phi, dirs, 1, {xi}).value;
    double minus = tilted_pressure(sft, phi, dirs, 1, {-xi}).value;
    CHECK(plus == doctest::Approx(minus).epsilon(1e-11));
  }
  auto res = minimize_pressure(sft, phi, dirs, 1, {0.7});
  CHECK(res.xi[0] == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(res.value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("two-dimensional symmetric instance") {
  RandomSFT sft = oracles::full4();
  LatticeGroup z2(2);
  TiltDirections dirs;
  dirs.label = {{z2.from_coords({1, 0}), z2.from_coords({-1, 0}),
                 z2.from_coords({0, 1}), z2.from_coords({0, -1})}};
  auto phi = LocallyConstantPotential::zero(sft);

  auto res = minimize_pressure(sft, phi, dirs, 2, {0.3, -0.2});
  CHECK(std::fabs(res.xi[0]) <= 1e-5);
  CHECK(std::fabs(res.xi[1]) <= 1e-5);
  CHECK(res.value == doctest::Approx(std::log(4.0)).epsilon(1e-8));

  // convexity midpoints in two variables
  std::vector<std::vector<double>> xs = {{0.4, 0.1}, {-0.6, 0.3}, {0.2, -0.5}};
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    double pa = tilted_pressure(sft, phi, dirs, 2, xs[i]).value;
    double pb = tilted_pressure(sft, phi, dirs, 2, xs[i + 1]).value;
    std::vector<double> mid = {(xs[i][0] + xs[i + 1][0]) / 2,
                               (xs[i][1] + xs[i + 1][1]) / 2};
    double pm = tilted_pressure(sft, phi, dirs, 2, mid).value;
    CHECK(pm <= (pa + pb) / 2 + 1e-12);
  }
}

TEST_CASE("one-sided drift sends the descent to its divergence guard") {
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  TiltDirections dirs;
  dirs.label = {{z1.from_coords({1}), z1.from_coords({1})}};  // drift 1 always
  auto phi = LocallyConstantPotential::zero(sft);
  DescentOptions o;
  o.divergence_radius = 15.0;
  o.max_iters = 200;
  try {
    minimize_pressure(sft, phi, dirs, 1, {0.0}, o);
    FAIL("expected an estimation error");
  } catch (const EstimationError& e) {
    CHECK(std::string(e.what()).find("infimum not attained") !=
          std::string::npos);
  }
}

TEST_CASE("tilts interact with a nonzero base potential") {
  // the tilt shifts weights multiplicatively: P(xi) =
  // log(e^{0.3 + xi} + e^{-0.2 - xi}) on the weighted 2-shift
  RandomSFT sft = oracles::full2();
  LatticeGroup z1(1);
  TiltDirections dirs;
  dirs.label = {{z1.from_coords({1}), z1.from_coords({-1})}};
  auto phi = oracles::range1(sft, {{0.3, -0.2}});
  for (double xi : {-0.5, 0.0, 0.4}) {
    double expect = std::log(std::exp(0.3 + xi) + std::exp(-0.2 - xi));
    auto p = tilted_pressure(sft, phi, dirs, 1, {xi});
    CHECK(p.value == doctest::Approx(expect).epsilon(1e-10));
  }
}

}  // TEST_SUITE
