#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dampedwave/jet.hpp"
#include "test_util.hpp"

using dampedwave::Jet;

TEST_CASE("sin jet derivatives") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-5.0, 5.0);
    const Jet<4> s = sin(Jet<4>::variable(x));
    REQUIRE(s.derivative(0) == Catch::Approx(std::sin(x)).margin(1e-14));
    REQUIRE(s.derivative(1) == Catch::Approx(std::cos(x)).margin(1e-14));
    REQUIRE(s.derivative(2) == Catch::Approx(-std::sin(x)).margin(1e-13));
    REQUIRE(s.derivative(3) == Catch::Approx(-std::cos(x)).margin(1e-13));
    REQUIRE(s.derivative(4) == Catch::Approx(std::sin(x)).margin(1e-13));
  }
}

TEST_CASE("product and exp jets: d^k of sin(x) exp(x)") {
  // (sin e^x)' = (sin + cos)e^x, '' = 2 cos e^x, ''' = 2(cos - sin)e^x, '''' = -4 sin e^x
  const double x = 0.7;
  const Jet<4> f = sin(Jet<4>::variable(x)) * exp(Jet<4>::variable(x));
  const double s = std::sin(x), c = std::cos(x), e = std::exp(x);
  REQUIRE(f.derivative(0) == Catch::Approx(s * e));
  REQUIRE(f.derivative(1) == Catch::Approx((s + c) * e));
  REQUIRE(f.derivative(2) == Catch::Approx(2 * c * e));
  REQUIRE(f.derivative(3) == Catch::Approx(2 * (c - s) * e));
  REQUIRE(f.derivative(4) == Catch::Approx(-4 * s * e));
}

TEST_CASE("division jet: tan via sin/cos") {
  const double x = 0.4;
  const Jet<4> t = sin(Jet<4>::variable(x)) / cos(Jet<4>::variable(x));
  const double tv = std::tan(x);
  REQUIRE(t.derivative(0) == Catch::Approx(tv));
  REQUIRE(t.derivative(1) == Catch::Approx(1 + tv * tv));
  REQUIRE(t.derivative(2) == Catch::Approx(2 * tv * (1 + tv * tv)));
}

TEST_CASE("affine inner arguments") {
  // g(x) = sin(3x + 1): g^(k) = 3^k sin^(k)(3x+1)
  const double x = 0.2;
  Jet<4> arg;
  arg.a[0] = 3.0 * x + 1.0;
  arg.a[1] = 3.0;
  const Jet<4> g = sin(arg);
  REQUIRE(g.derivative(1) == Catch::Approx(3.0 * std::cos(3 * x + 1)));
  REQUIRE(g.derivative(2) == Catch::Approx(-9.0 * std::sin(3 * x + 1)));
  REQUIRE(g.derivative(4) == Catch::Approx(81.0 * std::sin(3 * x + 1)));
}
