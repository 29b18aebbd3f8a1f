#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dampedwave/coefficient.hpp"
#include "test_util.hpp"

using dampedwave::Coefficient;
using dampedwave::CoefficientError;

namespace {

// independent quadrature oracle: adaptive composite Gauss-Legendre 8
double quad(const std::function<double(double)>& f, double a, double b, int panels = 512) {
  static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + (b - a) * i / panels, hi = a + (b - a) * (i + 1) / panels;
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (int q = 0; q < 4; ++q) s += ws[q] * (f(c - h * xs[q]) + f(c + h * xs[q]));
    total += s * h;
  }
  return total;
}

void check_antiderivative(const Coefficient& c, double upto) {
  for (double t : {0.13 * upto, 0.5 * upto, upto}) {
    const double oracle = quad([&](double x) { return c.value(x); }, 0.0, t);
    REQUIRE(c.antiderivative(t) == Catch::Approx(oracle).epsilon(1e-10).margin(1e-14));
  }
  REQUIRE(c.antiderivative(0.0) == 0.0);
}

}  // namespace

TEST_CASE("power family") {
  const Coefficient c = Coefficient::power(1.0, 2.0, 1.0, 1, 1.0);
  REQUIRE(c.value(0.5) == Catch::Approx(0.25));
  REQUIRE(c.derivative(0.5) == Catch::Approx(1.0));
  REQUIRE(c.mu() == Catch::Approx(1.0));
  check_antiderivative(c, 1.0);
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    REQUIRE(c.value(t) >= 0.0);
    REQUIRE(c.value(t) <= c.mu() + 1e-15);
  }
}

TEST_CASE("sin squared family") {
  const Coefficient c = Coefficient::sin_squared(5.0, 1.0, 0, 1.0);
  REQUIRE(c.value(0.3) == Catch::Approx(std::pow(std::sin(1.5), 2)));
  REQUIRE(c.hoelder().value() == Catch::Approx(5.0));
  check_antiderivative(c, 1.0);
  // antiderivative is nondecreasing
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double v = c.antiderivative(i / 200.0);
    REQUIRE(v >= prev);
    prev = v;
  }
}

TEST_CASE("constant and zero families") {
  const Coefficient c = Coefficient::constant(0.7, 2.0);
  REQUIRE(c.value(1.3) == 0.7);
  REQUIRE(c.derivative(1.3) == 0.0);
  REQUIRE(c.antiderivative(2.0) == Catch::Approx(1.4));
  REQUIRE(c.hoelder().value() == 0.0);
  const Coefficient z = Coefficient::zero(1.0);
  REQUIRE(z.family() == "zero");
  REQUIRE(z.value(0.5) == 0.0);
}

TEST_CASE("table coefficient interpolates and integrates") {
  const Coefficient c =
      Coefficient::table({0.0, 0.5, 1.0}, {0.0, 1.0, 0.5}, 0, 1.0);
  REQUIRE(c.value(0.25) == Catch::Approx(0.5));
  REQUIRE(c.value(0.75) == Catch::Approx(0.75));
  REQUIRE(!c.has_derivative());
  REQUIRE_THROWS_AS(c.derivative(0.3), CoefficientError);
  REQUIRE(c.antiderivative(1.0) == Catch::Approx(0.25 + 0.375));
  check_antiderivative(c, 1.0);
}

TEST_CASE("table validation") {
  REQUIRE_THROWS_AS(Coefficient::table({0.0, 0.0}, {0.0, 1.0}, 0, 1.0), CoefficientError);
  REQUIRE_THROWS_AS(Coefficient::table({0.0, 1.0}, {0.0, -1.0}, 0, 1.0), CoefficientError);
  REQUIRE_THROWS_AS(Coefficient::table({0.5, 1.0}, {0.0, 1.0}, 0, 1.0), CoefficientError);
}

TEST_CASE("declared Hoelder constants really bound increments") {
  Rng rng(21);
  const Coefficient c = Coefficient::power(1.0, 2.0, 1.0, 0, 0.5);
  const double H = c.hoelder().value();
  for (int i = 0; i < 4000; ++i) {
    const double x = rng.uniform(0.0, 1.0), y = rng.uniform(0.0, 1.0);
    if (x == y) continue;
    REQUIRE(std::fabs(c.value(x) - c.value(y)) <=
            H * std::pow(std::fabs(x - y), 0.5) * (1 + 1e-12));
  }
}

TEST_CASE("config records") {
  const Coefficient c = Coefficient::from_config(
      R"({"family":"power","scale":1.0,"exponent":2.0,"horizon":1.0,"k":1,"alpha":1.0})");
  REQUIRE(c.family() == "power");
  REQUIRE(c.value(0.5) == Catch::Approx(0.25));

  REQUIRE_THROWS_WITH(Coefficient::from_config(R"({"family":"power"})"),
                      Catch::Matchers::ContainsSubstring("exponent"));
  REQUIRE_THROWS_WITH(Coefficient::from_config(R"({"scale":1.0})"),
                      Catch::Matchers::ContainsSubstring("family"));
  REQUIRE_THROWS_AS(Coefficient::from_config("not json"), CoefficientError);
}
