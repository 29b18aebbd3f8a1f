#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dampedwave/approximation.hpp"
#include "dampedwave/glaeser.hpp"
#include "test_util.hpp"

using namespace dampedwave;

TEST_CASE("theta exponent") {
  REQUIRE(theta_exponent(0, 1.0) == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
  REQUIRE(theta_exponent(2, 1.0) == Catch::Approx(2.0 / 5.0).epsilon(1e-15));
  // identity 2(1-theta)/(k+alpha) = theta
  for (int k = 0; k <= 5; ++k) {
    for (double alpha : {0.25, 0.5, 1.0}) {
      const double th = theta_exponent(k, alpha);
      REQUIRE(2.0 * (1.0 - th) / (k + alpha) == Catch::Approx(th).epsilon(1e-14));
    }
  }
  REQUIRE_THROWS_AS(theta_exponent(0, 0.0), CoefficientError);
  REQUIRE_THROWS_AS(theta_exponent(0, 1.5), CoefficientError);
}

TEST_CASE("psi smoother") {
  REQUIRE(psi_smoother(1.0, 0.0) == 0.0);
  REQUIRE(psi_smoother(0.5, -3.0) == 0.0);
  REQUIRE(std::fabs(psi_smoother(1.0, 100.0) - 99.0) < 0.013);

  Rng rng(31);
  for (int i = 0; i < 3000; ++i) {
    const double eps = std::exp(rng.uniform(-6.0, 2.0));
    const double x = rng.uniform(-2.0, 50.0);
    const double p = psi_smoother(eps, x);
    const double dp = psi_smoother_derivative(eps, x);
    if (x <= 0.0) {
      REQUIRE(p == 0.0);
      REQUIRE(dp == 0.0);
    } else {
      REQUIRE(std::fabs(p - x) <= eps * (1 + 1e-12));
      REQUIRE(dp >= 0.0);
      REQUIRE(dp <= 1.0);
      REQUIRE(p >= 0.0);
    }
  }
  // C^1 across zero: derivative tends to 0 from the right
  REQUIRE(psi_smoother_derivative(0.1, 1e-12) == Catch::Approx(0.0).margin(1e-18));
}

TEST_CASE("glaeser constants for the worked examples") {
  const auto g2 = estimate_glaeser(Coefficient::power(1.0, 2.0, 1.0, 1, 1.0), 2001);
  REQUIRE(g2.kind == GlaeserEstimate::Kind::ConstantK1);
  REQUIRE(g2.K == Catch::Approx(2.0).epsilon(1e-9));
  REQUIRE(!g2.violation);
  REQUIRE_THROWS_AS(estimate_glaeser(Coefficient::constant(0.7, 1.0), 101), CoefficientError);
}

TEST_CASE("glaeser: constant coefficient has K = 0") {
  // constant family carries k = 0; use a flat power-like table on a k=1 claim
  struct Flat final : Coefficient::Impl {
    double value(double) const override { return 0.7; }
    double derivative(double) const override { return 0.0; }
    double antiderivative(double t) const override { return 0.7 * t; }
  };
  auto impl = std::make_shared<Flat>();
  impl->horizon = 1.0;
  impl->mu = 0.7;
  impl->k = 1;
  impl->alpha = 1.0;
  const auto g = estimate_glaeser(Coefficient(impl), 501);
  REQUIRE(g.K == 0.0);
}

TEST_CASE("glaeser: t^30 declared C^{1,1} gives K = 30") {
  const auto g = estimate_glaeser(Coefficient::power(1.0, 30.0, 1.0, 1, 1.0), 4001);
  REQUIRE(g.K == Catch::Approx(30.0).epsilon(1e-6));
}

TEST_CASE("glaeser flags genuine violations") {
  // c = t with k = 1: at t = 0, c = 0 but c' = 1
  const auto g = estimate_glaeser(Coefficient::power(1.0, 1.0, 1.0, 1, 1.0), 101);
  REQUIRE(g.violation);
  REQUIRE(g.violation_t == 0.0);
}

TEST_CASE("glaeser k >= 2 builds the integrable weight") {
  const auto g = estimate_glaeser(Coefficient::power(1.0, 30.0, 1.0, 2, 1.0), 2001);
  REQUIRE(g.kind == GlaeserEstimate::Kind::FunctionK2);
  REQUIRE(g.Phi.front() == 0.0);
  for (std::size_t i = 1; i < g.Phi.size(); ++i) REQUIRE(g.Phi[i] >= g.Phi[i - 1]);
  // phi = 30 t^29 / t^20 = 30 t^9, so Phi(1) = 3
  REQUIRE(g.Phi.back() == Catch::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("approximation for c = t^2, k = 1, lambda = 100") {
  const Coefficient c = Coefficient::power(1.0, 2.0, 1.0, 1, 1.0);
  const auto a = approximate_coefficient(c, 100.0);
  REQUIRE(a.theta() == Catch::Approx(0.5));
  REQUIRE(a.epsilon() == Catch::Approx(0.0025).epsilon(1e-14));
  double sup = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = i / 2000.0;
    sup = std::max(sup, std::fabs(c.value(t) - a.value(t)));
  }
  REQUIRE(sup <= 0.01);
}

TEST_CASE("zero coefficient approximates to zero on both paths") {
  for (double lambda : {10.0, 100.0, 1000.0}) {
    const auto k0 = approximate_coefficient(Coefficient::zero(1.0), lambda);
    const auto k1 = approximate_coefficient(Coefficient::power(0.0, 2.0, 1.0, 1, 1.0), lambda);
    for (int i = 0; i <= 50; ++i) {
      const double t = i / 50.0;
      REQUIRE(k0.value(t) == 0.0);
      REQUIRE(k1.value(t) == 0.0);
    }
  }
}

namespace {

void check_lemma_inequalities(const Coefficient& c, double lambda, int points, double slack) {
  const auto a = approximate_coefficient(c, lambda);
  const double gap = std::pow(lambda, -2.0 * (1.0 - a.theta()));
  const double ltheta = std::pow(lambda, a.theta());

  double K = 0.0;
  GlaeserEstimate gl;
  if (c.k() == 1) {
    gl = estimate_glaeser(c, points);
    K = gl.K;
  } else if (c.k() >= 2) {
    gl = estimate_glaeser(c, points);
  }

  const double T = c.horizon();
  for (int i = 0; i <= points; ++i) {
    const double t = T * i / points;
    const double cv = c.value(t);
    const double gv = a.value(t);
    const double dgv = a.derivative(t);
    REQUIRE(std::fabs(cv - gv) <= gap + slack);
    REQUIRE(std::pow(cv - gv, 2) <= cv * gap + slack);
    if (c.k() == 0) {
      const double H = c.hoelder().value();
      REQUIRE(std::fabs(dgv) <=
              std::pow(25.0 * H, 1.0 / c.alpha()) * cv * ltheta + slack);
    } else if (c.k() == 1) {
      REQUIRE(std::fabs(dgv) <= 4.0 * K * cv * ltheta + slack);
    } else {
      const double phi = gl.phi[static_cast<std::size_t>(
          std::min<int>(i, static_cast<int>(gl.phi.size()) - 1))];
      if (std::isfinite(phi)) REQUIRE(std::fabs(dgv) <= 4.0 * phi * cv * ltheta + slack);
    }
  }
}

}  // namespace

TEST_CASE("lemma inequalities: c = t declared C^{0,1}, lambda = 10") {
  check_lemma_inequalities(Coefficient::power(1.0, 1.0, 1.0, 0, 1.0), 10.0, 2000, 1e-12);
}

TEST_CASE("lemma inequalities: a small family sweep") {
  check_lemma_inequalities(Coefficient::power(1.0, 2.0, 1.0, 1, 1.0), 100.0, 2000, 1e-12);
  check_lemma_inequalities(Coefficient::sin_squared(5.0, 1.0, 1, 1.0), 1000.0, 2000, 1e-12);
  check_lemma_inequalities(Coefficient::power(1.0, 30.0, 1.0, 2, 1.0), 100.0, 2000, 1e-12);
}

TEST_CASE("gamma vanishes where c starts at zero") {
  for (double lambda : {10.0, 100.0, 1000.0, 10000.0}) {
    REQUIRE(approximate_coefficient(Coefficient::power(1.0, 2.0, 1.0, 1, 1.0), lambda).value(0.0) ==
            0.0);
    REQUIRE(approximate_coefficient(Coefficient::power(1.0, 1.0, 1.0, 0, 1.0), lambda).value(0.0) ==
            0.0);
    REQUIRE(approximate_coefficient(Coefficient::sin_squared(5.0, 1.0, 0, 1.0), lambda).value(0.0) ==
            0.0);
  }
}

TEST_CASE("mollification accuracy for the k = 0 path") {
  const Coefficient c = Coefficient::sin_squared(5.0, 1.0, 0, 1.0);
  const double H = c.hoelder().value();
  for (double lambda : {10.0, 100.0}) {
    const auto a = approximate_coefficient(c, lambda);
    const double eps = a.epsilon();
    for (int i = 0; i <= 800; ++i) {
      const double t = i / 800.0;
      REQUIRE(std::fabs(a.mollified_value(t) - c.value(t)) <=
              H * std::pow(eps, c.alpha()) * (1 + 1e-12));
      REQUIRE(std::fabs(a.mollified_derivative(t)) <=
              H / std::pow(eps, 1.0 - c.alpha()) * (1 + 1e-12));
    }
  }
}

TEST_CASE("gamma is C^1: derivative consistent with finite differences") {
  const Coefficient c = Coefficient::sin_squared(5.0, 1.0, 0, 1.0);
  const auto a = approximate_coefficient(c, 50.0);
  const double h = 1e-7;
  for (int i = 1; i < 40; ++i) {
    const double t = i / 40.0;
    const double fd = (a.value(t + h) - a.value(t - h)) / (2 * h);
    REQUIRE(a.derivative(t) == Catch::Approx(fd).margin(1e-5));
  }
}

TEST_CASE("missing regularity data fails loudly") {
  // table coefficient: no analytic derivative, so no k >= 1 approximation
  const Coefficient tab = Coefficient::table({0.0, 0.5, 1.0}, {0.0, 0.5, 0.2}, 1, 1.0);
  REQUIRE_THROWS_AS(approximate_coefficient(tab, 10.0), CoefficientError);
  // k = 0 without a Hoelder constant
  const Coefficient noH = Coefficient::table({0.0, 0.5, 1.0}, {0.0, 0.5, 0.2}, 0, 1.0);
  REQUIRE_THROWS_AS(approximate_coefficient(noH, 10.0), CoefficientError);
}
