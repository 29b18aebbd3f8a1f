#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "dampedwave/logreal.hpp"
#include "test_util.hpp"

using dampedwave::LogReal;
using dampedwave::log_real;
using dampedwave::log_sum_exp;

TEST_CASE("roundtrip against doubles") {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-50.0, 50.0);
    REQUIRE(log_real(x).to_double() == Catch::Approx(x).epsilon(1e-14));
  }
  REQUIRE(log_real(0.0).is_zero());
  REQUIRE(log_real(0.0).to_double() == 0.0);
}

TEST_CASE("field operations agree with doubles") {
  Rng rng(2);
  for (int i = 0; i < 5000; ++i) {
    const double a = rng.uniform(-20.0, 20.0);
    const double b = rng.uniform(-20.0, 20.0);
    const LogReal la = log_real(a), lb = log_real(b);
    REQUIRE((la + lb).to_double() == Catch::Approx(a + b).margin(1e-12).epsilon(1e-12));
    REQUIRE((la - lb).to_double() == Catch::Approx(a - b).margin(1e-12).epsilon(1e-12));
    REQUIRE((la * lb).to_double() == Catch::Approx(a * b).margin(1e-12).epsilon(1e-12));
    if (b != 0.0)
      REQUIRE((la / lb).to_double() == Catch::Approx(a / b).margin(1e-12).epsilon(1e-12));
  }
}

TEST_CASE("exact cancellation yields zero") {
  const LogReal a = LogReal::from_log(1.0e300, 1);
  REQUIRE((a - a).is_zero());
  REQUIRE((a + (-a)).is_zero());
}

TEST_CASE("magnitudes far beyond double range") {
  // x = exp(1e9), y = exp(1e9 - 3): x - y = x (1 - e^{-3})
  const LogReal x = LogReal::from_log(1.0e9, 1);
  const LogReal y = LogReal::from_log(1.0e9 - 3.0, 1);
  const LogReal d = x - y;
  REQUIRE(d.sign() == 1);
  REQUIRE(d.log_abs() == Catch::Approx(1.0e9 + std::log1p(-std::exp(-3.0))).epsilon(1e-15));

  const LogReal p = x * x;
  REQUIRE(p.log_abs() == Catch::Approx(2.0e9));
  REQUIRE((p / x).log_abs() == Catch::Approx(1.0e9));
  REQUIRE(x.pow(0.5).log_abs() == Catch::Approx(5.0e8));
}

TEST_CASE("ordering matches real numbers") {
  Rng rng(3);
  for (int i = 0; i < 3000; ++i) {
    const double a = rng.uniform(-10.0, 10.0);
    const double b = rng.uniform(-10.0, 10.0);
    REQUIRE((log_real(a) < log_real(b)) == (a < b));
    REQUIRE((log_real(a) <= log_real(b)) == (a <= b));
  }
  REQUIRE(LogReal::from_log(100.0, -1) < LogReal::from_log(1.0, -1));
  REQUIRE(LogReal::from_log(1.0, -1) < LogReal{});
  REQUIRE(LogReal{} < LogReal::from_log(-50.0, 1));
}

TEST_CASE("log_sum_exp against direct sums") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logs;
    double direct = 0.0;
    for (int i = 0; i < 17; ++i) {
      const double v = std::exp(rng.uniform(-30.0, 30.0));
      direct += v;
      logs.push_back(std::log(v));
    }
    REQUIRE(log_sum_exp(logs) == Catch::Approx(std::log(direct)).epsilon(1e-13));
  }
}
