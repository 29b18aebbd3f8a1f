#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dampedwave/counterexample.hpp"
#include "dampedwave/modal_ode.hpp"
#include "test_util.hpp"

using namespace dampedwave;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

CounterexampleParams default_params(int depth) {
  CounterexampleParams p;
  p.delta = 1.0;
  p.sigma = 0.0;
  p.k = 0;
  p.alpha = 1.0;
  p.n_max = depth;
  return p;
}
}  // namespace

TEST_CASE("blender is a smooth monotone step") {
  REQUIRE(blender(-0.5) == 0.0);
  REQUIRE(blender(0.0) == 0.0);
  REQUIRE(blender(1.0) == 1.0);
  REQUIRE(blender(1.5) == 1.0);
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double v = blender(i / 200.0);
    REQUIRE(v >= prev);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    prev = v;
  }
  // flat jets at both ends
  for (int p = 1; p <= 4; ++p) {
    REQUIRE(blender_jet(0.0).derivative(p) == 0.0);
    REQUIRE(blender_jet(1.0).derivative(p) == 0.0);
  }
  // strictly increasing inside
  REQUIRE(blender(0.5) > blender(0.25));
  REQUIRE(blender(0.75) > blender(0.5));
}

TEST_CASE("oscillation profile f") {
  for (int z = -3; z <= 6; ++z)
    REQUIRE(junction_f(kPi * z) == Catch::Approx(0.0).margin(1e-13));
  for (int i = 0; i <= 1000; ++i) {
    const double x = -2.0 + 8.0 * i / 1000.0;
    const double v = junction_f(x);
    REQUIRE(v >= -0.5);
    REQUIRE(v <= 0.5);
    REQUIRE(junction_f(x + kPi) == Catch::Approx(v).margin(1e-12));
  }
  // antiderivative really integrates f
  const double h = 1e-6;
  for (double x : {0.3, 1.2, 2.9, 4.4}) {
    const double fd =
        (junction_f_antiderivative(x + h) - junction_f_antiderivative(x - h)) / (2 * h);
    REQUIRE(fd == Catch::Approx(junction_f(x)).margin(1e-9));
  }
}

TEST_CASE("junctions match the oscillation at the seams") {
  // g1 glues 0 to f at pi, g2 glues f at 0 to 0 at pi
  const Jet<4> g1_at_0 = junction_g1_jet(0.0);
  const Jet<4> g1_at_pi = junction_g1_jet(kPi);
  const Jet<4> f_at_pi = junction_f_jet(kPi);
  const Jet<4> g2_at_0 = junction_g2_jet(0.0);
  const Jet<4> f_at_0 = junction_f_jet(0.0);
  const Jet<4> g2_at_pi = junction_g2_jet(kPi);
  for (int p = 0; p <= 4; ++p) {
    REQUIRE(g1_at_0.derivative(p) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(g1_at_pi.derivative(p) == Catch::Approx(f_at_pi.derivative(p)).margin(1e-10));
    REQUIRE(g2_at_0.derivative(p) == Catch::Approx(f_at_0.derivative(p)).margin(1e-10));
    REQUIRE(g2_at_pi.derivative(p) == Catch::Approx(0.0).margin(1e-12));
  }
  for (int i = 0; i <= 400; ++i) {
    const double x = kPi * i / 400.0;
    REQUIRE(std::fabs(junction_g1(x)) <= 0.5 + 1e-12);
    REQUIRE(std::fabs(junction_g2(x)) <= 0.5 + 1e-12);
  }
}

TEST_CASE("sequence selection satisfies every stated condition") {
  const auto bundle = select_sequences(default_params(4));
  REQUIRE(bundle.epsilon == 0.03125);
  REQUIRE(bundle.seq.size() == 6);  // levels 0..4 plus the truncation floor
  const auto rep = verify_sequences(bundle);
  REQUIRE(rep.all_ok);
  for (const auto& row : rep.rows) {
    REQUIRE(row.li_1);
    REQUIRE(row.li_2);
    REQUIRE(row.li_3);
    REQUIRE(row.li_alpha);
    REQUIRE(row.li_tremenda);
    REQUIRE(row.ordering);
    REQUIRE(row.m_bounds);
    REQUIRE(row.gaps);
    REQUIRE(row.doubling_stable);
  }
  // lambdas escalate brutally fast
  REQUIRE(bundle.seq[1].log_lambda > 50.0);
  REQUIRE(bundle.seq[2].log_lambda > bundle.seq[1].log_lambda * 4.0);
}

TEST_CASE("selection rejects the borderline exponent") {
  auto p = default_params(2);
  p.sigma = 1.0 / 3.0;  // exactly 1/(2+k+alpha)
  REQUIRE_THROWS_AS(select_sequences(p), SelectionError);
  p.sigma = 0.4;
  REQUIRE_THROWS_AS(select_sequences(p), SelectionError);
}

TEST_CASE("amplitude definition in log form") {
  const auto bundle = select_sequences(default_params(3));
  const double theta = bundle.theta;
  for (int n = 0; n <= 3; ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const LogReal expected =
        LogReal::from_double(-(1.0 - theta) * e.log_lambda - std::log(double(n + 1)) -
                             theta * e.log_lambda) -
        LogReal::from_log(e.theta_n * e.log_lambda);
    REQUIRE(e.log_a.sign() == expected.sign());
    REQUIRE(e.log_a.log_abs() == Catch::Approx(expected.log_abs()).epsilon(1e-12));
  }
}

TEST_CASE("coefficient blocks take the value M_n at their corners") {
  const auto bundle = select_sequences(default_params(3));
  const Coefficient c = build_coefficient(bundle);
  for (int n = 0; n <= 1; ++n) {  // representable blocks
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const double M = e.M.to_double();
    for (const LogReal& pt : {e.t_prime, e.t, e.s, e.s_prime}) {
      REQUIRE(c.value(pt.to_double()) == Catch::Approx(M).epsilon(1e-9));
    }
  }
}

TEST_CASE("coefficient bounds on the oscillating block") {
  const auto bundle = select_sequences(default_params(2));
  const Coefficient c = build_coefficient(bundle);
  const auto& e0 = bundle.seq[0];
  const double lo = 0.5 * std::exp(-2.0 * (1.0 - bundle.theta) * e0.log_lambda);
  const double hi = 2.0 * std::exp(-2.0 * (1.0 - bundle.theta) * e0.log_lambda);
  const double a = e0.t_prime.to_double(), b = e0.s_prime.to_double();
  for (int i = 0; i <= 5000; ++i) {
    const double t = a + (b - a) * i / 5000.0;
    const double v = c.value(t);
    REQUIRE(v >= lo * (1 - 1e-12));
    REQUIRE(v <= hi * (1 + 1e-12));
  }
  REQUIRE(c.value(-1.0) == 0.0);
  REQUIRE(c.value(b * 2.0) == Catch::Approx(e0.M.to_double()));
  REQUIRE(c.mu() >= c.value(0.5 * (e0.t.to_double() + e0.s.to_double())));
}

TEST_CASE("coefficient value is continuous at the breakpoints") {
  const auto bundle = select_sequences(default_params(2));
  const Coefficient c = build_coefficient(bundle);
  for (int n = 0; n <= 1; ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const double lam_theta = std::exp(bundle.theta * e.log_lambda);
    for (const LogReal& pt : {e.t_prime, e.t, e.s, e.s_prime}) {
      const double t = pt.to_double();
      // a pointwise probe only means something where the oscillation phase is
      // resolvable in double t; deeper breakpoints are covered by the
      // normalized jet checks in verify_regularity
      if (lam_theta * t * 1e-11 > 1e-4) continue;
      const double eps = t * 1e-11;
      REQUIRE(c.value(t - eps) == Catch::Approx(c.value(t + eps)).epsilon(1e-6));
    }
  }
}

TEST_CASE("coefficient matches the closed-form block on [t_0, s_0]") {
  const auto bundle = select_sequences(default_params(2));
  const Coefficient c = build_coefficient(bundle);
  const auto& e0 = bundle.seq[0];
  const double m = e0.m.to_double(), lam = e0.lambda.to_double();
  const double a = e0.t.to_double(), b = e0.s.to_double();
  for (int i = 0; i <= 4000; ++i) {
    const double t = a + (b - a) * i / 4000.0;
    const auto block = counterexample_block_solution(m, bundle.epsilon, lam, bundle.params.delta,
                                                     bundle.params.sigma, t);
    REQUIRE(c.value(t) == Catch::Approx(block.gamma).epsilon(1e-12));
  }
}

TEST_CASE("coefficient antiderivative agrees with quadrature") {
  const auto bundle = select_sequences(default_params(2));
  const Coefficient c = build_coefficient(bundle);
  const auto& e0 = bundle.seq[0];
  // composite Gauss-Legendre oracle across the top block
  static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  auto quad = [&](double a, double b) {
    const int panels = 4000;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double lo = a + (b - a) * i / panels, hi = a + (b - a) * (i + 1) / panels;
      const double mid = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      double s = 0.0;
      for (int q = 0; q < 4; ++q) s += ws[q] * (c.value(mid - h * xs[q]) + c.value(mid + h * xs[q]));
      total += s * h;
    }
    return total;
  };
  const double t1 = e0.s_prime.to_double() * 1.2;
  const double t0 = bundle.seq[1].s_prime.to_double();
  const double oracle = quad(t0, t1);
  const double got = c.antiderivative(t1) - c.antiderivative(t0);
  REQUIRE(got == Catch::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("mode data at s_n: zero value, exact velocity magnitude") {
  const auto bundle = select_sequences(default_params(2));
  const auto& e = bundle.seq[0];
  const double m = e.m.to_double(), lam = e.lambda.to_double(), sn = e.s.to_double();
  const auto block =
      counterexample_block_solution(m, bundle.epsilon, lam, bundle.params.delta, 0.0, sn);
  // sin(m lambda s_n) = 0 by construction (integer multiple of pi)
  REQUIRE(std::fabs(block.w) <= 1e-9 * std::fabs(block.dw));
  const double expected =
      m * lam * std::exp((2.0 * bundle.epsilon * m * lam - bundle.params.delta) * sn);
  REQUIRE(std::fabs(block.dw) == Catch::Approx(expected).epsilon(1e-9));
}

TEST_CASE("regularity report at depth 3") {
  const auto bundle = select_sequences(default_params(3));
  const auto rep = verify_regularity(bundle, 4);
  REQUIRE(rep.all_ok);
  REQUIRE(rep.hoelder_ratio <= 2.0);
  REQUIRE(rep.endpoint_hoelder_ok);
  REQUIRE(rep.near_zero_ok);
  REQUIRE(rep.Gamma.size() == 4);
  REQUIRE(rep.Gamma[0] >= 0.5);  // |f'| reaches 1/2 at the zeros of sin
  for (const auto& blk : rep.blocks) {
    REQUIRE(blk.c_bounds_ok);
    REQUIRE(blk.max_breakpoint_mismatch <= 1e-8);
  }
  // the empirical Gamma_1 used by the energy floor covers the profile sup
  REQUIRE(bundle.gamma1 >= rep.Gamma[0] - 1e-9);
}

TEST_CASE("pathology demonstration at depth 4") {
  const auto bundle = select_sequences(default_params(4));
  const double t_eval = bundle.seq[0].s.to_double();
  const auto rep = pathology_demo(bundle, 1.0, 1.6, 1.6, 1.0, t_eval);
  REQUIRE(rep.all_ok);
  REQUIRE(rep.n0 >= 0);
  REQUIRE(rep.n0 <= 4);
  REQUIRE(rep.usable_from == 0);
  REQUIRE(rep.initial_series_summable);
  REQUIRE(rep.divergent_series_diverges);

  // mode 0 is integrable and must be cross-checked numerically
  REQUIRE(!rep.modes[0].analytic_only);
  REQUIRE(rep.modes[0].closed_form_mismatch >= 0.0);
  REQUIRE(rep.modes[0].closed_form_mismatch <= 1e-6);
  REQUIRE(rep.modes[0].backward_bound_ok);
  for (const auto& m : rep.modes) {
    REQUIRE(m.E0_within_paper_bound);
    REQUIRE(m.fk_sk_ok);
  }

  // the initial-time terms match the paper-side bound recomputed here
  const double theta = bundle.theta;
  for (const auto& m : rep.modes) {
    const auto& e = bundle.seq[static_cast<std::size_t>(m.n)];
    const LogReal paper_bound =
        LogReal::from_double(-2.0 * std::log(double(m.n + 1)) + 5.0 * kPi) -
        LogReal::from_log(std::log(2.0) + e.theta_n * e.log_lambda) +
        LogReal::from_log(std::log(2.0) + e.log_lambda / 1.6);
    (void)theta;
    // our term uses the exact damping correction, so it can only sit below
    REQUIRE(m.log_term_initial <= paper_bound + LogReal::from_double(1e-9));
  }
}

TEST_CASE("pathology rejects out-of-range Gevrey orders") {
  const auto bundle = select_sequences(default_params(1));
  REQUIRE_THROWS_AS(pathology_demo(bundle, 1.0, 1.4, 1.6, 1.0, 1.0), SelectionError);
  REQUIRE_THROWS_AS(pathology_demo(bundle, 1.0, 1.6, 1.6, 1.0, -1.0), SelectionError);
}

TEST_CASE("growth oracle increases along the subsequence") {
  const auto bundle = select_sequences(default_params(4));
  const auto o = growth_oracle(bundle);
  REQUIRE(o.G.size() == 5);
  for (std::size_t n = 1; n < o.G.size(); ++n) {
    REQUIRE(o.G[n].sign() == 1);
    REQUIRE(o.G[n] > o.G[n - 1]);
  }
}

TEST_CASE("bundle serializes with both linear and log channels") {
  const auto bundle = select_sequences(default_params(2));
  const std::string js = bundle.to_json();
  REQUIRE(js.find("\"log10\"") != std::string::npos);
  REQUIRE(js.find("\"linear\"") != std::string::npos);
  REQUIRE(js.find("\"epsilon\": 0.03125") != std::string::npos);
}

TEST_CASE("depth zero still builds a verified single block") {
  const auto bundle = select_sequences(default_params(0));
  REQUIRE(verify_sequences(bundle).all_ok);
  const Coefficient c = build_coefficient(bundle);
  REQUIRE(c.value(bundle.seq[0].t.to_double()) ==
          Catch::Approx(bundle.seq[0].M.to_double()).epsilon(1e-10));
  const auto rep = verify_regularity(bundle, 2);
  REQUIRE(rep.all_ok);
}
