#include "dampedwave/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "dampedwave/logreal.hpp"
#include "format_util.hpp"
#include "json.hpp"

namespace dampedwave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1.0e-6;  // multiplicative slack on the bound
}  // namespace

HyperbolicEnergyParams choose_constants(double delta, double mu, double sigma, int k, double alpha,
                                        double regularity_constant) {
  if (!(delta > 0.0)) throw OutsideRegimeError("delta must be positive");
  const double theta = theta_exponent(k, alpha);
  if (!(sigma > theta / 2.0) || sigma > 0.5)
    throw OutsideRegimeError("sigma outside Theorem 3.1 regime (needs 1/(2+k+alpha) < sigma <= 1/2)");

  HyperbolicEnergyParams p;
  p.delta = delta;
  p.sigma = sigma;
  p.mu = mu;
  p.k = k;
  p.alpha = alpha;
  p.theta = theta;
  p.regularity_constant = regularity_constant;

  const double r1 = mu > 0.0 ? delta / (2.0 * mu) : kInf;
  const double r2 = delta / (16.0 * (delta * delta + mu));
  const double r3 = mu > 0.0 ? 1.0 / (8.0 * std::sqrt(mu)) : kInf;
  p.r = std::min({r1, r2, r3});
  p.r_active = p.r == r2 ? "16r(delta^2+mu)<=delta" : (p.r == r1 ? "2r*mu<=delta" : "64r^2*mu<=1");

  const double ex = 2.0 * sigma - theta;  // > 0 in the admissible regime
  const double base = std::max(1.0, std::pow(4.0 / delta, 1.0 / ex));
  p.base_nu = base;
  double extra = 0.0;
  if (k == 0) {
    const double H = regularity_constant;
    if (H > 0.0) extra = std::pow(2.0 / delta * std::pow(25.0 * H, 1.0 / alpha), 1.0 / ex);
  } else if (k == 1) {
    const double K = regularity_constant;
    if (K > 0.0) extra = std::pow(8.0 * K / delta, 1.0 / ex);
  } else {
    extra = std::pow(std::sqrt(2.0) / delta, 1.0 / ex);
  }
  p.nu = std::max(base, extra);
  p.nu_active = p.nu == base ? "delta*nu^{2s-theta}>=4" : "k-dependent condition";
  return p;
}

QuadraticFormCheck quadratic_form_check(const HyperbolicEnergyParams& p, double c_val,
                                        double gamma_val, double lambda) {
  QuadraticFormCheck q;
  const double l2s = std::pow(lambda, 2.0 * p.sigma);
  // normalized: X/l^{2s}, Y/l^{2+2s}, Z/l^{1+2s}
  const double xn = 3.0 * p.delta - 4.0 * p.r * c_val;
  const double yn = c_val * (0.5 * p.delta - 4.0 * p.r * p.delta * p.delta *
                                                 std::pow(lambda, 4.0 * p.sigma - 2.0) -
                             4.0 * p.r * gamma_val);
  const double zn = 2.0 * (c_val - gamma_val) * std::pow(lambda, 1.0 - 2.0 * p.sigma) -
                    4.0 * p.r * p.delta * c_val * std::pow(lambda, 2.0 * p.sigma - 1.0);
  q.margin_x = xn;
  q.margin_y = yn;
  q.margin_xyz = 4.0 * xn * yn - zn * zn;
  q.positive = xn >= 0.0 && yn >= 0.0 && q.margin_xyz >= 0.0;
  q.X = xn * l2s;
  q.Y = yn * std::pow(lambda, 2.0 + 2.0 * p.sigma);
  q.Z = zn * std::pow(lambda, 1.0 + 2.0 * p.sigma);
  return q;
}

bool q2_nonpositive(const HyperbolicEnergyParams& p, double c_val, double gamma_prime,
                    double lambda, double* margin) {
  // Q2 <= 0 iff gamma' <= (delta/2) c l^{2s}
  const double m = 0.5 * p.delta * c_val - gamma_prime * std::pow(lambda, -2.0 * p.sigma);
  if (margin != nullptr) *margin = m;
  return m >= 0.0;
}

namespace {

double log_sum2(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

struct FormScan {
  double min_x = kInf, min_y = kInf, min_xyz = kInf, min_q2 = kInf;
  bool ok = true;

  void absorb(const HyperbolicEnergyParams& p, const ApproximatedCoefficient& gamma,
              const Coefficient& c, double lambda, double t) {
    const double cv = c.value(t);
    const double gv = gamma.value(t);
    const auto q = quadratic_form_check(p, cv, gv, lambda);
    min_x = std::min(min_x, q.margin_x);
    min_y = std::min(min_y, q.margin_y);
    min_xyz = std::min(min_xyz, q.margin_xyz);
    double m2 = 0.0;
    if (p.k <= 1) {
      q2_nonpositive(p, cv, gamma.derivative(t), lambda, &m2);
    } else {
      // the k >= 2 chain needs |c - gamma| <= (delta^2/2) l^{4s-2}
      m2 = 0.5 * p.delta * p.delta - std::fabs(cv - gv) * std::pow(lambda, 2.0 - 4.0 * p.sigma);
    }
    min_q2 = std::min(min_q2, m2);
    ok = ok && q.positive && m2 >= 0.0;
  }
};

// Extremal rate of (-Q1 + Q2)/E_gamma: largest generalized eigenvalue of the
// 2x2 pencil in the scaled variables (delta l^{2s} u, u'). Nonpositive
// wherever the quadratic form checks hold.
double extremal_rate(const HyperbolicEnergyParams& p, double c_val, double gamma_val,
                     double gamma_prime, double lambda) {
  const double l2s = std::pow(lambda, 2.0 * p.sigma);
  const double p2 = p.delta * p.delta * l2s * l2s;  // (delta l^{2s})^2

  const double G_uu = 1.0 + gamma_val * std::pow(lambda, 2.0 - 4.0 * p.sigma) / (p.delta * p.delta);
  const double G_uv = 0.5;
  const double G_vv = 1.0;

  const auto q = quadratic_form_check(p, c_val, gamma_val, lambda);
  const double S_vv = -q.X;
  const double S_uu_raw = -q.Y - 0.5 * p.delta * c_val * std::pow(lambda, 2.0 + 2.0 * p.sigma) +
                          gamma_prime * lambda * lambda;
  const double S_uu = S_uu_raw / p2;
  const double S_uv = -0.5 * q.Z / (p.delta * l2s);

  const double A = G_uu * G_vv - G_uv * G_uv;
  const double B = -(S_uu * G_vv + S_vv * G_uu - 2.0 * S_uv * G_uv);
  const double C = S_uu * S_vv - S_uv * S_uv;
  const double disc = std::max(B * B - 4.0 * A * C, 0.0);
  return (-B + std::sqrt(disc)) / (2.0 * A);
}

}  // namespace

EnvelopeResult certified_envelope(const ModalProblem& problem,
                                  const HyperbolicEnergyParams& params, int n_points) {
  const Coefficient& c = problem.coefficient;
  const double lambda = problem.lambda;
  const ApproximatedCoefficient gamma = approximate_coefficient(c, lambda);
  const double l2s = std::pow(lambda, 2.0 * params.sigma);

  EnvelopeResult res;
  ModalTrajectory& traj = res.trajectory;
  traj.kind = ModalTrajectory::Kind::Envelope;

  const int n = std::max(n_points, 9);
  traj.t.resize(static_cast<std::size_t>(n));
  traj.log_envelope.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    traj.t[static_cast<std::size_t>(i)] =
        problem.t_start + (problem.t_end - problem.t_start) * i / (n - 1);

  // E_gamma(0), exact signed sum
  const double g0 = gamma.value(problem.t_start);
  LogReal e0 = log_real(problem.u1 * problem.u1);
  e0 += log_real(params.delta * params.delta) * LogReal::from_log(4.0 * params.sigma * std::log(lambda)) *
        log_real(problem.u0 * problem.u0);
  e0 += log_real(params.delta) * LogReal::from_log(2.0 * params.sigma * std::log(lambda)) *
        log_real(problem.u0 * problem.u1);
  e0 += log_real(g0) * log_real(lambda * lambda) * log_real(problem.u0 * problem.u0);
  double log_e = e0.is_zero() ? -kInf : e0.log();

  FormScan scan;
  auto rate_at = [&](double t) {
    scan.absorb(params, gamma, c, lambda, t);
    return -4.0 * params.r * c.value(t) * l2s +
           extremal_rate(params, c.value(t), gamma.value(t), gamma.derivative(t), lambda);
  };

  traj.log_envelope[0] = log_e;
  double rate_left = rate_at(traj.t[0]);
  for (int i = 1; i < n; ++i) {
    const double a = traj.t[static_cast<std::size_t>(i - 1)];
    const double b = traj.t[static_cast<std::size_t>(i)];
    const double rate_mid = rate_at(0.5 * (a + b));
    const double rate_right = rate_at(b);
    // upper Riemann bound keeps the envelope certified
    log_e += std::max({rate_left, rate_mid, rate_right}) * (b - a);
    traj.log_envelope[static_cast<std::size_t>(i)] = log_e;
    rate_left = rate_right;
  }

  res.forms_ok = scan.ok;
  res.min_margin_x = scan.min_x;
  res.min_margin_y = scan.min_y;
  res.min_margin_xyz = scan.min_xyz;
  res.min_margin_q2 = scan.min_q2;
  return res;
}

EnergyReport verify_decay_estimate(const ModalProblem& problem,
                                   const HyperbolicEnergyParams& params,
                                   const ModalTrajectory& trajectory) {
  EnergyReport rep;
  rep.lambda = problem.lambda;
  rep.r = params.r;
  rep.nu = params.nu;
  rep.path = trajectory.kind == ModalTrajectory::Kind::Envelope ? "envelope" : "resolved";

  if (problem.lambda < params.nu) {
    rep.status = EnergyReport::Status::BelowThreshold;
    return rep;
  }
  const Coefficient& c = problem.coefficient;
  // degenerate start: truncated constructions may sit at a sub-resolution floor
  if (!(c.value(0.0) <= 1.0e-9 * std::max(c.mu(), 1.0)))
    throw OutsideRegimeError("decay estimate needs c(0) = 0");

  const double lambda = problem.lambda;
  const double delta = params.delta;
  const double l4s = std::pow(lambda, 4.0 * params.sigma);
  const double l2s = std::pow(lambda, 2.0 * params.sigma);
  const ApproximatedCoefficient gamma = approximate_coefficient(c, lambda);

  GlaeserEstimate glaeser;
  if (params.k >= 2) glaeser = estimate_glaeser(c, 10000);

  const double data = problem.u1 * problem.u1 + delta * delta * l4s * problem.u0 * problem.u0;
  const double log_data3 = data > 0.0 ? std::log(3.0 * data) : -kInf;

  const std::size_t n = trajectory.size();
  rep.t = trajectory.t;
  rep.log_lhs.resize(n);
  rep.log_bound.resize(n);
  rep.margin.resize(n);
  const bool resolved = trajectory.kind == ModalTrajectory::Kind::Resolved;
  if (resolved) {
    rep.log_E_classic.resize(n);
    rep.log_E_gamma.resize(n);
    rep.log_F.resize(n);
  }

  FormScan scan;
  rep.status = EnergyReport::Status::Pass;
  rep.min_margin = kInf;
  const double slack = std::log1p(kSlack);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = trajectory.t[i];
    scan.absorb(params, gamma, c, lambda, t);

    double log_lhs;
    if (resolved) {
      const double lu = trajectory.log_abs_u[i];
      const double ldu = trajectory.log_abs_du[i];
      log_lhs = log_sum2(2.0 * ldu, 2.0 * std::log(delta) + 4.0 * params.sigma * std::log(lambda) +
                                        2.0 * lu);
      rep.log_E_classic[i] = log_sum2(2.0 * ldu, 2.0 * std::log(lambda) + 2.0 * lu);
      const double cv = c.value(t);
      rep.log_F[i] =
          log_sum2(2.0 * ldu, cv > 0.0 ? std::log(cv) + 2.0 * std::log(lambda) + 2.0 * lu : -kInf);
      // signed sum for the approximated hyperbolic energy
      LogReal eg = LogReal::from_log(2.0 * ldu) +
                   LogReal::from_log(2.0 * std::log(delta * l2s) + 2.0 * lu) +
                   LogReal::from_log(std::log(delta * l2s) + lu + ldu,
                                     trajectory.sign_u[i] * trajectory.sign_du[i]) +
                   log_real(gamma.value(t)) * LogReal::from_log(2.0 * std::log(lambda) + 2.0 * lu);
      rep.log_E_gamma[i] = eg.is_zero() ? -kInf : eg.log();
    } else {
      log_lhs = std::log(2.0) + trajectory.log_envelope[i];
    }

    double log_bound = log_data3 - 4.0 * params.r * l2s * c.antiderivative(t);
    if (params.k >= 2)
      log_bound += 4.0 * std::pow(lambda, params.theta) * glaeser.Phi_at(t);

    rep.log_lhs[i] = log_lhs;
    rep.log_bound[i] = log_bound;
    const double m = (log_bound == -kInf && log_lhs == -kInf) ? 0.0 : log_bound - log_lhs;
    rep.margin[i] = m;
    rep.min_margin = std::min(rep.min_margin, m);
    if (!(log_lhs <= log_bound + slack) && rep.status == EnergyReport::Status::Pass) {
      rep.status = EnergyReport::Status::Fail;
      rep.first_violation = t;
    }
  }

  rep.forms_ok = scan.ok;
  rep.min_margin_x = scan.min_x;
  rep.min_margin_y = scan.min_y;
  rep.min_margin_xyz = scan.min_xyz;
  rep.min_margin_q2 = scan.min_q2;
  return rep;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit f;
  const std::size_t n = x.size();
  if (n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / d;
  f.intercept = (sy - f.slope * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    rss += r * r;
  }
  f.rms_residual = std::sqrt(rss / n);
  return f;
}

GrowthMeasurement measure_growth_exponent(const std::function<ModalProblem(double)>& family,
                                          std::span<const double> lambdas, double rel_tol,
                                          double abs_tol) {
  if (lambdas.size() < 4)
    throw OutsideRegimeError("growth measurement needs at least 4 frequencies");
  GrowthMeasurement g;
  g.lambdas.assign(lambdas.begin(), lambdas.end());
  g.G.resize(lambdas.size());

  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const ModalProblem p = family(lambdas[i]);
    const double ll = 2.0 * std::log(p.lambda);
    auto log_energy = [&](const ModalTrajectory& tr, std::size_t j) {
      return log_sum2(2.0 * tr.log_abs_du[j], ll + 2.0 * tr.log_abs_u[j]);
    };

    ModalTrajectory tr = integrate(p, rel_tol, abs_tol);
    const double e0 = log_energy(tr, 0);
    double best = -kInf;
    std::size_t best_j = 0;
    for (std::size_t j = 1; j < tr.size(); ++j) {
      const double e = log_energy(tr, j);
      if (e > best) {
        best = e;
        best_j = j;
      }
    }
    // dense refinement near the detected maximum: envelopes peak between samples
    const std::size_t lo = best_j > 0 ? best_j - 1 : 0;
    const std::size_t hi = std::min(best_j + 1, tr.size() - 1);
    if (hi > lo) {
      std::vector<double> fine(65);
      for (std::size_t q = 0; q < fine.size(); ++q)
        fine[q] = tr.t[lo] + (tr.t[hi] - tr.t[lo]) * static_cast<double>(q) / (fine.size() - 1);
      ModalTrajectory ref = integrate(p, rel_tol, abs_tol, &fine);
      for (std::size_t j = 0; j < ref.size(); ++j) best = std::max(best, log_energy(ref, j));
    }
    g.G[i] = best - e0;
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < g.G.size(); ++i) {
    if (g.G[i] > 1.0e-9) {
      xs.push_back(std::log(g.lambdas[i]));
      ys.push_back(std::log(g.G[i]));
    }
  }
  g.fit_points = xs.size();
  if (xs.empty()) {
    g.dissipative = true;
    return g;
  }
  if (xs.size() >= 2) {
    const LineFit f = fit_line(xs, ys);
    g.exponent = f.slope;
    g.intercept = f.intercept;
    g.fit_residual = f.rms_residual;
  }
  return g;
}

void EnergyReport::write_csv(std::ostream& os) const {
  os << "t,energy,bound,margin,log_energy,log_bound\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << detail::fmt(t[i]) << ',' << detail::fmt(std::exp(log_lhs[i])) << ','
       << detail::fmt(std::exp(log_bound[i])) << ',' << detail::fmt(margin[i]) << ','
       << detail::fmt(log_lhs[i]) << ',' << detail::fmt(log_bound[i]) << '\n';
  }
}

std::string EnergyReport::summary_json() const {
  nlohmann::ordered_json j;
  switch (status) {
    case Status::Pass: j["verdict"] = "pass"; break;
    case Status::Fail: j["verdict"] = "fail"; break;
    case Status::BelowThreshold: j["verdict"] = "below frequency threshold, estimate not asserted"; break;
  }
  j["path"] = path;
  j["first_violation"] = first_violation;
  j["min_margin"] = min_margin;
  j["forms"] = {{"ok", forms_ok},
                {"min_margin_x", min_margin_x},
                {"min_margin_y", min_margin_y},
                {"min_margin_xyz", min_margin_xyz},
                {"min_margin_q2", min_margin_q2}};
  j["constants"] = {{"lambda", lambda}, {"r", r}, {"nu", nu}};
  return j.dump(2);
}

}  // namespace dampedwave
