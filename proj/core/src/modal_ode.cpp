#include "dampedwave/modal_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "format_util.hpp"

namespace dampedwave {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
// Keeping the carried state near unit size makes the error control genuinely
// relative through arbitrarily deep decay or growth; the accumulated log-scale
// holds the real magnitude.
constexpr double kRescaleHi = 1.0e6;
constexpr double kRescaleLo = 1.0e-6;
}  // namespace

double ModalProblem::damping() const { return 2.0 * delta * std::pow(lambda, 2.0 * sigma); }

double estimated_steps(const ModalProblem& p) {
  const double span = std::fabs(p.t_end - p.t_start);
  const double h_max = (2.0 * kPi / (p.lambda * std::sqrt(p.coefficient.mu()) + 1.0)) / 8.0;
  return span / h_max;
}

namespace {

struct State {
  double u, v;
};

struct Deriv {
  double du, dv;
};

// Dormand-Prince 5(4), Hairer's coefficients, FSAL.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct DenseStep {
  double t0, h;
  State c1, c2v, c3v, c4v, c5v;

  State eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State y;
    y.u = c1.u + th * (c2v.u + th1 * (c3v.u + th * (c4v.u + th1 * c5v.u)));
    y.v = c1.v + th * (c2v.v + th1 * (c3v.v + th * (c4v.v + th1 * c5v.v)));
    return y;
  }
  // d/dt of the interpolant; used for residual checks.
  State eval_derivative(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State d;
    d.u = (c2v.u + (1.0 - 2.0 * th) * c3v.u + th * (2.0 - 3.0 * th) * c4v.u +
           2.0 * th * th1 * (1.0 - 2.0 * th) * c5v.u) /
          h;
    d.v = (c2v.v + (1.0 - 2.0 * th) * c3v.v + th * (2.0 - 3.0 * th) * c4v.v +
           2.0 * th * th1 * (1.0 - 2.0 * th) * c5v.v) /
          h;
    return d;
  }
};

class ModeRhs {
 public:
  explicit ModeRhs(const ModalProblem& p)
      : coeff_(p.coefficient), damping_(p.damping()), lambda_sq_(p.lambda * p.lambda) {}
  Deriv operator()(double t, const State& y) const {
    const double c = coeff_.value(t);
    return {y.v, -damping_ * y.v - lambda_sq_ * c * y.u};
  }
  double c(double t) const { return coeff_.value(t); }
  double damping() const { return damping_; }
  double lambda_sq() const { return lambda_sq_; }

 private:
  const Coefficient& coeff_;
  double damping_, lambda_sq_;
};

void push_sample(ModalTrajectory& out, double t, const State& y, double log_scale) {
  const double lu = std::log(std::fabs(y.u)) + log_scale;
  const double lv = std::log(std::fabs(y.v)) + log_scale;
  out.t.push_back(t);
  out.u.push_back(y.u == 0.0 ? 0.0 : y.u * std::exp(log_scale));
  out.du.push_back(y.v == 0.0 ? 0.0 : y.v * std::exp(log_scale));
  out.log_abs_u.push_back(y.u == 0.0 ? -std::numeric_limits<double>::infinity() : lu);
  out.log_abs_du.push_back(y.v == 0.0 ? -std::numeric_limits<double>::infinity() : lv);
  out.sign_u.push_back(y.u > 0.0 ? 1 : (y.u < 0.0 ? -1 : 0));
  out.sign_du.push_back(y.v > 0.0 ? 1 : (y.v < 0.0 ? -1 : 0));
}

}  // namespace

ModalTrajectory integrate(const ModalProblem& problem, double rel_tol, double abs_tol,
                          const std::vector<double>* output_grid, std::size_t max_steps) {
  if (!(rel_tol > 0.0) || rel_tol > 1.0e-4 || !(abs_tol > 0.0) || abs_tol > 1.0e-4)
    throw IntegrationError("tolerances must lie in (0, 1e-4]", problem.t_start, 0.0);
  if (problem.t_start == problem.t_end)
    throw IntegrationError("empty integration span", problem.t_start, 0.0);
  if (estimated_steps(problem) > static_cast<double>(max_steps))
    throw IntegrationError(
        "oscillation-resolving step bound exceeds the step budget; "
        "use the envelope or closed-form paths at this frequency",
        problem.t_start, problem.coefficient.value(problem.t_start));

  const ModeRhs rhs(problem);
  const double dir = problem.t_end > problem.t_start ? 1.0 : -1.0;
  const double span = std::fabs(problem.t_end - problem.t_start);
  const double h_max =
      std::min(span, (2.0 * kPi / (problem.lambda * std::sqrt(problem.coefficient.mu()) + 1.0)) / 8.0);

  ModalTrajectory out;
  out.rel_tol = rel_tol;
  out.abs_tol = abs_tol;

  std::vector<double> grid;
  if (output_grid != nullptr) {
    grid = *output_grid;
  } else {
    const int n = static_cast<int>(std::clamp(span / h_max / 4.0, 200.0, 4000.0)) + 1;
    grid.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      grid[static_cast<std::size_t>(i)] =
          problem.t_start + (problem.t_end - problem.t_start) * i / (n - 1);
  }
  std::size_t next_out = 0;

  double t = problem.t_start;
  State y{problem.u0, problem.u1};
  double log_scale = 0.0;
  Deriv k1 = rhs(t, y);
  double h = dir * std::min(h_max, span / 100.0);

  // leading output points at or before t_start
  while (next_out < grid.size() && dir * (grid[next_out] - t) <= 0.0) {
    push_sample(out, grid[next_out], y, log_scale);
    ++next_out;
  }

  std::size_t steps = 0;
  bool last = false;
  while (!last) {
    if (++steps > max_steps)
      throw IntegrationError("step budget exhausted", t, rhs.c(t));
    if (std::fabs(h) < 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(t) + 1.0e-300)
      throw IntegrationError("step size underflow (stiff failure)", t, rhs.c(t));
    if (dir * (t + h - problem.t_end) >= 0.0) {
      h = problem.t_end - t;
      last = true;
    }

    const Deriv k2 = rhs(t + c2 * h, {y.u + h * a21 * k1.du, y.v + h * a21 * k1.dv});
    const Deriv k3 = rhs(t + c3 * h, {y.u + h * (a31 * k1.du + a32 * k2.du),
                                      y.v + h * (a31 * k1.dv + a32 * k2.dv)});
    const Deriv k4 = rhs(t + c4 * h, {y.u + h * (a41 * k1.du + a42 * k2.du + a43 * k3.du),
                                      y.v + h * (a41 * k1.dv + a42 * k2.dv + a43 * k3.dv)});
    const Deriv k5 =
        rhs(t + c5 * h, {y.u + h * (a51 * k1.du + a52 * k2.du + a53 * k3.du + a54 * k4.du),
                         y.v + h * (a51 * k1.dv + a52 * k2.dv + a53 * k3.dv + a54 * k4.dv)});
    const Deriv k6 = rhs(
        t + h, {y.u + h * (a61 * k1.du + a62 * k2.du + a63 * k3.du + a64 * k4.du + a65 * k5.du),
                y.v + h * (a61 * k1.dv + a62 * k2.dv + a63 * k3.dv + a64 * k4.dv + a65 * k5.dv)});
    const State ynew{
        y.u + h * (a71 * k1.du + a73 * k3.du + a74 * k4.du + a75 * k5.du + a76 * k6.du),
        y.v + h * (a71 * k1.dv + a73 * k3.dv + a74 * k4.dv + a75 * k5.dv + a76 * k6.dv)};
    const Deriv k7 = rhs(t + h, ynew);

    const double erru =
        h * (e1 * k1.du + e3 * k3.du + e4 * k4.du + e5 * k5.du + e6 * k6.du + e7 * k7.du);
    const double errv =
        h * (e1 * k1.dv + e3 * k3.dv + e4 * k4.dv + e5 * k5.dv + e6 * k6.dv + e7 * k7.dv);
    const double scu = abs_tol + rel_tol * std::max(std::fabs(y.u), std::fabs(ynew.u));
    const double scv = abs_tol + rel_tol * std::max(std::fabs(y.v), std::fabs(ynew.v));
    const double err = std::sqrt(0.5 * ((erru / scu) * (erru / scu) + (errv / scv) * (errv / scv)));

    if (err > 1.0) {
      last = false;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    // dense coefficients for [t, t+h]
    DenseStep dense;
    dense.t0 = t;
    dense.h = h;
    dense.c1 = y;
    dense.c2v = {ynew.u - y.u, ynew.v - y.v};
    dense.c3v = {h * k1.du - dense.c2v.u, h * k1.dv - dense.c2v.v};
    dense.c4v = {dense.c2v.u - h * k7.du - dense.c3v.u, dense.c2v.v - h * k7.dv - dense.c3v.v};
    dense.c5v = {h * (d1 * k1.du + d3 * k3.du + d4 * k4.du + d5 * k5.du + d6 * k6.du + d7 * k7.du),
                 h * (d1 * k1.dv + d3 * k3.dv + d4 * k4.dv + d5 * k5.dv + d6 * k6.dv + d7 * k7.dv)};

    // step defect: the increment against the field integrated along the
    // interpolant (4-point Gauss-Legendre), normalized by the field size
    {
      static constexpr double gx[2] = {0.3399810435848563, 0.8611363115940526};
      static constexpr double gw[2] = {0.6521451548625461, 0.3478548451374538};
      const double tc = t + 0.5 * h, hh = 0.5 * h;
      double su = 0.0, sv = 0.0, fscale_u = 0.0, fscale_v = 0.0;
      for (int q = 0; q < 4; ++q) {
        const double tq = q < 2 ? tc - hh * gx[q] : tc + hh * gx[q - 2];
        const double w = q < 2 ? gw[q] : gw[q - 2];
        const State yq = dense.eval(tq);
        const Deriv fq = rhs(tq, yq);
        su += 0.5 * w * fq.du;
        sv += 0.5 * w * fq.dv;
        fscale_u = std::max(fscale_u, std::fabs(fq.du));
        fscale_v = std::max(fscale_v, std::fabs(fq.dv));
      }
      const double du_defect = std::fabs((ynew.u - y.u) / h - su);
      const double dv_defect = std::fabs((ynew.v - y.v) / h - sv);
      const double tiny = std::numeric_limits<double>::min();
      out.max_residual = std::max(
          out.max_residual,
          std::max(du_defect / (fscale_u + tiny), dv_defect / (fscale_v + tiny)));
    }

    while (next_out < grid.size() && dir * (grid[next_out] - (t + h)) <= 0.0) {
      push_sample(out, grid[next_out], dense.eval(grid[next_out]), log_scale);
      ++next_out;
    }

    t += h;
    y = ynew;
    k1 = k7;

    const double mag = std::max(std::fabs(y.u), std::fabs(y.v));
    if (mag > kRescaleHi || (mag > 0.0 && mag < kRescaleLo)) {
      y.u /= mag;
      y.v /= mag;
      k1.du /= mag;
      k1.dv /= mag;
      log_scale += std::log(mag);
    }

    if (!last) h = dir * std::min(h_max, std::fabs(h) * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0));
  }

  while (next_out < grid.size()) {  // trailing points at t_end
    push_sample(out, grid[next_out], y, log_scale);
    ++next_out;
  }
  out.steps = steps;
  return out;
}

PointState zero_speed_solution(double delta, double sigma, double lambda, double u0, double u1,
                               double t) {
  const double a = 2.0 * delta * std::pow(lambda, 2.0 * sigma);
  if (a == 0.0) return {u0 + u1 * t, u1};
  // u = u0 - (exp(-a t) - 1)/a * u1, via expm1 for small arguments
  return {u0 - std::expm1(-a * t) / a * u1, u1 * std::exp(-a * t)};
}

BlockSolution counterexample_block_solution(double m, double epsilon, double lambda, double delta,
                                            double sigma, double t) {
  const double ml = m * lambda;
  const double damp = delta * std::pow(lambda, 2.0 * sigma);
  const double drift = 2.0 * ml * epsilon - damp;

  const double s = std::sin(ml * t);
  const double co = std::cos(ml * t);
  const double s2 = std::sin(2.0 * ml * t);

  BlockSolution r;
  r.b = drift * t - epsilon * s2;
  const double bp = drift - 2.0 * ml * epsilon * std::cos(2.0 * ml * t);
  r.gamma = m * m + delta * delta * std::pow(lambda, 4.0 * sigma - 2.0) -
            16.0 * m * m * epsilon * epsilon * s * s * s * s - 8.0 * m * m * epsilon * s2;

  const double w_core = s;
  const double dw_core = ml * co + s * bp;
  const double eb = std::exp(r.b);
  r.w = w_core * eb;
  r.dw = dw_core * eb;
  r.sign_w = w_core > 0.0 ? 1 : (w_core < 0.0 ? -1 : 0);
  r.sign_dw = dw_core > 0.0 ? 1 : (dw_core < 0.0 ? -1 : 0);
  r.log_abs_w = w_core == 0.0 ? -std::numeric_limits<double>::infinity()
                              : std::log(std::fabs(w_core)) + r.b;
  r.log_abs_dw = dw_core == 0.0 ? -std::numeric_limits<double>::infinity()
                                : std::log(std::fabs(dw_core)) + r.b;
  return r;
}

double block_solution_residual(double m, double epsilon, double lambda, double delta,
                               double sigma, double t) {
  const double ml = m * lambda;
  const double damp = delta * std::pow(lambda, 2.0 * sigma);
  const double drift = 2.0 * ml * epsilon - damp;

  const double s = std::sin(ml * t);
  const double co = std::cos(ml * t);
  const double s2 = std::sin(2.0 * ml * t);
  const double c2v = std::cos(2.0 * ml * t);

  const double sp = ml * co;
  const double spp = -ml * ml * s;
  const double bp = drift - 2.0 * ml * epsilon * c2v;
  const double bpp = 4.0 * ml * ml * epsilon * s2;
  const double gamma = m * m + delta * delta * std::pow(lambda, 4.0 * sigma - 2.0) -
                       16.0 * m * m * epsilon * epsilon * s * s * s * s -
                       8.0 * m * m * epsilon * s2;

  // exp(b) cancels in the relative residual
  const double wpp = spp + 2.0 * sp * bp + s * (bpp + bp * bp);
  const double wp = sp + s * bp;
  const double core = wpp + 2.0 * damp * wp + lambda * lambda * gamma * s;
  const double scale = std::fabs(wpp) + 2.0 * damp * std::fabs(wp) +
                       lambda * lambda * std::fabs(gamma) * std::fabs(s) +
                       std::numeric_limits<double>::min();
  return std::fabs(core) / scale;
}

void ModalTrajectory::write_csv(std::ostream& os) const {
  os << "t,u,du,log_abs_u,sign_u\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << detail::fmt(t[i]) << ',' << detail::fmt(u[i]) << ',' << detail::fmt(du[i]) << ','
       << detail::fmt(log_abs_u[i]) << ',' << int(sign_u[i]) << '\n';
  }
}

}  // namespace dampedwave
