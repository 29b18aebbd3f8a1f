#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "dampedwave/coefficient.hpp"

namespace dampedwave {

/// One spectral component: u'' + 2 delta lambda^{2 sigma} u' + lambda^2 c(t) u = 0.
struct ModalProblem {
  double lambda = 1.0;
  double delta = 0.0;
  double sigma = 0.0;
  Coefficient coefficient;
  double u0 = 0.0;
  double u1 = 0.0;
  double t_start = 0.0;
  double t_end = 1.0;

  double damping() const;  // 2 delta lambda^{2 sigma}
};

struct IntegrationError : std::runtime_error {
  IntegrationError(const std::string& what, double when, double c_value)
      : std::runtime_error(what), t(when), c(c_value) {}
  double t = 0.0;
  double c = 0.0;
};

struct ModalTrajectory {
  enum class Kind { Resolved, Envelope };
  Kind kind = Kind::Resolved;

  std::vector<double> t;
  std::vector<double> u, du;  // linear channel; +-inf once past double range
  std::vector<double> log_abs_u, log_abs_du;
  std::vector<std::int8_t> sign_u, sign_du;

  // Envelope kind: certified upper bound for the approximated hyperbolic
  // energy, as log E(t); the pointwise channels above stay empty.
  std::vector<double> log_envelope;

  double rel_tol = 0.0, abs_tol = 0.0;
  std::size_t steps = 0;
  double max_residual = 0.0;  // relative ODE residual sampled at step midpoints

  std::size_t size() const { return t.size(); }
  void write_csv(std::ostream& os) const;  // t,u,du,log_abs_u,sign_u
};

/// Adaptive Dormand-Prince 5(4) with dense output. The step cap
/// (2 pi / (lambda sqrt(mu) + 1)) / 8 keeps oscillations resolved; once the
/// state passes sqrt(1e300) it is carried rescaled with an accumulated
/// log-scale. Backward spans (t_end < t_start) are supported.
ModalTrajectory integrate(const ModalProblem& problem, double rel_tol, double abs_tol,
                          const std::vector<double>* output_grid = nullptr,
                          std::size_t max_steps = 20000000);

/// Number of steps the oscillation-resolving cap forces for this problem;
/// the integration fast-fails when this exceeds max_steps.
double estimated_steps(const ModalProblem& problem);

/// Exact solution for c == 0: u = u0 - (exp(-2 d l^{2s} t) - 1)/(2 d l^{2s}) u1.
/// Degrades to free drift u0 + u1 t as the damping vanishes.
struct PointState {
  double u = 0.0, du = 0.0;
};
PointState zero_speed_solution(double delta, double sigma, double lambda, double u0, double u1,
                               double t);

/// The oscillating-block closed form:
///   b = (2 m l eps - d l^{2s}) t - eps sin(2 m l t)
///   w = sin(m l t) exp(b)
///   gamma = m^2 + d^2 l^{4s-2} - 16 m^2 eps^2 sin^4(m l t) - 8 m^2 eps sin(2 m l t)
/// satisfying w'' + 2 d l^{2s} w' + l^2 gamma w = 0. The log channel is always
/// populated; b can be far beyond double range only through its inputs, never
/// through exp().
struct BlockSolution {
  double w = 0.0, dw = 0.0;
  double gamma = 0.0;
  double b = 0.0;
  double log_abs_w = 0.0, log_abs_dw = 0.0;
  int sign_w = 0, sign_dw = 0;
};
BlockSolution counterexample_block_solution(double m, double epsilon, double lambda, double delta,
                                            double sigma, double t);

/// Relative residual of the block closed form in the ODE it claims to solve;
/// the common factor exp(b) cancels, so this is overflow-free.
double block_solution_residual(double m, double epsilon, double lambda, double delta, double sigma,
                               double t);

}  // namespace dampedwave
