#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dampedwave/approximation.hpp"
#include "dampedwave/glaeser.hpp"
#include "dampedwave/modal_ode.hpp"

namespace dampedwave {

struct OutsideRegimeError : std::runtime_error {
  explicit OutsideRegimeError(const std::string& what) : std::runtime_error(what) {}
};

/// The constants of the hyperbolic-energy machinery:
///   r: largest value with 2 r mu <= delta, 16 r (delta^2 + mu) <= delta,
///      64 r^2 mu <= 1;
///   nu: smallest frequency with nu >= 1, delta nu^{2 sigma - theta} >= 4 and
///       the k-dependent extra condition.
struct HyperbolicEnergyParams {
  double r = 0.0;
  double nu = 0.0;
  double base_nu = 0.0;  // from the two base conditions alone
  double delta = 0.0, sigma = 0.0, mu = 0.0, alpha = 1.0, theta = 0.0;
  int k = 0;
  double regularity_constant = 0.0;  // H for k=0, K for k=1, unused for k>=2
  std::string r_active, nu_active;
};

/// regularity_constant: Hoelder constant H (k=0), Glaeser constant K (k=1),
/// ignored for k>=2. Throws OutsideRegimeError unless
/// 1/(2+k+alpha) < sigma <= 1/2.
HyperbolicEnergyParams choose_constants(double delta, double mu, double sigma, int k, double alpha,
                                        double regularity_constant);

/// Coefficients of the quadratic form Q1 at one point, and its positivity
/// via X >= 0, Y >= 0, 4 X Y >= Z^2 (checked in a lambda-normalized scaling
/// so the test stays meaningful when the raw values overflow).
struct QuadraticFormCheck {
  double X = 0.0, Y = 0.0, Z = 0.0;
  bool positive = false;
  // normalized margins: X/l^{2s}, Y/(l^{2+2s}), (4XY - Z^2)/l^{2+4s}
  double margin_x = 0.0, margin_y = 0.0, margin_xyz = 0.0;
};
QuadraticFormCheck quadratic_form_check(const HyperbolicEnergyParams& params, double c_val,
                                        double gamma_val, double lambda);

/// Q2 <= 0 is equivalent to gamma'(t) <= (delta/2) c(t) lambda^{2 sigma};
/// returns the margin (rhs - lhs) normalized by lambda^{2 sigma}.
bool q2_nonpositive(const HyperbolicEnergyParams& params, double c_val, double gamma_prime,
                    double lambda, double* margin = nullptr);

struct EnergyReport {
  enum class Status { Pass, Fail, BelowThreshold };
  Status status = Status::Pass;
  double first_violation = -1.0;
  std::string path;  // "resolved" or "envelope"

  std::vector<double> t;
  std::vector<double> log_E_classic, log_E_gamma, log_F;
  std::vector<double> log_lhs;    // |u'|^2 + d^2 l^{4s} |u|^2 (or its envelope)
  std::vector<double> log_bound;  // 3 (u1^2 + d^2 l^{4s} u0^2) exp(-4 r l^{2s} C(t)) [...]
  std::vector<double> margin;     // log_bound - log_lhs

  double min_margin = 0.0;
  double min_margin_x = 0.0, min_margin_y = 0.0, min_margin_xyz = 0.0, min_margin_q2 = 0.0;
  bool forms_ok = false;

  double lambda = 0.0, r = 0.0, nu = 0.0;

  void write_csv(std::ostream& os) const;  // t, energy, bound, margin
  std::string summary_json() const;
};

/// Checks |u'(t)|^2 + delta^2 lambda^{4 sigma} |u(t)|^2 against the decay
/// bound along the trajectory (multiplicative slack 1 + 1e-6). Trajectories
/// may be pointwise (Resolved) or certified envelopes (Envelope); lambda < nu
/// reports BelowThreshold instead of a verdict.
EnergyReport verify_decay_estimate(const ModalProblem& problem,
                                   const HyperbolicEnergyParams& params,
                                   const ModalTrajectory& trajectory);

/// Certified upper envelope of the approximated hyperbolic energy on a grid:
/// E' = -4 r c l^{2s} E - Q1 + Q2 together with the measured extremal rate of
/// (-Q1 + Q2)/E gives a Gronwall envelope that never dips below the true
/// energy. This is the only meaningful trajectory once lambda is too large
/// for any oscillation-resolving grid of doubles.
struct EnvelopeResult {
  ModalTrajectory trajectory;
  bool forms_ok = false;
  double min_margin_x = 0.0, min_margin_y = 0.0, min_margin_xyz = 0.0, min_margin_q2 = 0.0;
};
EnvelopeResult certified_envelope(const ModalProblem& problem,
                                  const HyperbolicEnergyParams& params, int n_points);

/// G(lambda) = sup_{t>0} log(E(t)/E(0)) with E the standard energy
/// |u'|^2 + lambda^2 |u|^2, then a log-log least squares fit of the positive
/// part: G ~ a lambda^p.
struct GrowthMeasurement {
  std::vector<double> lambdas;
  std::vector<double> G;
  bool dissipative = false;  // every G <= 0
  double exponent = 0.0;     // fitted p
  double intercept = 0.0;
  double fit_residual = 0.0;  // rms residual of the log-log fit
  std::size_t fit_points = 0;
};
GrowthMeasurement measure_growth_exponent(const std::function<ModalProblem(double)>& family,
                                          std::span<const double> lambdas, double rel_tol,
                                          double abs_tol);

/// Fit helper shared with the closed-form growth oracle of the pathological
/// coefficient: least squares of y against x.
struct LineFit {
  double slope = 0.0, intercept = 0.0, rms_residual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace dampedwave
