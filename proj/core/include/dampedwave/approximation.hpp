#pragma once

#include "dampedwave/coefficient.hpp"

namespace dampedwave {

/// theta = 2/(2+k+alpha); satisfies 2(1-theta)/(k+alpha) = theta.
double theta_exponent(int k, double alpha);

/// C^1 smoothing of max(x, 0): 0 for x <= 0, x - (2/pi) eps atan(pi x / (2 eps))
/// for x >= 0. Within eps of x on x >= 0; derivative in [0, 1].
double psi_smoother(double epsilon, double x);
double psi_smoother_derivative(double epsilon, double x);

/// The lambda-dependent C^1 approximation gamma_lambda of c, built so that
///   |c - gamma|   <= lambda^{-2(1-theta)}
///   |c - gamma|^2 <= c * lambda^{-2(1-theta)}
/// hold pointwise together with the k-dependent derivative bound.
class ApproximatedCoefficient {
 public:
  double lambda() const { return lambda_; }
  double theta() const { return theta_; }
  double epsilon() const { return epsilon_; }
  int k() const { return k_; }

  double value(double t) const;       // gamma_lambda(t), in [0, mu]
  double derivative(double t) const;  // gamma_lambda'(t)

  // Forward mollification (1/eps) int_t^{t+eps} c, with c frozen at c(T)
  // beyond the horizon. Only defined on the k == 0 path.
  double mollified_value(double t) const;
  double mollified_derivative(double t) const;

 private:
  friend ApproximatedCoefficient approximate_coefficient(const Coefficient&, double);
  Coefficient c_;
  double lambda_ = 0, theta_ = 0, epsilon_ = 0;
  double psi_eps_ = 0;  // the smoother scale: eps for k>=1, 2H eps^alpha for k=0
  double H_ = 0;
  int k_ = 0;
  bool exact_ = false;  // k=0 with H=0: constant coefficient, gamma == c
};

ApproximatedCoefficient approximate_coefficient(const Coefficient& c, double lambda);

}  // namespace dampedwave
