#include "dampedwave/approximation.hpp"

#include <cmath>

namespace dampedwave {

double theta_exponent(int k, double alpha) {
  if (k < 0 || alpha <= 0.0 || alpha > 1.0)
    throw CoefficientError("theta_exponent needs k >= 0 and alpha in (0, 1]");
  return 2.0 / (2.0 + k + alpha);
}

double psi_smoother(double epsilon, double x) {
  if (!(epsilon > 0.0)) throw CoefficientError("psi_smoother needs epsilon > 0");
  if (x <= 0.0) return 0.0;
  constexpr double pi = 3.141592653589793238462643383279502884;
  return x - (2.0 / pi) * epsilon * std::atan(0.5 * pi * x / epsilon);
}

double psi_smoother_derivative(double epsilon, double x) {
  if (!(epsilon > 0.0)) throw CoefficientError("psi_smoother needs epsilon > 0");
  if (x <= 0.0) return 0.0;
  constexpr double pi = 3.141592653589793238462643383279502884;
  const double q = 0.5 * pi * x / epsilon;
  return 1.0 - 1.0 / (1.0 + q * q);
}

namespace {

// c extended by c(T) beyond the horizon, and its exact running integral.
double value_ext(const Coefficient& c, double t) {
  return t >= c.horizon() ? c.value(c.horizon()) : c.value(t);
}

}  // namespace

double ApproximatedCoefficient::mollified_value(double t) const {
  // (1/eps) int_t^{t+eps} c = (C_ext(t+eps) - C_ext(t)) / eps
  const double hi = c_.antiderivative(t + epsilon_);
  const double lo = c_.antiderivative(t);
  return (hi - lo) / epsilon_;
}

double ApproximatedCoefficient::mollified_derivative(double t) const {
  return (value_ext(c_, t + epsilon_) - c_.value(t)) / epsilon_;
}

double ApproximatedCoefficient::value(double t) const {
  if (exact_) return c_.value(t);
  if (k_ >= 1) return psi_smoother(psi_eps_, c_.value(t) - epsilon_);
  return psi_smoother(psi_eps_, mollified_value(t) - psi_eps_);
}

double ApproximatedCoefficient::derivative(double t) const {
  if (exact_) return 0.0;
  if (k_ >= 1)
    return psi_smoother_derivative(psi_eps_, c_.value(t) - epsilon_) * c_.derivative(t);
  return psi_smoother_derivative(psi_eps_, mollified_value(t) - psi_eps_) *
         mollified_derivative(t);
}

ApproximatedCoefficient approximate_coefficient(const Coefficient& c, double lambda) {
  if (!(lambda > 0.0)) throw CoefficientError("approximate_coefficient needs lambda > 0");
  ApproximatedCoefficient a;
  a.c_ = c;
  a.lambda_ = lambda;
  a.k_ = c.k();
  a.theta_ = theta_exponent(c.k(), c.alpha());
  const double gap = std::pow(lambda, -2.0 * (1.0 - a.theta_));  // lambda^{-2(1-theta)}

  if (c.k() >= 1) {
    if (!c.has_derivative())
      throw CoefficientError("k >= 1 approximation needs the analytic derivative of c");
    a.epsilon_ = 0.25 * gap;  // 4 eps = lambda^{-2(1-theta)}
    a.psi_eps_ = a.epsilon_;
    return a;
  }

  if (!c.hoelder().has_value())
    throw CoefficientError("k = 0 approximation needs the Hoelder constant of c");
  const double H = *c.hoelder();
  a.H_ = H;
  if (H == 0.0) {
    a.exact_ = true;  // constant coefficient: gamma == c
    a.epsilon_ = 0.0;
    return a;
  }
  // 25 H eps^alpha = lambda^{-2(1-theta)}
  a.epsilon_ = std::pow(gap / (25.0 * H), 1.0 / c.alpha());
  a.psi_eps_ = 2.0 * H * std::pow(a.epsilon_, c.alpha());
  return a;
}

}  // namespace dampedwave
