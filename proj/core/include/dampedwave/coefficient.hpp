#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dampedwave {

struct CoefficientError : std::runtime_error {
  explicit CoefficientError(const std::string& what) : std::runtime_error(what) {}
};

/// Time-dependent propagation speed c(t) on [0, horizon], 0 <= c <= mu,
/// with exact derivative and antiderivative where the family has closed forms.
///
/// Regularity metadata (k, alpha) is declared by the caller, never inferred:
/// the same function admits several declarations and the approximation scheme
/// changes with the choice. Immutable; all evaluation is const and pure.
class Coefficient {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual double value(double t) const = 0;
    virtual bool has_derivative() const { return true; }
    virtual double derivative(double t) const = 0;
    virtual double antiderivative(double t) const = 0;

    double horizon = 1.0;
    double mu = 1.0;
    int k = 0;
    double alpha = 1.0;
    std::optional<double> hoelder;  // alpha-Hoelder constant, needed when k == 0
    std::string family = "custom";
  };

  Coefficient() = default;
  explicit Coefficient(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  bool valid() const { return impl_ != nullptr; }

  double value(double t) const { return impl_->value(t); }
  bool has_derivative() const { return impl_->has_derivative(); }
  double derivative(double t) const {
    if (!impl_->has_derivative())
      throw CoefficientError("coefficient family '" + impl_->family +
                             "' provides no analytic derivative");
    return impl_->derivative(t);
  }
  /// C(t) = int_0^t c(s) ds, with C(0) = 0; constant extension beyond horizon.
  double antiderivative(double t) const { return impl_->antiderivative(t); }

  double horizon() const { return impl_->horizon; }
  double mu() const { return impl_->mu; }
  int k() const { return impl_->k; }
  double alpha() const { return impl_->alpha; }
  std::optional<double> hoelder() const { return impl_->hoelder; }
  const std::string& family() const { return impl_->family; }

  const Impl* impl() const { return impl_.get(); }

  /// scale * t^exponent with exponent >= 1.
  static Coefficient power(double scale, double exponent, double horizon, int k, double alpha);
  static Coefficient constant(double mu, double horizon);
  static Coefficient zero(double horizon);
  /// sin^2(omega t).
  static Coefficient sin_squared(double omega, double horizon, int k, double alpha);
  /// Piecewise-linear interpolation of samples with strictly increasing t
  /// starting at 0; carries no analytic derivative.
  static Coefficient table(std::vector<double> t, std::vector<double> c, int k, double alpha);

  /// Structured config record, e.g.
  ///   {"family":"power","scale":1,"exponent":2,"horizon":1,"k":1,"alpha":1}
  /// Families: power | constant | zero | sinsq | table | counterexample.
  static Coefficient from_config(const std::string& json_text);

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Declared-regularity Hoelder constant for a Lipschitz function: for
/// alpha < 1 interpolates |c(x)-c(y)| <= min(L|x-y|, osc).
double hoelder_from_lipschitz(double lipschitz, double oscillation, double alpha);

}  // namespace dampedwave
