#include "dampedwave/coefficient.hpp"

#include <algorithm>
#include <cmath>

namespace dampedwave {

double hoelder_from_lipschitz(double lipschitz, double oscillation, double alpha) {
  if (alpha >= 1.0) return lipschitz;
  if (lipschitz == 0.0) return 0.0;
  return std::pow(lipschitz, alpha) * std::pow(oscillation, 1.0 - alpha);
}

namespace {

struct PowerImpl final : Coefficient::Impl {
  double scale = 1.0, p = 2.0;
  double value(double t) const override { return scale * std::pow(t, p); }
  double derivative(double t) const override { return scale * p * std::pow(t, p - 1.0); }
  double antiderivative(double t) const override {
    const double x = std::min(t, horizon);
    double a = scale * std::pow(x, p + 1.0) / (p + 1.0);
    if (t > horizon) a += value(horizon) * (t - horizon);
    return a;
  }
};

struct ConstantImpl final : Coefficient::Impl {
  double c = 1.0;
  double value(double) const override { return c; }
  double derivative(double) const override { return 0.0; }
  double antiderivative(double t) const override { return c * t; }
};

struct SinSqImpl final : Coefficient::Impl {
  double omega = 1.0;
  double value(double t) const override {
    const double s = std::sin(omega * t);
    return s * s;
  }
  double derivative(double t) const override { return omega * std::sin(2.0 * omega * t); }
  double antiderivative(double t) const override {
    const double x = std::min(t, horizon);
    double a = x / 2.0 - std::sin(2.0 * omega * x) / (4.0 * omega);
    if (t > horizon) a += value(horizon) * (t - horizon);
    return a;
  }
};

struct TableImpl final : Coefficient::Impl {
  std::vector<double> ts, cs, cum;  // cum[i] = int_0^{ts[i]} c
  bool has_derivative() const override { return false; }
  double derivative(double) const override { return 0.0; }
  double value(double t) const override {
    if (t <= ts.front()) return cs.front();
    if (t >= ts.back()) return cs.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return cs[i] + w * (cs[i + 1] - cs[i]);
  }
  double antiderivative(double t) const override {
    if (t <= ts.front()) return cs.front() * t;
    if (t >= ts.back()) return cum.back() + cs.back() * (t - ts.back());
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    const double dt = t - ts[i];
    return cum[i] + 0.5 * (cs[i] + value(t)) * dt;
  }
};

}  // namespace

Coefficient Coefficient::power(double scale, double exponent, double horizon, int k,
                               double alpha) {
  if (scale < 0.0 || exponent < 1.0 || horizon <= 0.0)
    throw CoefficientError("power coefficient needs scale >= 0, exponent >= 1, horizon > 0");
  auto impl = std::make_shared<PowerImpl>();
  impl->scale = scale;
  impl->p = exponent;
  impl->horizon = horizon;
  impl->mu = scale * std::pow(horizon, exponent);
  impl->k = k;
  impl->alpha = alpha;
  const double lipschitz = scale * exponent * std::pow(horizon, exponent - 1.0);
  impl->hoelder = hoelder_from_lipschitz(lipschitz, impl->mu, alpha);
  impl->family = "power";
  return Coefficient(impl);
}

Coefficient Coefficient::constant(double mu, double horizon) {
  if (mu < 0.0 || horizon <= 0.0)
    throw CoefficientError("constant coefficient needs mu >= 0, horizon > 0");
  auto impl = std::make_shared<ConstantImpl>();
  impl->c = mu;
  impl->horizon = horizon;
  impl->mu = std::max(mu, 0.0);
  impl->k = 0;
  impl->alpha = 1.0;
  impl->hoelder = 0.0;
  impl->family = mu == 0.0 ? "zero" : "constant";
  return Coefficient(impl);
}

Coefficient Coefficient::zero(double horizon) { return constant(0.0, horizon); }

Coefficient Coefficient::sin_squared(double omega, double horizon, int k, double alpha) {
  if (omega <= 0.0 || horizon <= 0.0)
    throw CoefficientError("sinsq coefficient needs omega > 0, horizon > 0");
  auto impl = std::make_shared<SinSqImpl>();
  impl->omega = omega;
  impl->horizon = horizon;
  impl->mu = omega * horizon >= 1.5707963267948966 ? 1.0 : std::pow(std::sin(omega * horizon), 2);
  impl->k = k;
  impl->alpha = alpha;
  impl->hoelder = hoelder_from_lipschitz(omega, impl->mu, alpha);
  impl->family = "sinsq";
  return Coefficient(impl);
}

Coefficient Coefficient::table(std::vector<double> t, std::vector<double> c, int k,
                               double alpha) {
  if (t.size() != c.size() || t.size() < 2)
    throw CoefficientError("table coefficient needs two equally long columns");
  if (t.front() != 0.0) throw CoefficientError("table must start at t = 0");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw CoefficientError("table times must be strictly increasing");
  double mu = 0.0;
  for (double v : c) {
    if (v < 0.0) throw CoefficientError("table values must be nonnegative");
    mu = std::max(mu, v);
  }
  auto impl = std::make_shared<TableImpl>();
  impl->cum.resize(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    impl->cum[i] = impl->cum[i - 1] + 0.5 * (c[i] + c[i - 1]) * (t[i] - t[i - 1]);
  impl->horizon = t.back();
  impl->ts = std::move(t);
  impl->cs = std::move(c);
  impl->mu = mu;
  impl->k = k;
  impl->alpha = alpha;
  impl->family = "table";
  return Coefficient(impl);
}

}  // namespace dampedwave
