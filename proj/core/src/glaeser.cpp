#include "dampedwave/glaeser.hpp"

#include <algorithm>
#include <cmath>

namespace dampedwave {

double GlaeserEstimate::Phi_at(double x) const {
  if (kind == Kind::ConstantK1 || t.empty()) return 0.0;
  if (x <= t.front()) return 0.0;
  if (x >= t.back()) return Phi.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  const double w = (x - t[i]) / (t[i + 1] - t[i]);
  return Phi[i] + w * (Phi[i + 1] - Phi[i]);
}

GlaeserEstimate estimate_glaeser(const Coefficient& c, int grid_points) {
  if (c.k() < 1) throw CoefficientError("Glaeser estimation needs k >= 1");
  if (!c.has_derivative())
    throw CoefficientError("Glaeser estimation needs an analytic derivative");

  GlaeserEstimate est;
  const double ka = c.k() + c.alpha();
  est.kind = c.k() == 1 ? GlaeserEstimate::Kind::ConstantK1 : GlaeserEstimate::Kind::FunctionK2;
  est.exponent = c.k() == 1 ? 1.0 - 1.0 / (1.0 + c.alpha()) : 1.0 - 1.0 / ka;

  const int n = std::max(grid_points, 2);
  const double T = c.horizon();
  std::vector<double> ratio(static_cast<std::size_t>(n));
  est.t.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = T * i / (n - 1);
    const double cv = c.value(t);
    const double dv = c.derivative(t);
    est.t[static_cast<std::size_t>(i)] = t;
    double r = 0.0;
    if (cv > 0.0) {
      r = std::fabs(dv) / std::pow(cv, est.exponent);
    } else if (dv != 0.0) {
      est.violation = true;
      est.violation_t = t;
      r = std::numeric_limits<double>::infinity();
    }
    ratio[static_cast<std::size_t>(i)] = r;
  }

  if (est.kind == GlaeserEstimate::Kind::ConstantK1) {
    est.K = *std::max_element(ratio.begin(), ratio.end());
    est.t.clear();
  } else {
    est.phi = ratio;
    est.Phi.resize(ratio.size(), 0.0);
    for (std::size_t i = 1; i < ratio.size(); ++i) {
      const double dt = est.t[i] - est.t[i - 1];
      est.Phi[i] = est.Phi[i - 1] + 0.5 * (ratio[i] + ratio[i - 1]) * dt;
    }
  }
  return est;
}

}  // namespace dampedwave
