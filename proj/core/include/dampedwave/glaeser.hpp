#pragma once

#include <vector>

#include "dampedwave/coefficient.hpp"

namespace dampedwave {

/// Empirical Glaeser data: the constant K with |c'| <= K c^{1-1/(1+alpha)}
/// for k == 1, or the grid function phi with |c'| <= phi(t) c^{1-1/(k+alpha)}
/// and its running integral Phi for k >= 2. Estimated as a grid supremum;
/// the theory only guarantees existence, the artifact needs usable numbers.
struct GlaeserEstimate {
  enum class Kind { ConstantK1, FunctionK2 };
  Kind kind = Kind::ConstantK1;
  double exponent = 0.0;  // 1 - 1/(k+alpha)
  double K = 0.0;

  std::vector<double> t;    // grid (k >= 2)
  std::vector<double> phi;  // phi(t) on the grid
  std::vector<double> Phi;  // running integral, Phi(0) = 0, nondecreasing

  // A grid point with c(t) == 0 but c'(t) != 0: the declared regularity is
  // not compatible with nonnegativity.
  bool violation = false;
  double violation_t = 0.0;

  double Phi_at(double t) const;  // linear interpolation of the running integral
};

GlaeserEstimate estimate_glaeser(const Coefficient& c, int grid_points);

}  // namespace dampedwave
