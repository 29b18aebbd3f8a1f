#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dampedwave/logreal.hpp"
#include "dampedwave/modal_ode.hpp"

namespace dampedwave {

/// Diagonal model of the elastic operator: A e_n = lambda_n^2 e_n for a
/// finite, strictly increasing list of lambda_n >= 0.
struct SpectralOperator {
  std::vector<double> lambdas;

  explicit SpectralOperator(std::vector<double> l);
  std::size_t size() const { return lambdas.size(); }
};

struct SpectralVector {
  std::vector<double> components;

  SpectralVector() = default;
  explicit SpectralVector(std::vector<double> v) : components(std::move(v)) {}
  std::size_t size() const { return components.size(); }
};

struct NormSpec {
  enum class Space { Sobolev, Gevrey, Ultradistribution };
  Space space = Space::Sobolev;
  double alpha = 0.0;   // weight (1+lambda)^{4 alpha}; negative alpha = distributions
  double order = 1.0;   // s (Gevrey) or S (ultradistribution)
  double radius = 1.0;  // r or R, > 0 for the non-Sobolev spaces
  std::string name() const;
};

/// Squared norm of Definition-type weights, computed log-sum-exp style:
/// sum (1+lambda_n)^{4 alpha} u_n^2 * w_n with w_n = 1, exp(+2 r lambda^{1/s})
/// or exp(-2 R lambda^{1/S}). Returned as a LogReal of the squared norm.
LogReal spectral_norm_sq(const SpectralOperator& op, const SpectralVector& v,
                         const NormSpec& spec);

struct FrequencySplit {
  SpectralVector low, high;  // lambda_n < nu vs lambda_n >= nu
};
FrequencySplit frequency_split(const SpectralOperator& op, const SpectralVector& v, double nu);

/// Snapshots of the full system at the requested times. Modes integrate
/// independently (c == 0 dispatches to the closed form) and assemble in
/// index order regardless of the thread count.
struct SystemSolution {
  std::vector<double> times;
  std::vector<SpectralVector> u, du;                       // per time
  std::vector<std::vector<double>> log_abs_u, log_abs_du;  // per time, per mode
  std::vector<std::vector<std::int8_t>> sign_u, sign_du;

  void write_csv(std::ostream& os, const SpectralOperator& op) const;
  // columns: t, mode, lambda, u, du, log_abs_u, log_abs_du
};
SystemSolution solve_system(const SpectralOperator& op, const Coefficient& coefficient,
                            double delta, double sigma, const SpectralVector& u0,
                            const SpectralVector& u1, const std::vector<double>& times,
                            double rel_tol, double abs_tol, int threads = 1);

}  // namespace dampedwave
