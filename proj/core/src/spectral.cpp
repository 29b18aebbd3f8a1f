#include "dampedwave/spectral.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "dampedwave/parallel.hpp"
#include "format_util.hpp"

namespace dampedwave {

SpectralOperator::SpectralOperator(std::vector<double> l) : lambdas(std::move(l)) {
  if (lambdas.empty()) throw std::invalid_argument("operator needs at least one eigenvalue");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0) throw std::invalid_argument("eigenvalues lambda_n must be >= 0");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument("eigenvalues must be strictly increasing");
  }
}

std::string NormSpec::name() const {
  switch (space) {
    case Space::Sobolev: return "sobolev";
    case Space::Gevrey: return "gevrey";
    case Space::Ultradistribution: return "ultradistribution";
  }
  return "?";
}

LogReal spectral_norm_sq(const SpectralOperator& op, const SpectralVector& v,
                         const NormSpec& spec) {
  if (v.size() != op.size())
    throw std::invalid_argument("vector is not indexed consistently with the operator");
  if (spec.space != NormSpec::Space::Sobolev && !(spec.radius > 0.0))
    throw std::invalid_argument("Gevrey-type norms need radius > 0");

  std::vector<double> log_terms;
  log_terms.reserve(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) {
    const double un = v.components[n];
    if (!std::isfinite(un)) throw std::invalid_argument("non-finite spectral component");
    if (un == 0.0) continue;
    const double lam = op.lambdas[n];
    double lt = 4.0 * spec.alpha * std::log1p(lam) + 2.0 * std::log(std::fabs(un));
    if (spec.space == NormSpec::Space::Gevrey)
      lt += 2.0 * spec.radius * std::pow(lam, 1.0 / spec.order);
    else if (spec.space == NormSpec::Space::Ultradistribution)
      lt -= 2.0 * spec.radius * std::pow(lam, 1.0 / spec.order);
    log_terms.push_back(lt);
  }
  if (log_terms.empty()) return LogReal{};
  return LogReal::from_log(log_sum_exp(log_terms), 1);
}

FrequencySplit frequency_split(const SpectralOperator& op, const SpectralVector& v, double nu) {
  if (v.size() != op.size())
    throw std::invalid_argument("vector is not indexed consistently with the operator");
  FrequencySplit fs;
  fs.low.components.assign(v.size(), 0.0);
  fs.high.components.assign(v.size(), 0.0);
  for (std::size_t n = 0; n < v.size(); ++n) {
    if (op.lambdas[n] < nu)
      fs.low.components[n] = v.components[n];
    else
      fs.high.components[n] = v.components[n];
  }
  return fs;
}

SystemSolution solve_system(const SpectralOperator& op, const Coefficient& coefficient,
                            double delta, double sigma, const SpectralVector& u0,
                            const SpectralVector& u1, const std::vector<double>& times,
                            double rel_tol, double abs_tol, int threads) {
  if (u0.size() != op.size() || u1.size() != op.size())
    throw std::invalid_argument("initial vectors are not indexed consistently with the operator");
  if (times.empty()) throw std::invalid_argument("no snapshot times requested");

  const std::size_t nm = op.size();
  const std::size_t nt = times.size();
  SystemSolution sol;
  sol.times = times;
  sol.u.assign(nt, SpectralVector(std::vector<double>(nm, 0.0)));
  sol.du.assign(nt, SpectralVector(std::vector<double>(nm, 0.0)));
  sol.log_abs_u.assign(nt, std::vector<double>(nm, -std::numeric_limits<double>::infinity()));
  sol.log_abs_du.assign(nt, std::vector<double>(nm, -std::numeric_limits<double>::infinity()));
  sol.sign_u.assign(nt, std::vector<std::int8_t>(nm, 0));
  sol.sign_du.assign(nt, std::vector<std::int8_t>(nm, 0));

  const bool zero_speed = coefficient.family() == "zero";

  parallel_for(nm, threads, [&](std::size_t n) {
    try {
      if (zero_speed) {
        for (std::size_t i = 0; i < nt; ++i) {
          const PointState ps = zero_speed_solution(delta, sigma, op.lambdas[n],
                                                    u0.components[n], u1.components[n], times[i]);
          sol.u[i].components[n] = ps.u;
          sol.du[i].components[n] = ps.du;
          sol.log_abs_u[i][n] = ps.u == 0.0 ? -std::numeric_limits<double>::infinity()
                                            : std::log(std::fabs(ps.u));
          sol.log_abs_du[i][n] = ps.du == 0.0 ? -std::numeric_limits<double>::infinity()
                                              : std::log(std::fabs(ps.du));
          sol.sign_u[i][n] = ps.u > 0.0 ? 1 : (ps.u < 0.0 ? -1 : 0);
          sol.sign_du[i][n] = ps.du > 0.0 ? 1 : (ps.du < 0.0 ? -1 : 0);
        }
        return;
      }
      ModalProblem p;
      p.lambda = op.lambdas[n];
      p.delta = delta;
      p.sigma = sigma;
      p.coefficient = coefficient;
      p.u0 = u0.components[n];
      p.u1 = u1.components[n];
      p.t_start = times.front();
      p.t_end = times.back();
      if (p.t_start == p.t_end) p.t_end = p.t_start + 1.0e-9;
      const ModalTrajectory tr = integrate(p, rel_tol, abs_tol, &times);
      for (std::size_t i = 0; i < nt; ++i) {
        sol.u[i].components[n] = tr.u[i];
        sol.du[i].components[n] = tr.du[i];
        sol.log_abs_u[i][n] = tr.log_abs_u[i];
        sol.log_abs_du[i][n] = tr.log_abs_du[i];
        sol.sign_u[i][n] = tr.sign_u[i];
        sol.sign_du[i][n] = tr.sign_du[i];
      }
    } catch (const IntegrationError& e) {
      throw IntegrationError("mode " + std::to_string(n) + ": " + e.what(), e.t, e.c);
    }
  });
  return sol;
}

void SystemSolution::write_csv(std::ostream& os, const SpectralOperator& op) const {
  os << "t,mode,lambda,u,du,log_abs_u,log_abs_du\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t n = 0; n < op.size(); ++n) {
      os << detail::fmt(times[i]) << ',' << n << ',' << detail::fmt(op.lambdas[n]) << ','
         << detail::fmt(u[i].components[n]) << ',' << detail::fmt(du[i].components[n]) << ','
         << detail::fmt(log_abs_u[i][n]) << ',' << detail::fmt(log_abs_du[i][n]) << '\n';
    }
  }
}

}  // namespace dampedwave
