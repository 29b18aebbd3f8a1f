#include "dampedwave/phase.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "dampedwave/counterexample.hpp"
#include "dampedwave/energy.hpp"
#include "dampedwave/parallel.hpp"
#include "format_util.hpp"

namespace dampedwave {

std::string classify_analytic(double ka, double sigma, std::optional<double> data_order) {
  const double threshold = 1.0 / (2.0 + ka);
  if (sigma == threshold) return "borderline";
  if (sigma > threshold && sigma <= 0.5) return "sobolev-wellposed";
  if (sigma < threshold) {
    if (data_order.has_value() && *data_order < 1.0 + ka / 2.0) return "gevrey-wellposed";
    return "pathological";
  }
  return "borderline";  // sigma > 1/2 is outside the studied strip
}

void split_regularity(double ka, int& k, double& alpha) {
  k = static_cast<int>(std::ceil(ka)) - 1;
  if (k < 0) k = 0;
  alpha = ka - k;
  if (alpha <= 0.0 || alpha > 1.0) {
    k = std::max(k - 1, 0);
    alpha = ka - k;
  }
}

std::vector<PhaseCell> run_phase_diagram(const PhaseDiagramConfig& cfg) {
  std::vector<PhaseCell> cells(static_cast<std::size_t>(cfg.ka_count) *
                               static_cast<std::size_t>(cfg.sigma_count));

  auto cell_of = [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / cfg.sigma_count;
    const int j = static_cast<int>(idx) % cfg.sigma_count;
    PhaseCell c;
    c.k_plus_alpha =
        cfg.ka_count == 1 ? cfg.ka_min : cfg.ka_min + (cfg.ka_max - cfg.ka_min) * i / (cfg.ka_count - 1);
    c.sigma = cfg.sigma_count == 1
                  ? cfg.sigma_min
                  : cfg.sigma_min + (cfg.sigma_max - cfg.sigma_min) * j / (cfg.sigma_count - 1);
    return c;
  };

  parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
    PhaseCell cell = cell_of(idx);
    int k = 0;
    double alpha = 1.0;
    split_regularity(cell.k_plus_alpha, k, alpha);
    cell.theta = theta_exponent(k, alpha);
    cell.analytic = classify_analytic(cell.k_plus_alpha, cell.sigma, cfg.data_order);
    cell.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    cell.empirical = "untested";

    const double threshold = 1.0 / (2.0 + cell.k_plus_alpha);
    if (cell.sigma < threshold) {
      // matched pathological coefficient; the selected eigenvalues are far
      // beyond any grid, so the growth comes from the closed-form oracle
      CounterexampleParams p;
      p.delta = cfg.delta;
      p.sigma = cell.sigma;
      p.k = k;
      p.alpha = alpha;
      p.n_max = cfg.depth;
      const auto bundle = select_sequences(p);
      const auto oracle = growth_oracle(bundle);
      std::vector<double> xs, ys;
      for (std::size_t n = 0; n < oracle.G.size(); ++n) {
        if (oracle.G[n].sign() > 0) {
          xs.push_back(oracle.log_lambda[n]);
          ys.push_back(oracle.G[n].log());
        }
      }
      cell.fit_points = xs.size();
      if (xs.size() >= 2) {
        cell.fitted_exponent = fit_line(xs, ys).slope;
        cell.empirical = cell.fitted_exponent >= cell.theta / 2.0
                             ? "growing"
                             : (cell.fitted_exponent <= 0.05 ? "bounded" : "intermediate");
      }
    } else {
      // integration probe with a power-law coefficient of matching regularity
      const Coefficient c = Coefficient::power(1.0, cell.k_plus_alpha < 1.0 ? 1.0 : cell.k_plus_alpha,
                                               1.0, k, alpha);
      auto family = [&](double lambda) {
        ModalProblem p;
        p.lambda = lambda;
        p.delta = cfg.delta;
        p.sigma = cell.sigma;
        p.coefficient = c;
        p.u0 = 1.0;
        p.u1 = 0.0;
        p.t_start = 0.0;
        p.t_end = 1.0;
        return p;
      };
      const auto g = measure_growth_exponent(family, cfg.probe_lambdas, cfg.rel_tol, cfg.abs_tol);
      cell.fit_points = g.fit_points;
      if (g.dissipative) {
        cell.fitted_exponent = 0.0;
        cell.empirical = "bounded";
      } else {
        cell.fitted_exponent = g.exponent;
        cell.empirical = g.exponent <= 0.05
                             ? "bounded"
                             : (g.exponent >= cell.theta / 2.0 ? "growing" : "intermediate");
      }
    }
    cells[idx] = cell;
  });
  return cells;
}

void write_phase_csv(std::ostream& os, const std::vector<PhaseCell>& cells) {
  os << "k_plus_alpha,sigma,analytic,empirical,fitted_exponent\n";
  for (const auto& c : cells) {
    os << detail::fmt(c.k_plus_alpha) << ',' << detail::fmt(c.sigma) << ',' << c.analytic << ','
       << c.empirical << ',' << detail::fmt(c.fitted_exponent) << '\n';
  }
}

}  // namespace dampedwave
