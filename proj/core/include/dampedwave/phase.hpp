#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dampedwave {

/// Analytic classification of a (k+alpha, sigma) cell against the threshold
/// sigma = 1/(2+k+alpha): above it (and <= 1/2) the damping prevails, below
/// it pathologies are possible. When the data order s is supplied and sits
/// under 1 + (k+alpha)/2, the sub-threshold cell is still well-posed in the
/// Gevrey sense.
std::string classify_analytic(double k_plus_alpha, double sigma,
                              std::optional<double> data_order = {});

struct PhaseCell {
  double k_plus_alpha = 0.0;
  double sigma = 0.0;
  double theta = 0.0;
  std::string analytic;
  std::string empirical;  // bounded | growing | intermediate | untested
  double fitted_exponent = 0.0;
  std::size_t fit_points = 0;
};

struct PhaseDiagramConfig {
  double ka_min = 0.5, ka_max = 3.0;
  int ka_count = 5;
  double sigma_min = 0.05, sigma_max = 0.5;
  int sigma_count = 5;
  double delta = 1.0;
  int depth = 4;  // construction depth for sub-threshold probes
  std::vector<double> probe_lambdas = {50.0, 100.0, 200.0, 400.0, 800.0};
  double rel_tol = 1.0e-9, abs_tol = 1.0e-12;
  std::optional<double> data_order;
  int threads = 1;
};

/// Splits k+alpha into the declared pair (k, alpha) with alpha in (0, 1].
void split_regularity(double k_plus_alpha, int& k, double& alpha);

/// Every cell gets an analytic label from the threshold inequalities and an
/// empirical growth exponent: integration sweeps for cells at or above the
/// threshold, the closed-form growth oracle of the matched pathological
/// coefficient below it.
std::vector<PhaseCell> run_phase_diagram(const PhaseDiagramConfig& config);

void write_phase_csv(std::ostream& os, const std::vector<PhaseCell>& cells);

}  // namespace dampedwave
