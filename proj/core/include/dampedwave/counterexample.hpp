#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dampedwave/coefficient.hpp"
#include "dampedwave/jet.hpp"
#include "dampedwave/logreal.hpp"

namespace dampedwave {

struct SelectionError : std::runtime_error {
  SelectionError(const std::string& what, const std::string& cond, int index)
      : std::runtime_error(what), condition(cond), n(index) {}
  std::string condition;
  int n = 0;
};

/// Parameters of the pathological construction. Requires
/// 0 <= sigma < 1/(2+k+alpha) strictly.
struct CounterexampleParams {
  double delta = 1.0;
  double sigma = 0.0;
  int k = 0;
  double alpha = 1.0;
  int n_max = 6;
  // theta_n increasing to theta strictly from below; empty = default schedule
  // theta * (1 - 2^{-(n+2)}), which reaches past 1/S within a few levels.
  std::vector<double> theta_seq;
  std::int64_t pool_start_exponent = 1;  // candidate eigenvalues are 2^j
};

/// One selected eigenvalue with everything derived from it. All quantities
/// live in log domain; linear doubles are materialized only where they fit.
struct SequenceEntry {
  std::int64_t j = 0;  // lambda = 2^j
  double log_lambda = 0.0;
  double theta_n = 0.0;
  LogReal lambda;
  LogReal m;        // lambda^{theta-1}
  LogReal M;        // m^2 + delta^2 lambda^{4 sigma - 2}
  LogReal blocks;   // floor(2 lambda_n^theta / lambda_{n-1}^theta), integer-exact when small
  LogReal t, s, t_prime, s_prime;
  LogReal log_a;    // log of the amplitude a_n, itself far below double range
};

struct CounterexampleBundle {
  CounterexampleParams params;
  double theta = 0.0;
  double epsilon = 0.03125;  // 1/32, exact
  // entries 0..n_max, plus one extra level n_max+1 that only provides the
  // truncation floor of the coefficient
  std::vector<SequenceEntry> seq;
  double gamma1 = 0.0;  // empirical sup of the normalized first derivative
  std::string junction_g1 = "f(x) * B(x/pi)";
  std::string junction_g2 = "f(x) * (1 - B(x/pi))";
  std::string junction_h = "B(x), B(y) = s(y)/(s(y)+s(1-y)), s(y) = exp(-1/y)";

  int depth() const { return params.n_max; }
  std::string to_json() const;
};

/// Inductively picks the smallest pool element 2^j satisfying the five
/// selection conditions given lambda_{n-1}; fails loudly naming the first
/// unsatisfiable condition.
CounterexampleBundle select_sequences(const CounterexampleParams& params);

/// Independent log-domain re-verification of everything the selector promised.
struct SequenceCheckReport {
  struct Row {
    int n = 0;
    bool li_1 = false, li_2 = false, li_3 = false, li_alpha = false, li_tremenda = false;
    bool ordering = false;      // s'_{n+1} < t'_n < t_n < s_n < s'_n
    bool m_bounds = false;      // m^2 <= M <= 1.5 m^2
    bool gaps = false;          // s_n - t_n and t'_n - s'_{n+1} lower bounds
    bool doubling_stable = false;  // conditions survive doubling lambda_n
  };
  std::vector<Row> rows;
  bool all_ok = false;
  std::string to_json() const;
};
SequenceCheckReport verify_sequences(const CounterexampleBundle& bundle);

/// The piecewise coefficient of the construction. Analytic derivatives piece
/// by piece; below the deepest representable block the value is frozen at the
/// truncation floor M_{n_max+1}.
Coefficient build_coefficient(const CounterexampleBundle& bundle);

// Normalized junction pieces.
double junction_f(double x);
double junction_f_antiderivative(double x);
double junction_g1(double x);
double junction_g2(double x);
double blender(double y);  // C^inf step: 0 for y<=0, 1 for y>=1, increasing
Jet<4> junction_f_jet(double x);
Jet<4> junction_g1_jet(double x);
Jet<4> junction_g2_jet(double x);
Jet<4> blender_jet(double y);

struct RegularityReport {
  struct Block {
    int n = 0;
    std::vector<double> derivative_sup;  // normalized sup |P^(j)|, j = 1..j_max
    double hoelder = 0.0;                // normalized per-block alpha-Hoelder estimate of c^(k)
    double max_breakpoint_mismatch = 0.0;  // relative, over orders 0..min(k+1,4)
    bool c_bounds_ok = false;            // (est:c-1)/(est:c-2) on the block grid
  };
  std::vector<Block> blocks;
  std::vector<double> Gamma;  // Gamma_j = max over blocks of derivative_sup[j-1]
  double hoelder_ratio = 0.0;  // max/min of per-block Hoelder estimates
  bool endpoint_hoelder_ok = false;  // |c^k(s'_i) - c^k(s'_j)| <= |s'_i - s'_j|^alpha
  bool near_zero_ok = false;         // max c on [0, t_depth] <= 2 lambda_depth^{-2(1-theta)}
  bool all_ok = false;
  std::string to_json() const;
};
RegularityReport verify_regularity(const CounterexampleBundle& bundle, int j_max);

struct PathologyReport {
  struct Mode {
    int n = 0;
    bool analytic_only = true;   // too large for any direct integration
    double log_E0_bound = 0.0;   // chain bound on E_n(0) (log domain, as double)
    bool E0_within_paper_bound = false;  // <= lambda^{2 theta} exp(5 pi)
    // closed-form exact log F_n(s_n) and the lower bound it must dominate
    LogReal log_F_sn;
    bool fk_sk_ok = false;
    LogReal log_F_teval;  // lower bound at t_eval
    LogReal log_term_initial;    // log of a_n^2 m_n^-2 E_n(0) exp(2 r lambda^{1/s})
    LogReal log_term_divergent;  // log of a_n^2 F_n(t_eval) exp(-2 R lambda^{1/S})
    bool divergent_exceeds_n = false;  // >= n - 2 log(n+1)
    // numeric cross-checks for integrable modes
    double closed_form_mismatch = -1.0;  // rel error of |u'(s_n)| vs closed form
    bool backward_bound_ok = true;       // E_n(0) <= E_n(t_n) exp(pi/2 + 4 pi)
  };
  std::vector<Mode> modes;
  int usable_from = 0;         // modes with s_n <= t_eval
  int n0 = -1;                 // joint threshold index; -1 when none <= n0_limit
  bool initial_series_summable = false;
  bool divergent_series_diverges = false;
  bool all_ok = false;
  std::string to_json() const;
};

/// Evaluates the two series of the derivative-loss argument in log domain:
/// the initial-time terms must fall by at least log 2 per step from n0 on,
/// the t_eval terms must exceed n - 2 log(n+1) from n0 on. Modes with
/// lambda <= integration_cutoff are also integrated directly.
PathologyReport pathology_demo(const CounterexampleBundle& bundle, double R, double S,
                               double s_gevrey, double r_gevrey, double t_eval,
                               int n0_limit = 4, double integration_cutoff = 1.0e4);

/// Certified lower bounds for sup_t log(E_n(t)/E_n(0)) per selected mode,
/// feeding the phase-diagram growth fit when direct integration is hopeless.
struct ModalGrowthOracle {
  std::vector<double> log_lambda;
  std::vector<LogReal> G;
};
ModalGrowthOracle growth_oracle(const CounterexampleBundle& bundle);

}  // namespace dampedwave
