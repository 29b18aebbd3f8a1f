#include "dampedwave/counterexample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dampedwave/approximation.hpp"
#include "dampedwave/modal_ode.hpp"
#include "format_util.hpp"
#include "json.hpp"

namespace dampedwave {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kPoolCap = 4000000000000000000LL;  // 2^j exponent cap
}  // namespace

// ---------------------------------------------------------------------------
// junction pieces
// ---------------------------------------------------------------------------

double junction_f(double x) {
  const double s = std::sin(x);
  return -s * s * s * s / 64.0 - std::sin(2.0 * x) / 4.0;
}

double junction_f_antiderivative(double x) {
  return -3.0 * x / 512.0 + std::sin(2.0 * x) / 256.0 - std::sin(4.0 * x) / 2048.0 +
         std::cos(2.0 * x) / 8.0;
}

Jet<4> junction_f_jet(double x) {
  Jet<4> arg = Jet<4>::variable(x);
  Jet<4> s = sin(arg);
  Jet<4> arg2 = Jet<4>::variable(x);
  arg2.a[0] = 2.0 * x;
  arg2.a[1] = 2.0;
  Jet<4> s2 = sin(arg2);
  return -1.0 / 64.0 * (s * s * s * s) - 0.25 * s2;
}

namespace {

Jet<4> sigma_bump_jet(double y) {
  if (y <= 0.0) return Jet<4>{};  // exp(-1/y) with the zero jet
  Jet<4> yy = Jet<4>::variable(y);
  return exp(-(Jet<4>::constant(1.0) / yy));
}

}  // namespace

Jet<4> blender_jet(double y) {
  if (y <= 0.0) return Jet<4>{};
  Jet<4> a = sigma_bump_jet(y);
  Jet<4> b;
  if (1.0 - y > 0.0) {
    Jet<4> one_minus;
    one_minus.a[0] = 1.0 - y;
    one_minus.a[1] = -1.0;
    b = exp(-(Jet<4>::constant(1.0) / one_minus));
  }
  return a / (a + b);
}

double blender(double y) { return blender_jet(y).value(); }

namespace {

// blender jet in the rescaled argument x/pi, chain rule applied
Jet<4> blender_scaled_jet(double x, double scale) {
  Jet<4> b = blender_jet(x / scale);
  Jet<4> bs;
  double p = 1.0;
  for (int k = 0; k <= 4; ++k) {
    bs.a[k] = b.a[k] * p;
    p /= scale;
  }
  return bs;
}

}  // namespace

Jet<4> junction_g1_jet(double x) { return junction_f_jet(x) * blender_scaled_jet(x, kPi); }

Jet<4> junction_g2_jet(double x) {
  return junction_f_jet(x) * (Jet<4>::constant(1.0) - blender_scaled_jet(x, kPi));
}

double junction_g1(double x) { return junction_g1_jet(x).value(); }
double junction_g2(double x) { return junction_g2_jet(x).value(); }

// ---------------------------------------------------------------------------
// selection of the eigenvalue subsequence (all in log domain)
// ---------------------------------------------------------------------------

namespace {

struct CondInput {
  double theta, sigma, delta, alpha, theta_n;
  int n;
  double log_prev;  // log lambda_{n-1}, 0 for n = 0
};

// names follow the selection conditions in order
const char* kCondNames[5] = {"lambda^{2(1-theta)}>=2", "lambda^{theta-2sigma}>=32delta",
                             "lambda^theta>=5*prev^theta", "junction Hoelder condition",
                             "inductive growth condition"};

bool condition(const CondInput& in, int which, double L) {
  switch (which) {
    case 0: return 2.0 * (1.0 - in.theta) * L >= kLn2;
    case 1: return (in.theta - 2.0 * in.sigma) * L >= std::log(32.0 * in.delta);
    case 2:
      if (in.n == 0) return true;
      return in.theta * L >= std::log(5.0) + in.theta * in.log_prev;
    case 3:
      if (in.n == 0) return true;
      return kLn2 + in.alpha * std::log(kPi) + 2.0 * (1.0 - in.theta) * L >=
             std::log(3.0) + in.theta * in.alpha * in.log_prev;
    case 4: {
      if (in.n == 0) return true;
      const std::array<double, 5> terms = {
          std::log(4.0 * in.delta) + 2.0 * in.sigma * L + std::log(double(in.n)),
          2.0 * in.log_prev + std::log(double(in.n)),
          std::log(2.0 * double(in.n)),
          std::log(3.0) + in.theta_n * L,
          std::log(4.0 * (1.0 - in.theta)) + std::log(L)};
      const double log_brace = log_sum_exp(terms);
      return std::log(kPi) + in.theta * L >= std::log(16.0) + in.theta * in.log_prev + log_brace;
    }
  }
  return false;
}

bool all_conditions(const CondInput& in, double L) {
  for (int w = 0; w < 5; ++w)
    if (!condition(in, w, L)) return false;
  return true;
}

LogReal floor_ratio(const LogReal& ratio) {
  if (ratio.log_abs() < 36.0) {  // below 2^53: floor is exact in doubles
    return LogReal::from_double(std::floor(ratio.to_double()));
  }
  return ratio;  // the fractional part is beyond double resolution anyway
}

double norm_sup(const std::function<double(double)>& f, double a, double b, int n) {
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::fabs(f(a + (b - a) * i / n)));
  return m;
}

}  // namespace

CounterexampleBundle select_sequences(const CounterexampleParams& params) {
  const double theta = theta_exponent(params.k, params.alpha);
  if (!(params.delta > 0.0))
    throw SelectionError("delta must be positive", "delta>0", -1);
  if (!(params.sigma >= 0.0) || !(params.sigma < theta / 2.0))
    throw SelectionError("sigma outside the pathological regime (needs 0 <= sigma < 1/(2+k+alpha))",
                         "hp:sigma-ka-cjs", -1);
  if (params.n_max < 0) throw SelectionError("n_max must be >= 0", "n_max", -1);

  CounterexampleBundle bundle;
  bundle.params = params;
  bundle.theta = theta;

  const int levels = params.n_max + 2;  // one extra level for the truncation floor
  std::vector<double> theta_seq = params.theta_seq;
  if (theta_seq.empty()) {
    theta_seq.resize(static_cast<std::size_t>(levels));
    for (int n = 0; n < levels; ++n)
      theta_seq[static_cast<std::size_t>(n)] = theta * (1.0 - std::ldexp(1.0, -(n + 2)));
  }
  if (static_cast<int>(theta_seq.size()) < levels)
    throw SelectionError("theta_seq shorter than n_max + 2", "theta_seq", -1);
  for (int n = 0; n < levels; ++n) {
    const double tn = theta_seq[static_cast<std::size_t>(n)];
    if (!(tn > 0.0) || !(tn < theta) || (n > 0 && !(tn > theta_seq[static_cast<std::size_t>(n - 1)])))
      throw SelectionError("theta_seq must increase strictly to theta from below", "theta_seq", n);
  }

  std::int64_t j_prev = params.pool_start_exponent - 1;
  double log_prev = 0.0;  // lambda_{-1} = 1
  for (int n = 0; n < levels; ++n) {
    CondInput in{theta, params.sigma, params.delta, params.alpha,
                 theta_seq[static_cast<std::size_t>(n)], n, log_prev};
    auto pred = [&](std::int64_t j) { return all_conditions(in, j * kLn2); };

    std::int64_t j;
    if (pred(j_prev + 1)) {
      j = j_prev + 1;
    } else {
      std::int64_t step = 1;
      while (j_prev + step < kPoolCap && !pred(j_prev + step)) step *= 2;
      if (j_prev + step >= kPoolCap) {
        for (int w = 0; w < 5; ++w)
          if (!condition(in, w, double(kPoolCap) * kLn2))
            throw SelectionError("eigenvalue pool exhausted", kCondNames[w], n);
        throw SelectionError("eigenvalue pool exhausted", "unknown", n);
      }
      std::int64_t lo = j_prev + step / 2, hi = j_prev + step;
      while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (pred(mid) ? hi : lo) = mid;
      }
      j = hi;
    }

    SequenceEntry e;
    e.j = j;
    e.log_lambda = double(j) * kLn2;
    e.theta_n = in.theta_n;
    e.lambda = LogReal::from_log(e.log_lambda);
    e.m = LogReal::from_log(-(1.0 - theta) * e.log_lambda);
    e.M = e.m * e.m + LogReal::from_log(2.0 * std::log(params.delta) +
                                        (4.0 * params.sigma - 2.0) * e.log_lambda);
    const LogReal ratio = LogReal::from_log(kLn2 + theta * (e.log_lambda - log_prev));
    e.blocks = floor_ratio(ratio);
    const LogReal inv_lt = LogReal::from_log(-theta * e.log_lambda);
    e.t = LogReal::from_double(4.0 * kPi) * inv_lt;
    e.t_prime = LogReal::from_double(3.0 * kPi) * inv_lt;
    e.s = LogReal::from_double(kPi) * e.blocks * inv_lt;
    e.s_prime = LogReal::from_double(kPi) * (e.blocks + LogReal::from_double(1.0)) * inv_lt;
    e.log_a = LogReal::from_double(-(1.0 - theta) * e.log_lambda - std::log(double(n + 1)) -
                                   theta * e.log_lambda) -
              LogReal::from_log(in.theta_n * e.log_lambda);
    bundle.seq.push_back(e);

    j_prev = j;
    log_prev = e.log_lambda;
  }

  // empirical Gamma_1: sup of the normalized first derivative across pieces
  double g = std::max(norm_sup([](double x) { return junction_f_jet(x).derivative(1); }, 0, kPi, 4096),
                      std::max(norm_sup([](double x) { return junction_g1_jet(x).derivative(1); }, 0,
                                        kPi, 4096),
                               norm_sup([](double x) { return junction_g2_jet(x).derivative(1); }, 0,
                                        kPi, 4096)));
  const double db = norm_sup([](double y) { return blender_jet(y).derivative(1); }, 0, 1, 4096);
  for (int n = 0; n <= params.n_max; ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const auto& ee = bundle.seq[static_cast<std::size_t>(n + 1)];
    const double dm = ((e.M - ee.M) / (e.m * e.m)).to_double();
    const double w = ((e.t_prime - ee.s_prime) * LogReal::from_log(theta * e.log_lambda)).to_double();
    g = std::max(g, dm * db / w);
  }
  bundle.gamma1 = g;
  return bundle;
}

SequenceCheckReport verify_sequences(const CounterexampleBundle& bundle) {
  SequenceCheckReport rep;
  rep.all_ok = true;
  const auto& p = bundle.params;
  const double theta = bundle.theta;

  for (int n = 0; n < static_cast<int>(bundle.seq.size()); ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const double log_prev = n == 0 ? 0.0 : bundle.seq[static_cast<std::size_t>(n - 1)].log_lambda;
    CondInput in{theta, p.sigma, p.delta, p.alpha, e.theta_n, n, log_prev};

    SequenceCheckReport::Row row;
    row.n = n;
    row.li_1 = condition(in, 0, e.log_lambda);
    row.li_2 = condition(in, 1, e.log_lambda);
    row.li_3 = condition(in, 2, e.log_lambda);
    row.li_alpha = condition(in, 3, e.log_lambda);
    row.li_tremenda = condition(in, 4, e.log_lambda);
    row.doubling_stable = all_conditions(in, e.log_lambda + kLn2);

    // t' < t is the exact ratio 3/4; t < s and s < s' reduce to the block
    // count: s = pi*blocks/l^theta with blocks >= 5 and s' adds one more
    // half-period, which sits below the log-domain resolution from n = 1 on
    row.ordering = e.t_prime < e.t && e.blocks >= LogReal::from_double(5.0) &&
                   e.s <= e.s_prime && !e.lambda.is_zero();
    if (n + 1 < static_cast<int>(bundle.seq.size()))
      row.ordering = row.ordering && bundle.seq[static_cast<std::size_t>(n + 1)].s_prime < e.t_prime;

    const LogReal m2 = e.m * e.m;
    row.m_bounds = m2 <= e.M && e.M <= LogReal::from_double(1.5) * m2;

    const LogReal pi_prev = LogReal::from_log(std::log(kPi) - theta * log_prev);
    const LogReal gap2 = LogReal::from_log(std::log(4.0 * kPi / 5.0) - theta * e.log_lambda);
    bool gaps = (e.s - e.t) >= pi_prev && e.s >= pi_prev;
    if (n + 1 < static_cast<int>(bundle.seq.size()))
      gaps = gaps && (e.t_prime - bundle.seq[static_cast<std::size_t>(n + 1)].s_prime) >= gap2;
    row.gaps = gaps;

    rep.all_ok = rep.all_ok && row.li_1 && row.li_2 && row.li_3 && row.li_alpha &&
                 row.li_tremenda && row.ordering && row.m_bounds && row.gaps &&
                 row.doubling_stable;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// the piecewise coefficient
// ---------------------------------------------------------------------------

namespace {

// cumulative Gauss-Legendre antiderivative of a smooth function on [0, len]
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> f, double len, int panels = 64)
      : f_(std::move(f)), len_(len), panels_(panels), prefix_(static_cast<std::size_t>(panels + 1), 0.0) {
    for (int i = 0; i < panels; ++i)
      prefix_[static_cast<std::size_t>(i + 1)] =
          prefix_[static_cast<std::size_t>(i)] + panel(len_ * i / panels, len_ * (i + 1) / panels);
  }
  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    x = std::min(x, len_);
    const int i = std::min(static_cast<int>(x / len_ * panels_), panels_ - 1);
    return prefix_[static_cast<std::size_t>(i)] + panel(len_ * i / panels_, x);
  }
  double total() const { return prefix_.back(); }

 private:
  double panel(double a, double b) const {
    static constexpr double xs[4] = {0.1834346424956498, 0.5255324099163290,
                                     0.7966664774136267, 0.9602898564975363};
    static constexpr double ws[4] = {0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int q = 0; q < 4; ++q) s += ws[q] * (f_(c - h * xs[q]) + f_(c + h * xs[q]));
    return s * h;
  }
  std::function<double(double)> f_;
  double len_ = 1.0;
  int panels_ = 1;
  std::vector<double> prefix_;
};

const CumulativeIntegral& g1_integral() {
  static const CumulativeIntegral I(junction_g1, kPi);
  return I;
}
const CumulativeIntegral& g2_integral() {
  static const CumulativeIntegral I(junction_g2, kPi);
  return I;
}
const CumulativeIntegral& blender_integral() {
  static const CumulativeIntegral I(blender, 1.0);
  return I;
}

struct PathologicalImpl final : Coefficient::Impl {
  // all arrays indexed by level n = 0 .. n_max+1; doubles may have under- or
  // overflowed, the comparisons below only ever touch the representable range
  std::vector<double> lam_theta, m2, Mv, tp, tn, sn, sp;
  double floor_value = 0.0;  // M_{n_max+1}
  std::vector<double> C_at_sp;  // antiderivative at s'_n
  int deepest = 0;              // n_max

  int locate(double t) const {
    for (int n = 0; n <= deepest; ++n)
      if (t >= sp[static_cast<std::size_t>(n + 1)]) return n;
    return -1;  // below the deepest block: truncation floor
  }

  double value(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t >= sp[0]) return Mv[0];
    const int n = locate(t);
    if (n < 0) return floor_value;
    const auto u = static_cast<std::size_t>(n);
    if (m2[u] == 0.0 || !std::isfinite(lam_theta[u])) return Mv[u];
    if (t >= sn[u]) return Mv[u] + m2[u] * junction_g2(std::clamp(lam_theta[u] * (t - sn[u]), 0.0, kPi));
    if (t >= tn[u]) return Mv[u] + m2[u] * junction_f(lam_theta[u] * t);
    if (t >= tp[u]) return Mv[u] + m2[u] * junction_g1(std::clamp(lam_theta[u] * (t - tp[u]), 0.0, kPi));
    const double den = tp[u] - sp[u + 1];
    if (!(den > 0.0)) return Mv[u];
    return Mv[u + 1] + (Mv[u] - Mv[u + 1]) * blender((t - sp[u + 1]) / den);
  }

  double derivative(double t) const override {
    if (t <= 0.0 || t >= sp[0]) return 0.0;
    const int n = locate(t);
    if (n < 0) return 0.0;
    const auto u = static_cast<std::size_t>(n);
    if (m2[u] == 0.0 || !std::isfinite(lam_theta[u])) return 0.0;
    const double scale = m2[u] * lam_theta[u];
    if (t >= sn[u])
      return scale * junction_g2_jet(std::clamp(lam_theta[u] * (t - sn[u]), 0.0, kPi)).derivative(1);
    if (t >= tn[u]) return scale * junction_f_jet(lam_theta[u] * t).derivative(1);
    if (t >= tp[u])
      return scale * junction_g1_jet(std::clamp(lam_theta[u] * (t - tp[u]), 0.0, kPi)).derivative(1);
    const double den = tp[u] - sp[u + 1];
    if (!(den > 0.0)) return 0.0;
    return (Mv[u] - Mv[u + 1]) / den * blender_jet((t - sp[u + 1]) / den).derivative(1);
  }

  double antiderivative(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t >= sp[0]) return C_at_sp[0] + Mv[0] * (t - sp[0]);
    const int n = locate(t);
    if (n < 0) return floor_value * t;
    const auto u = static_cast<std::size_t>(n);
    double C = C_at_sp[u + 1];
    const double den = tp[u] - sp[u + 1];
    if (t < tp[u]) {
      if (!(den > 0.0)) return C;
      return C + Mv[u + 1] * (t - sp[u + 1]) +
             (Mv[u] - Mv[u + 1]) * den * blender_integral()((t - sp[u + 1]) / den);
    }
    C += Mv[u + 1] * den + (Mv[u] - Mv[u + 1]) * den * blender_integral().total();
    const double inv = std::isfinite(lam_theta[u]) && lam_theta[u] > 0.0 ? 1.0 / lam_theta[u] : 0.0;
    if (t < tn[u])
      return C + Mv[u] * (t - tp[u]) + m2[u] * inv * g1_integral()(lam_theta[u] * (t - tp[u]));
    C += Mv[u] * (tn[u] - tp[u]) + m2[u] * inv * g1_integral().total();
    if (t < sn[u])
      return C + Mv[u] * (t - tn[u]) +
             m2[u] * inv *
                 (junction_f_antiderivative(lam_theta[u] * t) -
                  junction_f_antiderivative(lam_theta[u] * tn[u]));
    C += Mv[u] * (sn[u] - tn[u]) +
         m2[u] * inv *
             (junction_f_antiderivative(lam_theta[u] * sn[u]) -
              junction_f_antiderivative(lam_theta[u] * tn[u]));
    return C + Mv[u] * (t - sn[u]) + m2[u] * inv * g2_integral()(lam_theta[u] * (t - sn[u]));
  }
};

}  // namespace

Coefficient build_coefficient(const CounterexampleBundle& bundle) {
  auto impl = std::make_shared<PathologicalImpl>();
  const int levels = static_cast<int>(bundle.seq.size());
  impl->deepest = bundle.params.n_max;
  impl->lam_theta.resize(static_cast<std::size_t>(levels));
  impl->m2.resize(static_cast<std::size_t>(levels));
  impl->Mv.resize(static_cast<std::size_t>(levels));
  impl->tp.resize(static_cast<std::size_t>(levels));
  impl->tn.resize(static_cast<std::size_t>(levels));
  impl->sn.resize(static_cast<std::size_t>(levels));
  impl->sp.resize(static_cast<std::size_t>(levels));
  for (int n = 0; n < levels; ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const auto u = static_cast<std::size_t>(n);
    impl->lam_theta[u] = std::exp(bundle.theta * e.log_lambda);
    impl->m2[u] = (e.m * e.m).to_double();
    impl->Mv[u] = e.M.to_double();
    impl->tp[u] = e.t_prime.to_double();
    impl->tn[u] = e.t.to_double();
    impl->sn[u] = e.s.to_double();
    impl->sp[u] = e.s_prime.to_double();
  }
  impl->floor_value = impl->Mv[static_cast<std::size_t>(levels - 1)];

  // cumulative antiderivative at the block boundaries, built bottom-up in log
  // domain and materialized as doubles
  impl->C_at_sp.assign(static_cast<std::size_t>(levels), 0.0);
  LogReal C = bundle.seq.back().M * bundle.seq.back().s_prime;  // truncation floor region
  impl->C_at_sp[static_cast<std::size_t>(levels - 1)] = C.to_double();
  const double IB = blender_integral().total();
  const double IG1 = g1_integral().total();
  const double IG2 = g2_integral().total();
  for (int n = levels - 2; n >= 0; --n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const auto& deeper = bundle.seq[static_cast<std::size_t>(n + 1)];
    const LogReal width_ell = e.t_prime - deeper.s_prime;
    const LogReal inv_lt = LogReal::from_log(-bundle.theta * e.log_lambda);
    const LogReal pi_lt = LogReal::from_double(kPi) * inv_lt;
    const LogReal m2 = e.m * e.m;
    LogReal block = deeper.M * width_ell + (e.M - deeper.M) * width_ell * LogReal::from_double(IB);
    block += e.M * pi_lt + m2 * inv_lt * LogReal::from_double(IG1);
    // oscillating stretch: mean part plus the exact f antiderivative at
    // multiples of pi, where IF(N pi) = -3 N pi / 512 + 1/8
    block += e.M * (e.s - e.t) +
             m2 * inv_lt * LogReal::from_double(-3.0 * kPi / 512.0) *
                 (e.blocks - LogReal::from_double(4.0));
    block += e.M * pi_lt + m2 * inv_lt * LogReal::from_double(IG2);
    C += block;
    impl->C_at_sp[static_cast<std::size_t>(n)] = C.to_double();
  }

  impl->horizon = impl->sp[0] * 1.5 + 1.0;
  impl->mu = impl->Mv[0] + 0.5 * impl->m2[0];
  impl->k = bundle.params.k;
  impl->alpha = bundle.params.alpha;
  impl->family = "counterexample";
  // declared Hoelder constant for the k = 0 path: per-block profile estimate
  // times a cross-block safety factor
  {
    const double a = bundle.params.alpha;
    double h = 0.0;
    const int N = 400;
    std::vector<double> xs(N + 1), ys(N + 1);
    for (int i = 0; i <= N; ++i) {
      xs[static_cast<std::size_t>(i)] = 2.0 * kPi * i / N;
      double x = xs[static_cast<std::size_t>(i)];
      ys[static_cast<std::size_t>(i)] = x <= kPi ? junction_g1(x) : junction_f(x);
    }
    for (int i = 0; i <= N; ++i)
      for (int q = i + 1; q <= N; ++q)
        h = std::max(h, std::fabs(ys[static_cast<std::size_t>(q)] - ys[static_cast<std::size_t>(i)]) /
                            std::pow(xs[static_cast<std::size_t>(q)] - xs[static_cast<std::size_t>(i)], a));
    impl->hoelder = 3.0 * std::max(h, 1.0);
  }
  return Coefficient(impl);
}

// ---------------------------------------------------------------------------
// regularity verification (normalized per-block profiles)
// ---------------------------------------------------------------------------

namespace {

// normalized block profile around the left junction: xi in [-w, 2 pi],
// xi < 0 is the ell junction, [0, pi] is g1, beyond is the f stretch
struct BlockProfile {
  double r1;  // M_n / m_n^2
  double r0;  // M_{n+1} / m_n^2
  double w;   // normalized ell width

  Jet<4> left(double xi) const {
    if (xi >= kPi) return Jet<4>::constant(r1) + junction_f_jet(xi);
    if (xi >= 0.0) return Jet<4>::constant(r1) + junction_g1_jet(xi);
    Jet<4> b = blender_jet((xi + w) / w);
    Jet<4> bs;
    double p = 1.0;
    for (int k = 0; k <= 4; ++k) {
      bs.a[k] = b.a[k] * p;
      p /= w;
    }
    return Jet<4>::constant(r0) + (r1 - r0) * bs;
  }
  // around the right junction: eta < 0 is the f stretch (period-reduced),
  // [0, pi] is g2
  Jet<4> right(double eta) const {
    if (eta <= 0.0) return Jet<4>::constant(r1) + junction_f_jet(eta);
    return Jet<4>::constant(r1) + junction_g2_jet(eta);
  }
};

double pair_hoelder(const std::vector<double>& xs, const std::vector<double>& ys, double alpha) {
  double h = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t q = i + 1; q < xs.size(); ++q)
      h = std::max(h, std::fabs(ys[q] - ys[i]) / std::pow(xs[q] - xs[i], alpha));
  return h;
}

}  // namespace

RegularityReport verify_regularity(const CounterexampleBundle& bundle, int j_max) {
  RegularityReport rep;
  const int jm = std::clamp(j_max, 1, 4);
  rep.Gamma.assign(static_cast<std::size_t>(jm), 0.0);
  const int k = bundle.params.k;
  const double alpha = bundle.params.alpha;
  const int n_max = bundle.params.n_max;

  double h_min = kInf, h_max = 0.0;
  bool all_ok = true;

  for (int n = 0; n <= n_max; ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const auto& deeper = bundle.seq[static_cast<std::size_t>(n + 1)];
    BlockProfile prof;
    prof.r1 = (e.M / (e.m * e.m)).to_double();
    prof.r0 = (deeper.M / (e.m * e.m)).to_double();
    prof.w = ((e.t_prime - deeper.s_prime) * LogReal::from_log(bundle.theta * e.log_lambda)).to_double();

    RegularityReport::Block blk;
    blk.n = n;

    const int N = 1200;
    std::vector<double> xs, ys;
    xs.reserve(2 * N + 2);
    ys.reserve(2 * N + 2);
    bool bounds_ok = true;
    std::vector<double> sup(static_cast<std::size_t>(jm), 0.0);
    for (int i = 0; i <= N; ++i) {
      const double xi = -prof.w + (2.0 * kPi + prof.w) * i / N;
      const Jet<4> p = prof.left(xi);
      for (int j = 1; j <= jm; ++j)
        sup[static_cast<std::size_t>(j - 1)] =
            std::max(sup[static_cast<std::size_t>(j - 1)], std::fabs(p.derivative(j)));
      if (xi >= 0.0) bounds_ok = bounds_ok && p.value() >= 0.5 && p.value() <= 2.0;
      else bounds_ok = bounds_ok && p.value() >= prof.r0 - 1e-12 && p.value() <= prof.r1 + 1e-12;
      xs.push_back(xi);
      ys.push_back(k == 0 ? p.value() : p.derivative(k));
    }
    for (int i = 0; i <= N; ++i) {
      const double eta = -2.0 * kPi + 3.0 * kPi * i / N;
      const Jet<4> p = prof.right(eta);
      for (int j = 1; j <= jm; ++j)
        sup[static_cast<std::size_t>(j - 1)] =
            std::max(sup[static_cast<std::size_t>(j - 1)], std::fabs(p.derivative(j)));
      bounds_ok = bounds_ok && p.value() >= 0.5 && p.value() <= 2.0;
    }
    blk.derivative_sup = sup;
    blk.c_bounds_ok = bounds_ok;
    for (int j = 1; j <= jm; ++j)
      rep.Gamma[static_cast<std::size_t>(j - 1)] =
          std::max(rep.Gamma[static_cast<std::size_t>(j - 1)], sup[static_cast<std::size_t>(j - 1)]);

    // per-block Hoelder estimate of the normalized c^(k): left window pairs
    // plus right-window pairs
    double h = pair_hoelder(xs, ys, alpha);
    {
      std::vector<double> xr, yr;
      for (int i = 0; i <= N; ++i) {
        const double eta = -2.0 * kPi + 3.0 * kPi * i / N;
        xr.push_back(eta);
        const Jet<4> p = prof.right(eta);
        yr.push_back(k == 0 ? p.value() : p.derivative(k));
      }
      h = std::max(h, pair_hoelder(xr, yr, alpha));
    }
    blk.hoelder = h;
    h_min = std::min(h_min, h);
    h_max = std::max(h_max, h);

    // one-sided jets at the four breakpoints (normalized)
    double mism = 0.0;
    auto compare = [&mism, jm, k](const Jet<4>& a, const Jet<4>& b) {
      const int orders = std::min(std::min(k + 1, 4), jm);
      for (int p = 0; p <= orders; ++p) {
        const double l = a.derivative(p), r = b.derivative(p);
        mism = std::max(mism, std::fabs(l - r) / std::max({std::fabs(l), std::fabs(r), 1.0}));
      }
    };
    {
      // t'_n: ell meets g1
      Jet<4> b1 = blender_jet(1.0);
      Jet<4> lhs;
      double p = 1.0;
      for (int q = 0; q <= 4; ++q) {
        lhs.a[q] = b1.a[q] * p;
        p /= prof.w;
      }
      compare(Jet<4>::constant(prof.r0) + (prof.r1 - prof.r0) * lhs, prof.left(0.0));
      // t_n: g1 meets f; f is pi-periodic so the absolute phase 4 pi reduces to pi
      compare(Jet<4>::constant(prof.r1) + junction_g1_jet(kPi),
              Jet<4>::constant(prof.r1) + junction_f_jet(kPi));
      // s_n: f meets g2
      compare(prof.right(0.0), Jet<4>::constant(prof.r1) + junction_g2_jet(0.0));
      // s'_n: g2 meets the ell junction of the shallower block (flat there)
      compare(Jet<4>::constant(prof.r1) + junction_g2_jet(kPi), Jet<4>::constant(prof.r1));
    }
    blk.max_breakpoint_mismatch = mism;
    all_ok = all_ok && bounds_ok && mism <= 1e-8;
    rep.blocks.push_back(blk);
  }

  rep.hoelder_ratio = h_max / h_min;
  all_ok = all_ok && rep.hoelder_ratio <= 2.0;

  // endpoint Hoelder chain across blocks
  bool endpoints = true;
  if (k == 0) {
    for (std::size_t i = 0; i + 1 < bundle.seq.size(); ++i)
      for (std::size_t q = i + 1; q < bundle.seq.size(); ++q) {
        const LogReal dM = bundle.seq[i].M - bundle.seq[q].M;
        const LogReal ds = bundle.seq[i].s_prime - bundle.seq[q].s_prime;
        if (!(dM <= ds.pow(alpha))) endpoints = false;
      }
  }
  rep.endpoint_hoelder_ok = endpoints;
  all_ok = all_ok && endpoints;

  // continuity at the origin: max of c on [0, t_depth] <= 2 lambda_depth^{-2(1-theta)}
  {
    const auto& e = bundle.seq[static_cast<std::size_t>(n_max)];
    const double g1max =
        norm_sup([](double x) { return std::max(junction_g1(x), 0.0); }, 0.0, kPi, 4096);
    const LogReal max_c = e.M + e.m * e.m * LogReal::from_double(g1max);
    rep.near_zero_ok = max_c <= LogReal::from_double(2.0) * e.m * e.m;
    all_ok = all_ok && rep.near_zero_ok;
  }

  rep.all_ok = all_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// pathology demonstration
// ---------------------------------------------------------------------------

PathologyReport pathology_demo(const CounterexampleBundle& bundle, double R, double S,
                               double s_gevrey, double r_gevrey, double t_eval, int n0_limit,
                               double integration_cutoff) {
  const double ka = bundle.params.k + bundle.params.alpha;
  if (!(s_gevrey > 1.0 + ka / 2.0) || !(S > 1.0 + ka / 2.0))
    throw SelectionError("Gevrey orders must exceed 1 + (k+alpha)/2", "orders", -1);
  if (!(t_eval > 0.0)) throw SelectionError("t_eval must be positive", "t_eval", -1);

  PathologyReport rep;
  const double theta = bundle.theta;
  const double eps = bundle.epsilon;
  const double delta = bundle.params.delta;
  const double sigma = bundle.params.sigma;
  const double G1 = bundle.gamma1;
  const int n_max = bundle.params.n_max;

  Coefficient coeff;  // built lazily, only when a mode is integrable

  rep.usable_from = n_max + 1;
  for (int n = n_max; n >= 0; --n) {
    if (bundle.seq[static_cast<std::size_t>(n)].s <= LogReal::from_double(t_eval))
      rep.usable_from = n;
    else
      break;
  }

  for (int n = 0; n <= n_max; ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const double L = e.log_lambda;
    const double Lprev = n == 0 ? 0.0 : bundle.seq[static_cast<std::size_t>(n - 1)].log_lambda;
    PathologyReport::Mode mode;
    mode.n = n;

    // E_n(0) by the backward chain: E(t_n) = lambda^{2 theta}
    // exp(2 (2 eps l^theta - d l^{2s}) t_n), then the factor exp(pi/2 + 4 pi)
    const double damp_tn = 8.0 * kPi * delta * std::exp((2.0 * sigma - theta) * L);
    const double logE_tn = 2.0 * theta * L + kPi / 2.0 - damp_tn;
    mode.log_E0_bound = logE_tn + kPi / 2.0 + 4.0 * kPi;
    mode.E0_within_paper_bound = mode.log_E0_bound <= 2.0 * theta * L + 5.0 * kPi + 1e-12;

    // exact log F_n(s_n) and the est:fk-sk floor
    const LogReal pump = LogReal::from_log(std::log(4.0 * eps) + theta * L) * e.s;
    const LogReal drain = LogReal::from_log(std::log(2.0 * delta) + 2.0 * sigma * L) * e.s;
    mode.log_F_sn = LogReal::from_double(2.0 * theta * L) + pump - drain;
    const LogReal floor_sk =
        LogReal::from_double(2.0 * theta * L) + LogReal::from_log(std::log(2.0 * eps) + theta * L) * e.s;
    mode.fk_sk_ok = mode.log_F_sn >= floor_sk;

    // est:fk-t at t_eval
    const LogReal decay =
        (LogReal::from_log(std::log(4.0 * delta) + 2.0 * sigma * L) +
         LogReal::from_log(std::log(2.0 * G1) + 2.0 * Lprev)) *
        LogReal::from_double(t_eval);
    mode.log_F_teval = LogReal::from_double(2.0 * theta * L) +
                       LogReal::from_log(std::log(2.0 * eps) + theta * L) * e.s - decay -
                       LogReal::from_double(2.0 * kPi * G1 + 2.0 * (1.0 - theta) * L);

    // series terms, fully in log domain
    const LogReal two_log_a = e.log_a * LogReal::from_double(2.0);
    mode.log_term_initial = two_log_a + LogReal::from_double(2.0 * (1.0 - theta) * L) +
                            LogReal::from_double(mode.log_E0_bound) +
                            LogReal::from_log(std::log(2.0 * r_gevrey) + L / s_gevrey);
    mode.log_term_divergent =
        two_log_a + mode.log_F_teval - LogReal::from_log(std::log(2.0 * R) + L / S);
    mode.divergent_exceeds_n =
        mode.log_term_divergent >= LogReal::from_double(double(n) - 2.0 * std::log(double(n + 1)));

    // direct cross-checks for integrable modes
    if (e.lambda.representable() && e.lambda.to_double() <= integration_cutoff) {
      mode.analytic_only = false;
      if (!coeff.valid()) coeff = build_coefficient(bundle);
      const double lam = e.lambda.to_double();
      const double m = e.m.to_double();
      const double tn = e.t.to_double();
      const double sn = e.s.to_double();
      const double dup = m * lam * std::exp((2.0 * eps * m * lam - delta * std::pow(lam, 2.0 * sigma)) * tn);

      ModalProblem fwd;
      fwd.lambda = lam;
      fwd.delta = delta;
      fwd.sigma = sigma;
      fwd.coefficient = coeff;
      fwd.u0 = 0.0;
      fwd.u1 = dup;
      fwd.t_start = tn;
      fwd.t_end = sn;
      const ModalTrajectory f = integrate(fwd, 1e-11, 1e-14);
      const double closed = std::fabs(counterexample_block_solution(m, eps, lam, delta, sigma, sn).dw);
      mode.closed_form_mismatch = std::fabs(std::fabs(f.du.back()) - closed) / closed;

      ModalProblem bwd = fwd;
      bwd.t_start = tn;
      bwd.t_end = 0.0;
      const ModalTrajectory b = integrate(bwd, 1e-11, 1e-14);
      const double E0 = b.du.back() * b.du.back() + m * m * lam * lam * b.u.back() * b.u.back();
      const double Etn = dup * dup;
      mode.backward_bound_ok = E0 <= Etn * std::exp(kPi / 2.0 + 4.0 * kPi) * (1.0 + 1e-9);
      mode.E0_within_paper_bound =
          mode.E0_within_paper_bound &&
          E0 <= std::exp(2.0 * theta * L + 5.0 * kPi) * (1.0 + 1e-9);
    }
    rep.modes.push_back(mode);
  }

  // joint threshold: smallest n0 <= n0_limit from which the initial-time terms
  // drop by at least log 2 per step and the divergent terms beat n - 2 log(n+1)
  const LogReal ln2 = LogReal::from_double(kLn2);
  for (int n0 = 0; n0 <= std::min(n0_limit, n_max); ++n0) {
    bool dec = true;
    for (int n = n0; n < n_max; ++n)
      dec = dec && rep.modes[static_cast<std::size_t>(n + 1)].log_term_initial <=
                       rep.modes[static_cast<std::size_t>(n)].log_term_initial - ln2;
    bool div_ok = true;
    for (int n = std::max(n0, rep.usable_from); n <= n_max; ++n)
      div_ok = div_ok && rep.modes[static_cast<std::size_t>(n)].divergent_exceeds_n;
    if (dec && div_ok) {
      rep.n0 = n0;
      rep.initial_series_summable = true;
      rep.divergent_series_diverges = true;
      break;
    }
  }

  bool ok = rep.n0 >= 0;
  for (const auto& m : rep.modes) {
    ok = ok && m.E0_within_paper_bound && m.fk_sk_ok && m.backward_bound_ok;
    if (!m.analytic_only) ok = ok && m.closed_form_mismatch <= 1e-6;
  }
  rep.all_ok = ok;
  return rep;
}

ModalGrowthOracle growth_oracle(const CounterexampleBundle& bundle) {
  ModalGrowthOracle o;
  const double theta = bundle.theta;
  for (int n = 0; n <= bundle.params.n_max; ++n) {
    const auto& e = bundle.seq[static_cast<std::size_t>(n)];
    const LogReal G =
        LogReal::from_log(std::log(2.0 * bundle.epsilon) + theta * e.log_lambda) * e.s -
        LogReal::from_double(5.0 * kPi + 2.0 * (1.0 - theta) * e.log_lambda);
    o.log_lambda.push_back(e.log_lambda);
    o.G.push_back(G);
  }
  return o;
}

// ---------------------------------------------------------------------------
// JSON export
// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json logreal_json(const LogReal& x) {
  nlohmann::ordered_json j;
  j["sign"] = x.sign();
  if (x.is_zero()) {
    j["log10"] = nullptr;
    j["linear"] = 0.0;
    return j;
  }
  j["log10"] = x.log_abs() / 2.302585092994045684;
  if (x.representable())
    j["linear"] = x.to_double();
  else
    j["linear"] = nullptr;
  return j;
}

}  // namespace

std::string CounterexampleBundle::to_json() const {
  nlohmann::ordered_json j;
  j["delta"] = params.delta;
  j["sigma"] = params.sigma;
  j["k"] = params.k;
  j["alpha"] = params.alpha;
  j["n_max"] = params.n_max;
  j["theta"] = theta;
  j["epsilon"] = epsilon;
  j["gamma1"] = gamma1;
  j["junctions"] = {{"g1", junction_g1}, {"g2", junction_g2}, {"h", junction_h}};
  j["sequence"] = nlohmann::ordered_json::array();
  for (const auto& e : seq) {
    nlohmann::ordered_json je;
    je["pool_exponent"] = e.j;
    je["theta_n"] = e.theta_n;
    je["lambda"] = logreal_json(e.lambda);
    je["m"] = logreal_json(e.m);
    je["M"] = logreal_json(e.M);
    je["blocks"] = logreal_json(e.blocks);
    je["t"] = logreal_json(e.t);
    je["s"] = logreal_json(e.s);
    je["t_prime"] = logreal_json(e.t_prime);
    je["s_prime"] = logreal_json(e.s_prime);
    je["log_a"] = logreal_json(e.log_a);
    j["sequence"].push_back(je);
  }
  return j.dump(2);
}

std::string SequenceCheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["all_ok"] = all_ok;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"n", r.n},
                         {"li_1", r.li_1},
                         {"li_2", r.li_2},
                         {"li_3", r.li_3},
                         {"li_alpha", r.li_alpha},
                         {"li_tremenda", r.li_tremenda},
                         {"ordering", r.ordering},
                         {"m_bounds", r.m_bounds},
                         {"gaps", r.gaps},
                         {"doubling_stable", r.doubling_stable}});
  }
  return j.dump(2);
}

std::string RegularityReport::to_json() const {
  nlohmann::ordered_json j;
  j["all_ok"] = all_ok;
  j["Gamma"] = Gamma;
  j["hoelder_ratio"] = hoelder_ratio;
  j["endpoint_hoelder_ok"] = endpoint_hoelder_ok;
  j["near_zero_ok"] = near_zero_ok;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : blocks) {
    j["blocks"].push_back({{"n", b.n},
                           {"derivative_sup", b.derivative_sup},
                           {"hoelder", b.hoelder},
                           {"max_breakpoint_mismatch", b.max_breakpoint_mismatch},
                           {"c_bounds_ok", b.c_bounds_ok}});
  }
  return j.dump(2);
}

std::string PathologyReport::to_json() const {
  nlohmann::ordered_json j;
  j["all_ok"] = all_ok;
  j["n0"] = n0;
  j["usable_from"] = usable_from;
  j["initial_series_summable"] = initial_series_summable;
  j["divergent_series_diverges"] = divergent_series_diverges;
  j["modes"] = nlohmann::ordered_json::array();
  for (const auto& m : modes) {
    j["modes"].push_back({{"n", m.n},
                          {"analytic_only", m.analytic_only},
                          {"log_E0_bound", m.log_E0_bound},
                          {"E0_within_paper_bound", m.E0_within_paper_bound},
                          {"log_F_sn", logreal_json(m.log_F_sn)},
                          {"fk_sk_ok", m.fk_sk_ok},
                          {"log_F_teval", logreal_json(m.log_F_teval)},
                          {"log_term_initial", logreal_json(m.log_term_initial)},
                          {"log_term_divergent", logreal_json(m.log_term_divergent)},
                          {"divergent_exceeds_n", m.divergent_exceeds_n},
                          {"closed_form_mismatch", m.closed_form_mismatch},
                          {"backward_bound_ok", m.backward_bound_ok}});
  }
  return j.dump(2);
}

}  // namespace dampedwave
