#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

namespace dampedwave {

/// Signed scalar stored as sign * exp(log_abs).
///
/// The counterexample construction produces quantities like exp(lambda^theta)
/// with lambda itself far beyond double range, so even the *logarithms* of
/// energies can only be held as log-domain values. LogReal keeps the log of
/// the magnitude and the sign separately; sums go through log1p/exp so that
/// magnitudes of order exp(1e300) still combine correctly.
class LogReal {
 public:
  constexpr LogReal() = default;

  static LogReal from_log(double log_abs, int sign = 1) {
    LogReal x;
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) {
      return x;
    }
    x.log_abs_ = log_abs;
    x.sign_ = sign > 0 ? 1 : -1;
    return x;
  }

  static LogReal from_double(double v) {
    LogReal x;
    if (v == 0.0) return x;
    x.sign_ = v > 0.0 ? 1 : -1;
    x.log_abs_ = std::log(std::fabs(v));
    return x;
  }

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }
  double log_abs() const { return log_abs_; }

  /// Natural log of the value; only meaningful for positive values.
  double log() const { return sign_ > 0 ? log_abs_ : std::numeric_limits<double>::quiet_NaN(); }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_abs_);
  }
  bool representable() const {
    return sign_ == 0 || std::fabs(log_abs_) < 708.0;
  }

  LogReal operator-() const {
    LogReal x = *this;
    x.sign_ = -x.sign_;
    return x;
  }
  LogReal abs() const {
    LogReal x = *this;
    if (x.sign_ != 0) x.sign_ = 1;
    return x;
  }

  /// |x|^e for real e; requires a nonnegative base.
  LogReal pow(double e) const {
    if (sign_ == 0) return LogReal{};
    return from_log(log_abs_ * e, 1);
  }

  friend LogReal operator*(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return LogReal{};
    return from_log(a.log_abs_ + b.log_abs_, a.sign_ * b.sign_);
  }
  friend LogReal operator/(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0) return LogReal{};
    return from_log(a.log_abs_ - b.log_abs_, a.sign_ * b.sign_);
  }

  friend LogReal operator+(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const LogReal& big = a.log_abs_ >= b.log_abs_ ? a : b;
    const LogReal& small = a.log_abs_ >= b.log_abs_ ? b : a;
    const double d = small.log_abs_ - big.log_abs_;  // <= 0
    if (a.sign_ == b.sign_) {
      return from_log(big.log_abs_ + std::log1p(std::exp(d)), a.sign_);
    }
    if (d == 0.0) return LogReal{};  // exact cancellation
    return from_log(big.log_abs_ + std::log1p(-std::exp(d)), big.sign_);
  }
  friend LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }

  LogReal& operator+=(const LogReal& b) { return *this = *this + b; }
  LogReal& operator-=(const LogReal& b) { return *this = *this - b; }
  LogReal& operator*=(const LogReal& b) { return *this = *this * b; }
  LogReal& operator/=(const LogReal& b) { return *this = *this / b; }

  friend bool operator==(const LogReal& a, const LogReal& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_abs_ == b.log_abs_);
  }
  friend bool operator<(const LogReal& a, const LogReal& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    if (a.sign_ > 0) return a.log_abs_ < b.log_abs_;
    return a.log_abs_ > b.log_abs_;
  }
  friend bool operator>(const LogReal& a, const LogReal& b) { return b < a; }
  friend bool operator<=(const LogReal& a, const LogReal& b) { return !(b < a); }
  friend bool operator>=(const LogReal& a, const LogReal& b) { return !(a < b); }
  friend bool operator!=(const LogReal& a, const LogReal& b) { return !(a == b); }

  std::string str() const {
    if (sign_ == 0) return "0";
    const double l10 = log_abs_ / 2.302585092994045684;
    return (sign_ < 0 ? std::string("-10^") : std::string("10^")) + std::to_string(l10);
  }

 private:
  double log_abs_ = -std::numeric_limits<double>::infinity();
  std::int8_t sign_ = 0;
};

inline LogReal log_real(double v) { return LogReal::from_double(v); }

/// Stable log(sum(exp(terms))) over plain log values; -inf terms are skipped.
inline double log_sum_exp(std::span<const double> log_terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : log_terms) m = std::max(m, t);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double t : log_terms) s += std::exp(t - m);
  return m + std::log(s);
}

}  // namespace dampedwave
