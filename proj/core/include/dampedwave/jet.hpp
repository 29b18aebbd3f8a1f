#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace dampedwave {

/// Truncated Taylor series (value plus derivatives up to order N) used to
/// evaluate analytic derivatives of composed functions, mainly the smooth
/// junction pieces of the pathological coefficient.
template <int N>
struct Jet {
  std::array<double, N + 1> a{};  // a[k] = f^(k)(x0) / k!

  static Jet constant(double c) {
    Jet j;
    j.a[0] = c;
    return j;
  }
  static Jet variable(double x) {
    Jet j;
    j.a[0] = x;
    if constexpr (N >= 1) j.a[1] = 1.0;
    return j;
  }

  double value() const { return a[0]; }
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return a[static_cast<std::size_t>(k)] * f;
  }

  friend Jet operator+(const Jet& x, const Jet& y) {
    Jet r;
    for (int k = 0; k <= N; ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
  }
  friend Jet operator-(const Jet& x, const Jet& y) {
    Jet r;
    for (int k = 0; k <= N; ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
  }
  friend Jet operator-(const Jet& x) {
    Jet r;
    for (int k = 0; k <= N; ++k) r.a[k] = -x.a[k];
    return r;
  }
  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += x.a[j] * y.a[k - j];
      r.a[k] = s;
    }
    return r;
  }
  friend Jet operator*(double c, const Jet& x) {
    Jet r;
    for (int k = 0; k <= N; ++k) r.a[k] = c * x.a[k];
    return r;
  }
  friend Jet operator*(const Jet& x, double c) { return c * x; }
  friend Jet operator+(const Jet& x, double c) {
    Jet r = x;
    r.a[0] += c;
    return r;
  }
  friend Jet operator+(double c, const Jet& x) { return x + c; }
  friend Jet operator-(const Jet& x, double c) { return x + (-c); }
  friend Jet operator-(double c, const Jet& x) { return (-x) + c; }

  friend Jet operator/(const Jet& x, const Jet& y) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double s = x.a[k];
      for (int j = 0; j < k; ++j) s -= r.a[j] * y.a[k - j];
      r.a[k] = s / y.a[0];
    }
    return r;
  }
};

template <int N>
Jet<N> exp(const Jet<N>& u) {
  Jet<N> v;
  v.a[0] = std::exp(u.a[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * u.a[j] * v.a[k - j];
    v.a[k] = s / k;
  }
  return v;
}

template <int N>
void sin_cos(const Jet<N>& u, Jet<N>& s, Jet<N>& c) {
  s.a[0] = std::sin(u.a[0]);
  c.a[0] = std::cos(u.a[0]);
  for (int k = 1; k <= N; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * u.a[j] * c.a[k - j];
      cc += j * u.a[j] * s.a[k - j];
    }
    s.a[k] = ss / k;
    c.a[k] = -cc / k;
  }
}

template <int N>
Jet<N> sin(const Jet<N>& u) {
  Jet<N> s, c;
  sin_cos(u, s, c);
  return s;
}

template <int N>
Jet<N> cos(const Jet<N>& u) {
  Jet<N> s, c;
  sin_cos(u, s, c);
  return c;
}

}  // namespace dampedwave
