#pragma once

#include <array>
#include <cmath>

namespace sgflow {

// Value plus derivatives up to order N of a scalar function of one
// variable; arithmetic propagates derivatives exactly (truncated Taylor
// arithmetic), which keeps test-function derivatives at machine precision.
template <int N>
struct Jet {
  std::array<double, N + 1> d{};  // d[k] = k-th derivative

  static Jet variable(double x) {
    Jet j;
    j.d[0] = x;
    if constexpr (N >= 1) j.d[1] = 1.0;
    return j;
  }
  static Jet constant(double c) {
    Jet j;
    j.d[0] = c;
    return j;
  }
};

namespace jet_detail {
constexpr double binom(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}
}  // namespace jet_detail

template <int N>
Jet<N> operator+(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k <= N; ++k) r.d[k] = a.d[k] + b.d[k];
  return r;
}

template <int N>
Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k <= N; ++k) r.d[k] = a.d[k] - b.d[k];
  return r;
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k <= N; ++k)
    for (int j = 0; j <= k; ++j)
      r.d[k] += jet_detail::binom(k, j) * a.d[j] * b.d[k - j];
  return r;
}

template <int N>
Jet<N> reciprocal(const Jet<N>& a) {
  Jet<N> r;
  r.d[0] = 1.0 / a.d[0];
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j)
      s += jet_detail::binom(k, j) * a.d[j] * r.d[k - j];
    r.d[k] = -r.d[0] * s;
  }
  return r;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> r;
  r.d[0] = std::exp(a.d[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j)
      s += jet_detail::binom(k - 1, j - 1) * a.d[j] * r.d[k - j];
    r.d[k] = s;
  }
  return r;
}

// The standard compactly supported bump exp(1 - 1/(1 - s^2)) on |s| < 1,
// normalized to 1 at the origin, with derivatives.
template <int N>
Jet<N> bump(double s) {
  Jet<N> zero;
  if (std::abs(s) >= 1.0 - 1e-14) return zero;
  Jet<N> x = Jet<N>::variable(s);
  Jet<N> one = Jet<N>::constant(1.0);
  Jet<N> u = one - x * x;
  return exp(one - reciprocal(u));
}

}  // namespace sgflow
