#include "sgflow/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sgflow {

namespace {

// 15-point Kronrod nodes on [-1, 1] and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
constexpr std::array<double, 15> kKronrodNodes = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};

constexpr std::array<double, 15> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

constexpr std::array<double, 7> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelEstimate {
  double integral;
  double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(mid + half * kKronrodNodes[i]);
    kronrod += kKronrodWeights[i] * v;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * v;
  }
  kronrod *= half;
  gauss *= half;
  // Plain |K15 - G7| as the error estimate: conservative, so accepted
  // integrals sit well inside the requested tolerance.
  const double diff = std::abs(kronrod - gauss);
  return {kronrod, std::max(diff, std::abs(kronrod) * 1e-16)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_subdivisions, bool& converged) {
  struct Interval {
    double a, b, integral, error;
  };
  std::vector<Interval> stack;
  PanelEstimate first = gk15(f, a, b);
  stack.push_back({a, b, first.integral, first.error});
  int splits = 0;
  converged = true;
  while (splits < max_subdivisions) {
    auto worst = std::max_element(stack.begin(), stack.end(),
                                  [](const Interval& x, const Interval& y) {
                                    return x.error < y.error;
                                  });
    double total_err = 0.0;
    for (const auto& iv : stack) total_err += iv.error;
    if (total_err <= abs_tol) break;
    Interval iv = *worst;
    stack.erase(worst);
    const double mid = 0.5 * (iv.a + iv.b);
    PanelEstimate left = gk15(f, iv.a, mid);
    PanelEstimate right = gk15(f, mid, iv.b);
    stack.push_back({iv.a, mid, left.integral, left.error});
    stack.push_back({mid, iv.b, right.integral, right.error});
    ++splits;
  }
  if (splits >= max_subdivisions) {
    double total_err = 0.0;
    for (const auto& iv : stack) total_err += iv.error;
    if (total_err > abs_tol) converged = false;
  }
  double total = 0.0;
  for (const auto& iv : stack) total += iv.integral;
  return total;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_subdivisions) {
  bool ok = true;
  double v = integrate_adaptive(f, a, b, abs_tol, max_subdivisions, ok);
  if (!ok) throw std::runtime_error("adaptive quadrature did not reach tolerance");
  return v;
}

void kronrod15_panels(double a, double b, int panels,
                      std::vector<double>& nodes, std::vector<double>& weights) {
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 15; ++i) {
      nodes.push_back(mid + 0.5 * h * kKronrodNodes[i]);
      weights.push_back(0.5 * h * kKronrodWeights[i]);
    }
  }
}

void gauss4_panels(double a, double b, int panels,
                   std::vector<double>& nodes, std::vector<double>& weights) {
  static constexpr std::array<double, 4> xi = {
      -0.861136311594053, -0.339981043584856, 0.339981043584856,
      0.861136311594053};
  static constexpr std::array<double, 4> wi = {
      0.347854845137454, 0.652145154862546, 0.652145154862546,
      0.347854845137454};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 4; ++i) {
      nodes.push_back(mid + 0.5 * h * xi[i]);
      weights.push_back(0.5 * h * wi[i]);
    }
  }
}

double trapezoid_uniform(std::span<const double> values, double dx) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * dx;
}

double trapezoid(std::span<const double> t, std::span<const double> values) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < t.size(); ++i)
    s += 0.5 * (values[i] + values[i + 1]) * (t[i + 1] - t[i]);
  return s;
}

}  // namespace sgflow
