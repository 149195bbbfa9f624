#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sgflow {

// Adaptive Gauss-Kronrod (G7/K15) on [a, b] to an absolute tolerance.
// Throws std::runtime_error when the interval stack is exhausted before
// the error estimate drops below abs_tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_subdivisions = 4000);

// Non-throwing variant; sets `converged` instead.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_subdivisions, bool& converged);

// Nodes and weights of a composite 4-point Gauss-Legendre rule on [a, b]
// split into `panels` equal panels. Appends to the output vectors.
void gauss4_panels(double a, double b, int panels,
                   std::vector<double>& nodes, std::vector<double>& weights);

// Composite 15-point Kronrod rule on [a, b] (fixed, non-adaptive). Appends.
void kronrod15_panels(double a, double b, int panels,
                      std::vector<double>& nodes, std::vector<double>& weights);

// Trapezoid sum over uniformly spaced samples.
double trapezoid_uniform(std::span<const double> values, double dx);

// Trapezoid sum over an arbitrary increasing grid.
double trapezoid(std::span<const double> t, std::span<const double> values);

}  // namespace sgflow
