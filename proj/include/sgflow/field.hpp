#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "sgflow/kernel.hpp"

namespace sgflow {

// Real scalar field on a periodic box, stored as Fourier series
// coefficients c_k of h(x) = sum_k c_k exp(2 pi i k.x / L), |k_i| <= n/2.
// Fields are immutable values as far as the operations below are concerned:
// every operation returns a new field.
class TorusField {
 public:
  TorusField() = default;
  TorusField(int dim, int n, double box_length);
  static TorusField from_physical(int dim, int n, double box_length,
                                  std::span<const double> values);

  int dim() const { return dim_; }
  int modes_per_axis() const { return n_; }
  double box_length() const { return box_length_; }
  size_t mode_count() const { return coeffs_.size(); }

  std::vector<std::complex<double>>& coeffs() { return coeffs_; }
  const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

  // Integer wavenumber of a flat coefficient index along one axis
  // (axis 0 varies fastest), in [-n/2, n/2).
  int wavenumber(size_t flat, int axis) const;
  // Angular frequency 2 pi k / L.
  double kappa(int k) const;
  double kappa_sq(size_t flat) const;  // |kappa|^2 for the flat index

  std::vector<double> to_physical() const;
  double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }
  double max_abs() const;

  // Exact Fourier-series evaluation at an arbitrary point (d=1 only).
  double eval_series(double x) const;

  // Largest Hermitian-symmetry violation relative to the largest
  // coefficient; a real-valued field stays below ~1e-13.
  double hermitian_defect() const;
  void validate() const;  // throws when the defect exceeds tolerance

 private:
  int dim_ = 1;
  int n_ = 0;
  double box_length_ = 0.0;
  std::vector<std::complex<double>> coeffs_;
};

TorusField operator+(const TorusField& a, const TorusField& b);
TorusField operator-(const TorusField& a, const TorusField& b);
TorusField operator*(double s, const TorusField& a);

// e^{-tA} with A the bilaplacian: per-mode factor exp(-t |kappa|^4).
// Negative t throws std::domain_error; t = 0 is the identity.
TorusField semigroup_apply(const TorusField& f, double t);

// Exact spectral differentiation.
std::vector<TorusField> gradient(const TorusField& f);
TorusField laplacian(const TorusField& f);
TorusField derivative(const TorusField& f, int order_x, int order_y = 0);

// Zeroes every mode with any |k_i| > n/3 (2/3 rule).
TorusField dealias(const TorusField& f);

// Dealiased pointwise product grad(h) . grad(k), the quadratic form inside
// the nonlinearity (dealiased both before and after the product).
TorusField gradient_dot(const TorusField& h, const TorusField& k);

// The full nonlinear term Delta |grad h|^2.
TorusField nonlinearity(const TorusField& f);

double max_abs_diff(const TorusField& a, const TorusField& b,
                    bool ignore_mean = false);
// sup over the grid of the Euclidean gradient magnitude.
double max_abs_gradient(const TorusField& f);

// Periodic cubic interpolation of uniformly sampled values on [0, L).
double periodic_interp(std::span<const double> values, double box_length,
                       double x);

// Behaviour of a line-window field outside [-W, W]. For the PowerEven,
// Linear and Logarithmic kinds the closed form is taken as the definition
// of the field everywhere, so convolutions see the exact tails.
struct EdgeExtension {
  enum class Kind { Constant, PowerEven, Linear, Logarithmic };
  Kind kind = Kind::Constant;
  double left_value = 0.0;
  double right_value = 0.0;
  double coeff = 1.0;  // PowerEven: coeff*|x|^alpha, Linear: coeff*x
  double alpha = 1.0;

  static EdgeExtension constant(double left, double right) {
    return {Kind::Constant, left, right, 0.0, 0.0};
  }
  static EdgeExtension power(double coeff, double alpha) {
    return {Kind::PowerEven, 0.0, 0.0, coeff, alpha};
  }
  static EdgeExtension linear(double coeff) {
    return {Kind::Linear, 0.0, 0.0, coeff, 1.0};
  }
  static EdgeExtension logarithmic() {
    return {Kind::Logarithmic, 0.0, 0.0, 1.0, 0.0};
  }
};

// Scalar field on a symmetric window [-W, W], sampled on a uniform
// inclusive grid of m points, plus a declared edge extension and an
// optional list of discontinuity positions (sampling never interpolates
// across a declared discontinuity).
class LineField {
 public:
  LineField() = default;
  LineField(double half_width, int sample_count, EdgeExtension ext);

  double half_width() const { return half_width_; }
  int sample_count() const { return m_; }
  double dx() const { return 2.0 * half_width_ / (m_ - 1); }
  double grid_x(int i) const { return -half_width_ + i * dx(); }

  std::vector<double>& samples() { return samples_; }
  const std::vector<double>& samples() const { return samples_; }
  const EdgeExtension& extension() const { return ext_; }

  std::vector<double>& discontinuities() { return discontinuities_; }
  const std::vector<double>& discontinuities() const { return discontinuities_; }

  // Field value anywhere on the line.
  double sample(double y) const;
  double max_abs() const;

  // Positions where the integrand of a convolution against this field is
  // non-smooth, with a flag for panels that need graded refinement
  // (fractional-power kinks, logarithmic singularities).
  std::vector<std::pair<double, bool>> quadrature_breakpoints() const;

  void validate() const;  // finiteness + edge consistency within 1e-8

 private:
  double half_width_ = 0.0;
  int m_ = 0;
  EdgeExtension ext_;
  std::vector<double> samples_;
  std::vector<double> discontinuities_;
};

// D^m e^{-tA} f evaluated at the given points by quadrature against the
// kernel table; t > 0 required. Throws std::runtime_error when the kernel's
// effective support t^{1/4} z_max exceeds ten window widths.
std::vector<double> line_semigroup_at(const LineField& f, const KernelTable& table,
                                      double t, int deriv_order,
                                      std::span<const double> xs);

// Same, on the field's own grid.
LineField line_semigroup(const LineField& f, const KernelTable& table, double t,
                         int deriv_order);

// Fourth-order centered finite-difference derivative of the samples.
LineField fd_gradient(const LineField& f);

}  // namespace sgflow
