#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sgflow {

// Tabulated values of the fourth-order heat kernel g (the function whose
// Fourier transform is exp(-|xi|^4)) and its first three derivatives on a
// uniform grid over [-z_max, z_max]. In two dimensions the kernel is
// radially symmetric and the table stores the radial profile g(|z|) with
// derivatives taken in the radial variable.
struct KernelTable {
  int dim = 1;
  double z_max = 0.0;
  double dz = 0.0;
  double quad_tol = 0.0;
  // samples[m][i] = m-th derivative at z_i = -z_max + i*dz.
  std::array<std::vector<double>, 4> samples;

  int size() const { return static_cast<int>(samples[0].size()); }
  double grid_z(int i) const { return -z_max + i * dz; }
};

// Scalar constants derived from the kernel table.
struct KernelConstants {
  double g0 = 0.0;                 // g(0)
  double l1_g = 0.0;               // ||g||_L1
  double linf_g = 0.0;             // ||g||_Linf (= g0)
  double l1_grad_g = 0.0;          // ||grad g||_L1
  double w31_g = 0.0;              // ||g||_{W^{3,1}}
  double beta_half_quarter = 0.0;  // B(1/2, 1/4)
  double c4 = 0.0;                 // B(1/2, 1/4) * ||g||_{W^{3,1}}
};

// Builds the table by quadrature of the Fourier representation; derivatives
// come from the transforms of (i xi)^m ghat, never from differencing.
// Throws std::runtime_error naming the offending grid point when the
// adaptive quadrature cannot reach quad_tol, std::invalid_argument on bad
// parameters.
KernelTable build_kernel(int dim, double z_max, double dz, double quad_tol);

// Defaults sized so that |g| and its stored derivatives fall below 1e-12 at
// the truncation boundary.
KernelTable build_default_kernel(int dim = 1);

KernelConstants kernel_constants(const KernelTable& table);

// Cubic interpolation of the m-th derivative; zero outside the truncation
// radius. deriv_order > 3 throws std::invalid_argument.
double eval_kernel(const KernelTable& table, double z, int deriv_order = 0);

// Integral of g over R^dim computed from the table (equals 1 up to
// quadrature tolerance). In d=2 the radial integral carries Euler-Maclaurin
// endpoint corrections so the check is meaningful at table accuracy.
double kernel_mass(const KernelTable& table);

// L1 norm of the m-th derivative over R^dim, by trapezoid on |samples|.
double kernel_l1_norm(const KernelTable& table, int deriv_order);

// Tail mass int_{|z| >= s} |g^{(m)}| over R^dim (d=1 tables only).
double kernel_l1_tail(const KernelTable& table, int deriv_order, double s);

// Throws std::runtime_error describing the first violated table invariant.
void validate_kernel(const KernelTable& table);

// Binary cache. Layout (all little-endian):
//   bytes 0..3   magic "SGKT"
//   u32          format version (1)
//   u32          dim
//   u32          sample count per derivative order N
//   f64          z_max, dz, quad_tol
//   f64 * 4N     samples for orders 0..3, each N doubles
void save_kernel(const KernelTable& table, const std::string& path);
KernelTable load_kernel(const std::string& path);  // validates invariants

}  // namespace sgflow
