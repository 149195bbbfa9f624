#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sgflow/norms.hpp"
#include "sgflow/solver.hpp"
#include "sgflow/trajectory.hpp"

namespace sgflow {

// Spectral description of the driving Wiener process: per-mode amplitudes
// sigma_k (Hermitian-even, zero at the mean mode and beyond the cutoff)
// plus the RNG keying. stream_id indexes independent realizations.
struct NoiseSpec {
  int dim = 1;
  int n = 64;
  double L = 2.0 * 3.14159265358979323846;
  std::vector<double> sigma;  // flat FFT layout, one amplitude per mode
  int cutoff = 8;
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;

  // sigma_k = |k|^{-gamma} for 0 < |k| <= cutoff, zero elsewhere.
  static NoiseSpec isotropic(int dim, int n, double L, double gamma, int cutoff,
                             std::uint64_t seed, std::uint64_t stream_id = 0);
  NoiseSpec with_stream(std::uint64_t s) const;
  void validate() const;
};

// The stochastic convolution Z(t) = int_0^t e^{-(t-s)A} dW sampled on an
// increasing grid of positive times via the exact-in-law per-mode update
//   Z_k(t+D) = e^{-D kap^4} Z_k(t) + sigma_k xi sqrt((1-e^{-2 D kap^4})/(2 kap^4)),
// xi independent standard complex Gaussians, Hermitian-paired. Paths are a
// deterministic function of (seed, stream_id, grid).
Trajectory ou_convolution(const NoiseSpec& spec, const std::vector<double>& t_grid);

enum class SpdeMode { MildDirect, RandomPde };

struct SpdeOptions {
  int time_levels = 64;
  int max_iter = 25;
  double tol = 1e-10;
};

// Forced equation d_t h + Lap^2 h + Lap|grad h|^2 = d_t W on the graded grid
// over (0, R^4]. MildDirect runs the fixed-point iteration on
// h = e^{-tA} h0 - V(h,h) + Z with the path frozen; RandomPde time-steps
// v = h - Z whose sources are the expansion of Lap|grad(v+Z)|^2, i.e.
// -Lap|grad v|^2 - 2 Lap(grad v . grad Z) - Lap|grad Z|^2, and returns
// h = v + Z. Both modes draw the identical path for a given spec.
Trajectory spde_solve(const TorusField& h0, const NoiseSpec& spec, double R,
                      SpdeMode mode, const SpdeOptions& opts = {});

// (R, ||Z||_{X_R}) for one path over a decreasing R list; the path is built
// once on a geometric grid covering the smallest horizon, so the profile is
// monotone by construction (sup over nested grids).
std::vector<std::pair<double, double>> z_regularity_profile(
    const NoiseSpec& spec, const std::vector<double>& R_list,
    const SupScanOptions& opts = {});

}  // namespace sgflow
