#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sgflow/kernel.hpp"
#include "sgflow/trajectory.hpp"

namespace sgflow {

// Scan resolution for the sup estimators. All reported values are maxima
// over the recorded grids, hence lower bounds for the true suprema.
struct SupScanOptions {
  int time_levels = 40;
  double time_ratio = 2.0;
  int radius_levels = 8;
  double radius_ratio = 2.0;
  int x_stride = 1;
};

struct NormReport {
  std::string norm_name;
  double value = 0.0;
  double R = std::numeric_limits<double>::infinity();
  int m = 0;
  std::vector<double> t_grid;
  std::vector<double> r_grid;
  int x_points = 0;
  double argmax_t = 0.0;
  double argmax_x = 0.0;
  double argmax_r = 0.0;
};

// sup_{t <= R^4} t^{1/4} ||grad h(t)||_inf over the trajectory's stored
// times. Line trajectories use their precomputed gradients when present and
// finite differences otherwise.
NormReport x_norm(const Trajectory& traj, double R);

// Carleson-type average of |grad h|^2 over balls: the report's value is
// ( sup_{x, r <= R} r^{-(d+2)} int_0^{r^4} int_{B_r(x)} |grad h|^2 )^{1/2},
// the square root making the estimate 1-homogeneous like every other norm
// here.
NormReport x0_norm(const Trajectory& traj, double R,
                   const std::vector<double>& r_grid, int x_stride = 1);
NormReport x0_norm(const Trajectory& traj, double R,
                   const SupScanOptions& opts = {});

enum class BNormFlavor { X, X0 };

// Norm of the bi-caloric extension e^{-tA}k on a geometric time grid over
// (0, R^4]. R may be infinite for torus fields (the scan then runs to a
// multiple of the slowest mode's decay time); line fields need finite R.
NormReport b_norm(const TorusField& k, double R,
                  BNormFlavor flavor = BNormFlavor::X,
                  const SupScanOptions& opts = {});
NormReport b_norm(const LineField& k, const KernelTable& table, double R,
                  BNormFlavor flavor = BNormFlavor::X,
                  const SupScanOptions& opts = {});

// Carleson-measure estimator with the kernel g as test function:
// value = ( sup_{x,R} R^{-d} int_0^R int_{B_R(x)} |((grad g)_t * k)(y)|^2 / t )^{1/2}
// with the standard dilation g_t(x) = t^{-d} g(x/t).
NormReport bmo_carleson(const TorusField& k, const SupScanOptions& opts = {});

// sup_{t <= R^4} t^{(m+1)/4} sum_{|alpha|=m+1} ||D^alpha h(t)||_inf, m >= 1.
// Calling with m < 1 is misuse (that is x_norm's job) and throws.
NormReport higher_norm(const Trajectory& traj, int m, double R);

// ||k||_{B_R} for each R in a decreasing list.
std::vector<std::pair<double, double>> z_profile(
    const TorusField& k, const std::vector<double>& R_list,
    const SupScanOptions& opts = {});
std::vector<std::pair<double, double>> z_profile(
    const LineField& k, const KernelTable& table,
    const std::vector<double>& R_list, const SupScanOptions& opts = {});

}  // namespace sgflow
