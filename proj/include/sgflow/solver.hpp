#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sgflow/kernel.hpp"
#include "sgflow/norms.hpp"
#include "sgflow/trajectory.hpp"

namespace sgflow {

// Thrown when the fixed-point iteration fails to contract; carries the
// iteration history so callers can report it.
class PicardDivergence : public std::runtime_error {
 public:
  PicardDivergence(const std::string& what, std::vector<double> deltas)
      : std::runtime_error(what), deltas_(std::move(deltas)) {}
  const std::vector<double>& deltas() const { return deltas_; }

 private:
  std::vector<double> deltas_;
};

// The bilinear Duhamel map
//   V(h,k)(t) = int_0^t Delta( e^{-(t-s)A} grad h(s).grad k(s) ) ds
// evaluated per Fourier mode with composite 4-point Gauss-Legendre in s on
// the trajectories' shared grid, the quadratic form linearly interpolated
// between stored times. t beyond the stored horizon throws.
TorusField duhamel_bilinear(const Trajectory& h, const Trajectory& k, double t);

struct PicardOptions {
  int time_levels = 64;  // graded-grid size J
  int max_iter = 25;
  double tol = 1e-10;
  // Optional additive forcing sampled on the same graded grid (an
  // Ornstein-Uhlenbeck path); empty means the deterministic equation.
  std::vector<TorusField> forcing;
};

// Fixed-point iteration H_{n+1} = e^{-tA} h0 - V(H_n, H_n) (+ Z) on the
// graded grid over (0, R^4]. Convergence is declared when consecutive
// iterates differ by less than tol in the X_R scan norm; non-convergence
// throws PicardDivergence with the delta history.
Trajectory picard_solve(const TorusField& h0, double R,
                        const PicardOptions& opts = {});

enum class Scheme { Etdrk2, ImexAb2 };
std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct ReferenceOptions {
  Scheme scheme = Scheme::Etdrk2;
  bool nonlinearity_on = true;
  bool measure_step_halving = true;
  // Times at which states are stored (snapped to step boundaries); the
  // final time is always stored.
  std::vector<double> store_times;
};

// Time-stepped solution with the linear part applied exactly through the
// per-mode integrating factor; both schemes are second order in the
// nonlinearity. The step-halving self-error at T lands in the provenance
// and values above 1e-5 raise the accuracy warning flag.
Trajectory reference_solve(const TorusField& h0, double T, int steps,
                           const ReferenceOptions& opts = {});

struct SmallnessCertificate {
  double c1 = 0.0;
  double c4 = 0.0;
  double delta = 0.0;   // c1 / (8 c4)
  double K_low = 0.0;   // (1 - sqrt(1 - 4 c4 delta / c1)) / (2 c4)
  double K_high = 0.0;  // 1 / (2 c4), exclusive
  double b_norm_h0 = 0.0;
  bool satisfied = false;
};

SmallnessCertificate smallness_certificate(const TorusField& h0, double R,
                                           double c1, const KernelConstants& kc,
                                           const SupScanOptions& opts = {});
SmallnessCertificate smallness_certificate(const LineField& h0,
                                           const KernelTable& table, double R,
                                           double c1, const KernelConstants& kc,
                                           const SupScanOptions& opts = {});

// Separable smooth test function phi(t,x) = eta((t-t0)/wt) b((x-x0)/wx)
// built from the standard compactly supported bump; derivatives are exact.
struct TestFunctionSpec {
  double t_center = 0.0;
  double t_halfwidth = 0.0;
  double x_center = 0.0;
  double x_halfwidth = 0.0;
  double amplitude = 1.0;
};

// | int int ( h d_t phi - h Lap^2 phi - |grad h|^2 Lap phi ) dx dt
//   + int h0 phi(0,.) dx |
// by trapezoid over the trajectory grid; spatial integrals on the periodic
// grid. include_nonlinearity = false drops the |grad h|^2 term (residual of
// the linear equation's weak form).
double weak_residual(const Trajectory& traj, const TestFunctionSpec& phi,
                     bool include_nonlinearity = true);

struct SelfSimilarReport {
  std::vector<double> times;
  std::vector<double> z_grid;
  std::vector<std::vector<double>> profiles;  // h(t, z t^{1/4}) per time
  double collapse_rel_linf = 0.0;
  // Residual of the profile equation
  //   psi'''' + (psi'^2)'' - z psi'/4 = 0
  // on the last profile, by high-order finite differences; the nonlinear
  // term is dropped when nonlinear = false was passed.
  double profile_ode_residual = 0.0;
};

SelfSimilarReport self_similar_check(const Trajectory& traj,
                                     const std::vector<double>& times,
                                     bool nonlinear = true, double z_span = 6.0,
                                     int z_points = 193);

}  // namespace sgflow
