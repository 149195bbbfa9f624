#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sgflow/kernel.hpp"
#include "sgflow/norms.hpp"

namespace sgflow {

// Holder-type modulus of continuity |k(x)-k(y)| <= C |x-y|^beta.
struct ModulusSpec {
  double holder_c = 1.0;
  double holder_beta = 1.0;
};

// Construction recipes for the example initial data. Line-window kinds are
// Indicator, Power, Log, Step and Linear; the rest live on the torus.
struct GallerySpec {
  enum class Kind { Indicator, Power, Log, Step, Sine, Linear, Hhalf, BoundedUc };
  Kind kind = Kind::Indicator;

  double alpha = 0.5;       // Power exponent
  double amplitude = 1.0;   // Step height a / Sine and BoundedUc amplitude /
                            // Linear slope
  int wave = 1;             // Sine and BoundedUc wavenumber
  std::uint64_t seed = 1;   // Hhalf
  double eps = 0.25;        // Hhalf spectral decay margin
  double beta = 0.5;        // BoundedUc Holder exponent

  // Domain targets.
  int n = 512;
  double L = 2.0 * 3.14159265358979323846;
  double window = 40.0;
  int m = 2049;

  bool on_torus() const {
    return kind == Kind::Sine || kind == Kind::Hhalf || kind == Kind::BoundedUc;
  }
  std::string name() const;

  static GallerySpec indicator();
  static GallerySpec power(double alpha);
  static GallerySpec log();
  static GallerySpec step(double a);
  static GallerySpec sine(double amplitude, int wave);
  static GallerySpec linear(double slope);
  static GallerySpec hhalf(std::uint64_t seed, double eps);
  static GallerySpec bounded_uc(double amplitude, int wave, double beta);
};

using GalleryField = std::variant<TorusField, LineField>;

GalleryField make(const GallerySpec& spec);
TorusField make_torus(const GallerySpec& spec);
LineField make_line(const GallerySpec& spec);

// Holder data of the BoundedUc item (for the modulus-based bound).
ModulusSpec modulus_of(const GallerySpec& spec);

enum class Membership { InZ, NotInZ, Undecided };
std::string membership_name(Membership m);

struct MembershipReport {
  GallerySpec spec;
  std::vector<std::pair<double, double>> profile;  // (R, ||k||_{B_R})
  Membership classification = Membership::Undecided;
  double small_r_limit = 0.0;  // profile value at the smallest scanned R
  double largest_r_value = 0.0;
};

// z-profile over the R list (decreasing) plus the threshold classification:
// InZ when the profile at the smallest R falls below 10% of its value at
// the largest R, NotInZ when it stays above 50% of the small-R limit.
MembershipReport membership_report(const GallerySpec& spec,
                                   const std::vector<double>& R_list,
                                   const KernelTable& table,
                                   const SupScanOptions& opts = {});

// Closed form for the indicator data: d_x e^{-tA} 1_{[-1,1]} (x) equals the
// difference of two kernel evaluations; oracle for the quadrature path.
double indicator_semigroup_dx(const KernelTable& table, double t, double x);

// Homogeneous H^{d/2} seminorm from the series coefficients,
// ( sum_k |kappa_k|^d |c_k|^2 )^{1/2}.
double hdot_half_norm(const TorusField& f);

// The items exercised by the diagnostics and the verification suite.
std::vector<GallerySpec> standard_gallery();

// Empirical equivalence constant: the smallest ratio of the averaged to the
// sup-based bi-caloric norm over the standard gallery at R = 1. Feeds the
// smallness certificate when no configured value is supplied.
double measure_c1(const KernelTable& table, const SupScanOptions& opts = {});

// Membership scan radii, geometric from 1 down to 2^-14.
std::vector<double> standard_r_list();

}  // namespace sgflow
