#include "sgflow/gallery.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sgflow/rng.hpp"

namespace sgflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string GallerySpec::name() const {
  switch (kind) {
    case Kind::Indicator: return "indicator";
    case Kind::Power: return "power_" + std::to_string(alpha);
    case Kind::Log: return "log";
    case Kind::Step: return "step_" + std::to_string(amplitude);
    case Kind::Sine: return "sine";
    case Kind::Linear: return "linear";
    case Kind::Hhalf: return "hhalf";
    case Kind::BoundedUc: return "bounded_uc";
  }
  return "unknown";
}

GallerySpec GallerySpec::indicator() {
  GallerySpec s;
  s.kind = Kind::Indicator;
  return s;
}

GallerySpec GallerySpec::power(double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("power data needs alpha > 0");
  GallerySpec s;
  s.kind = Kind::Power;
  s.alpha = alpha;
  return s;
}

GallerySpec GallerySpec::log() {
  GallerySpec s;
  s.kind = Kind::Log;
  return s;
}

GallerySpec GallerySpec::step(double a) {
  GallerySpec s;
  s.kind = Kind::Step;
  s.amplitude = a;
  return s;
}

GallerySpec GallerySpec::sine(double amplitude, int wave) {
  GallerySpec s;
  s.kind = Kind::Sine;
  s.amplitude = amplitude;
  s.wave = wave;
  return s;
}

GallerySpec GallerySpec::linear(double slope) {
  GallerySpec s;
  s.kind = Kind::Linear;
  s.amplitude = slope;
  return s;
}

GallerySpec GallerySpec::hhalf(std::uint64_t seed, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("hhalf data needs eps > 0");
  GallerySpec s;
  s.kind = Kind::Hhalf;
  s.seed = seed;
  s.eps = eps;
  return s;
}

GallerySpec GallerySpec::bounded_uc(double amplitude, int wave, double beta) {
  if (!(beta > 0) || beta > 1)
    throw std::invalid_argument("bounded_uc data needs beta in (0, 1]");
  GallerySpec s;
  s.kind = Kind::BoundedUc;
  s.amplitude = amplitude;
  s.wave = wave;
  s.beta = beta;
  return s;
}

TorusField make_torus(const GallerySpec& spec) {
  switch (spec.kind) {
    case GallerySpec::Kind::Sine: {
      TorusField f(1, spec.n, spec.L);
      const std::complex<double> half(0.0, -0.5 * spec.amplitude);
      f.coeffs()[spec.wave] = half;
      f.coeffs()[spec.n - spec.wave] = std::conj(half);
      return f;
    }
    case GallerySpec::Kind::Hhalf: {
      TorusField f(1, spec.n, spec.L);
      // c_k = zeta_k |kappa|^{-1 - eps} with unit complex Gaussians zeta;
      // the decay margin keeps the homogeneous H^{1/2} sum finite.
      for (int k = 1; k <= spec.n / 3; ++k) {
        const auto [n1, n2] = gaussian_pair(spec.seed, 0, k, 0);
        const std::complex<double> zeta(n1 / std::sqrt(2.0), n2 / std::sqrt(2.0));
        const double kap = 2.0 * kPi * k / spec.L;
        const std::complex<double> c = zeta * std::pow(kap, -1.0 - spec.eps);
        f.coeffs()[k] = c;
        f.coeffs()[spec.n - k] = std::conj(c);
      }
      return f;
    }
    case GallerySpec::Kind::BoundedUc: {
      std::vector<double> values(spec.n);
      for (int i = 0; i < spec.n; ++i) {
        const double x = spec.L * i / spec.n;
        values[i] = spec.amplitude *
                    std::pow(std::abs(std::sin(2.0 * kPi * spec.wave * x / spec.L)),
                             spec.beta);
      }
      return TorusField::from_physical(1, spec.n, spec.L, values);
    }
    default:
      throw std::invalid_argument("gallery item '" + spec.name() +
                                  "' is not a torus field");
  }
}

LineField make_line(const GallerySpec& spec) {
  const double W = spec.window;
  const int m = spec.m;
  switch (spec.kind) {
    case GallerySpec::Kind::Indicator: {
      LineField f(W, m, EdgeExtension::constant(0.0, 0.0));
      for (int i = 0; i < m; ++i)
        f.samples()[i] = std::abs(f.grid_x(i)) <= 1.0 ? 1.0 : 0.0;
      f.discontinuities() = {-1.0, 1.0};
      f.validate();
      return f;
    }
    case GallerySpec::Kind::Power: {
      LineField f(W, m, EdgeExtension::power(1.0, spec.alpha));
      for (int i = 0; i < m; ++i)
        f.samples()[i] = std::pow(std::abs(f.grid_x(i)), spec.alpha);
      f.validate();
      return f;
    }
    case GallerySpec::Kind::Log: {
      if (m % 2 == 0)
        throw std::invalid_argument("log data needs an odd sample count");
      LineField f(W, m, EdgeExtension::logarithmic());
      for (int i = 0; i < m; ++i) {
        const double x = f.grid_x(i);
        if (i == (m - 1) / 2) {
          // Central cell carries the exact cell average of log|x|.
          f.samples()[i] = std::log(0.5 * f.dx()) - 1.0;
        } else {
          f.samples()[i] = std::log(std::abs(x));
        }
      }
      f.validate();
      return f;
    }
    case GallerySpec::Kind::Step: {
      const double a = spec.amplitude;
      LineField f(W, m, EdgeExtension::constant(-0.5 * a, 0.5 * a));
      for (int i = 0; i < m; ++i) {
        const double x = f.grid_x(i);
        f.samples()[i] = x < 0 ? -0.5 * a : (x > 0 ? 0.5 * a : 0.0);
      }
      f.discontinuities() = {0.0};
      f.validate();
      return f;
    }
    case GallerySpec::Kind::Linear: {
      LineField f(W, m, EdgeExtension::linear(spec.amplitude));
      for (int i = 0; i < m; ++i) f.samples()[i] = spec.amplitude * f.grid_x(i);
      f.validate();
      return f;
    }
    default:
      throw std::invalid_argument("gallery item '" + spec.name() +
                                  "' is not a line field");
  }
}

GalleryField make(const GallerySpec& spec) {
  if (spec.on_torus()) return make_torus(spec);
  return make_line(spec);
}

ModulusSpec modulus_of(const GallerySpec& spec) {
  if (spec.kind != GallerySpec::Kind::BoundedUc)
    throw std::invalid_argument("modulus data only exists for bounded_uc items");
  // | |sin u|^b - |sin v|^b | <= |u - v|^b and the phase is Lipschitz.
  ModulusSpec mod;
  mod.holder_beta = spec.beta;
  mod.holder_c =
      spec.amplitude * std::pow(2.0 * kPi * spec.wave / spec.L, spec.beta);
  return mod;
}

std::string membership_name(Membership m) {
  switch (m) {
    case Membership::InZ: return "IN_Z";
    case Membership::NotInZ: return "NOT_IN_Z";
    case Membership::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

MembershipReport membership_report(const GallerySpec& spec,
                                   const std::vector<double>& R_list,
                                   const KernelTable& table,
                                   const SupScanOptions& opts) {
  if (R_list.size() < 2)
    throw std::invalid_argument("membership scan needs at least two radii");
  for (size_t i = 1; i < R_list.size(); ++i)
    if (R_list[i] >= R_list[i - 1])
      throw std::invalid_argument("membership R list must decrease");

  MembershipReport rep;
  rep.spec = spec;
  if (spec.on_torus()) {
    rep.profile = z_profile(make_torus(spec), R_list, opts);
  } else {
    rep.profile = z_profile(make_line(spec), table, R_list, opts);
  }
  rep.largest_r_value = rep.profile.front().second;
  rep.small_r_limit = rep.profile.back().second;

  double min_value = rep.profile.front().second;
  for (const auto& [R, v] : rep.profile) min_value = std::min(min_value, v);

  if (rep.small_r_limit < 0.1 * rep.largest_r_value) {
    rep.classification = Membership::InZ;
  } else if (min_value >= 0.5 * rep.small_r_limit) {
    rep.classification = Membership::NotInZ;
  } else {
    rep.classification = Membership::Undecided;
  }
  return rep;
}

double indicator_semigroup_dx(const KernelTable& table, double t, double x) {
  if (!(t > 0)) throw std::domain_error("indicator closed form needs t > 0");
  const double tau = std::pow(t, 0.25);
  return (eval_kernel(table, (x + 1.0) / tau, 0) -
          eval_kernel(table, (x - 1.0) / tau, 0)) /
         tau;
}

double hdot_half_norm(const TorusField& f) {
  double acc = 0.0;
  for (size_t q = 0; q < f.mode_count(); ++q) {
    const double k2 = f.kappa_sq(q);
    const double w = f.dim() == 1 ? std::sqrt(k2) : k2;
    acc += w * std::norm(f.coeffs()[q]);
  }
  return std::sqrt(acc);
}

std::vector<GallerySpec> standard_gallery() {
  return {GallerySpec::indicator(),      GallerySpec::power(0.25),
          GallerySpec::power(0.5),       GallerySpec::power(1.0),
          GallerySpec::log(),            GallerySpec::step(0.1),
          GallerySpec::sine(1.0, 1),     GallerySpec::linear(0.05),
          GallerySpec::hhalf(7, 0.25),   GallerySpec::bounded_uc(1.0, 1, 0.5)};
}

std::vector<double> standard_r_list() {
  std::vector<double> out;
  for (int j = 0; j <= 14; ++j) out.push_back(std::pow(2.0, -j));
  return out;
}

double measure_c1(const KernelTable& table, const SupScanOptions& opts) {
  double lo = std::numeric_limits<double>::infinity();
  for (const GallerySpec& item : standard_gallery()) {
    double b, b0;
    if (item.on_torus()) {
      const TorusField f = make_torus(item);
      b = b_norm(f, 1.0, BNormFlavor::X, opts).value;
      b0 = b_norm(f, 1.0, BNormFlavor::X0, opts).value;
    } else {
      GallerySpec coarse = item;
      coarse.m = 1025;
      const LineField f = make_line(coarse);
      b = b_norm(f, table, 1.0, BNormFlavor::X, opts).value;
      b0 = b_norm(f, table, 1.0, BNormFlavor::X0, opts).value;
    }
    if (b > 0) lo = std::min(lo, b0 / b);
  }
  return lo;
}

}  // namespace sgflow
