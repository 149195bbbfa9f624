#include "sgflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "sgflow/fft.hpp"
#include "sgflow/jet.hpp"

namespace sgflow {

namespace {

double pow4(double r) {
  const double r2 = r * r;
  return r2 * r2;
}

using Spectrum = std::vector<std::complex<double>>;

// V at a single time from the quadratic-form spectra w_hat on {0} u times.
// Per mode q: -|kq|^2 int_0^t e^{-(t-s)|kq|^4} w_q(s) ds, with w linearly
// interpolated between stored nodes and 4-point Gauss-Legendre panels on
// each grid interval.
Spectrum duhamel_value(const std::vector<double>& times,
                       const std::vector<Spectrum>& w_hat,
                       const std::vector<double>& k2, double t) {
  static constexpr double xi[4] = {-0.861136311594053, -0.339981043584856,
                                   0.339981043584856, 0.861136311594053};
  static constexpr double wt[4] = {0.347854845137454, 0.652145154862546,
                                   0.652145154862546, 0.347854845137454};
  const size_t n = k2.size();
  Spectrum v(n, {0.0, 0.0});
  double a = 0.0;
  for (size_t i = 0; i < times.size() && a < t; ++i) {
    const double node_lo = a;
    const double node_hi = times[i];
    const double b = std::min(node_hi, t);
    const double width = node_hi - node_lo;
    const Spectrum& w_lo = w_hat[i];
    const Spectrum& w_hi = w_hat[i + 1];
    for (int gp = 0; gp < 4; ++gp) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * xi[gp];
      const double gw = 0.5 * (b - a) * wt[gp];
      const double beta = width > 0 ? (s - node_lo) / width : 0.0;
      const double alpha = 1.0 - beta;
      for (size_t q = 0; q < n; ++q) {
        const double damp = std::exp(-(t - s) * k2[q] * k2[q]);
        v[q] += gw * damp * (alpha * w_lo[q] + beta * w_hi[q]);
      }
    }
    a = node_hi;
  }
  for (size_t q = 0; q < n; ++q) v[q] *= -k2[q];
  return v;
}

std::vector<double> mode_k2(const TorusField& f) {
  std::vector<double> k2(f.mode_count());
  for (size_t q = 0; q < k2.size(); ++q) k2[q] = f.kappa_sq(q);
  return k2;
}

TorusField field_from_spectrum(const TorusField& proto, Spectrum coeffs) {
  TorusField f(proto.dim(), proto.modes_per_axis(), proto.box_length());
  f.coeffs() = std::move(coeffs);
  return f;
}

// X_R-style distance between two families on the same stored grid.
double x_distance(const std::vector<double>& times,
                  const std::vector<TorusField>& a,
                  const std::vector<TorusField>& b) {
  double best = 0.0;
  for (size_t j = 0; j < times.size(); ++j)
    best = std::max(best, std::pow(times[j], 0.25) *
                              max_abs_gradient(a[j] - b[j]));
  return best;
}

}  // namespace

TorusField duhamel_bilinear(const Trajectory& h, const Trajectory& k, double t) {
  h.validate();
  k.validate();
  if (!h.is_torus() || !k.is_torus())
    throw std::invalid_argument("duhamel_bilinear needs spectral trajectories");
  if (h.times != k.times)
    throw std::invalid_argument("duhamel_bilinear needs a shared time grid");
  if (t > h.horizon() * (1.0 + 1e-12))
    throw std::domain_error("duhamel_bilinear: t beyond the stored horizon");

  const TorusField& proto = h.torus_fields[0];
  std::vector<Spectrum> w_hat(h.size() + 1);
  if (h.initial_torus && k.initial_torus) {
    w_hat[0] = gradient_dot(*h.initial_torus, *k.initial_torus).coeffs();
  }
  for (size_t j = 0; j < h.size(); ++j)
    w_hat[j + 1] = gradient_dot(h.torus_fields[j], k.torus_fields[j]).coeffs();
  if (w_hat[0].empty()) w_hat[0] = w_hat[1];  // no initial data recorded

  return field_from_spectrum(
      proto, duhamel_value(h.times, w_hat, mode_k2(proto), t));
}

Trajectory picard_solve(const TorusField& h0, double R,
                        const PicardOptions& opts) {
  h0.validate();
  if (!(R > 0)) throw std::invalid_argument("picard_solve needs R > 0");
  const std::vector<double> times = graded_grid(pow4(R), opts.time_levels);
  const size_t J = times.size();
  if (!opts.forcing.empty() && opts.forcing.size() != J)
    throw std::invalid_argument("forcing must be sampled on the solver grid");

  const std::vector<double> k2 = mode_k2(h0);
  std::vector<TorusField> lin(J, h0);
  for (size_t j = 0; j < J; ++j) {
    lin[j] = semigroup_apply(h0, times[j]);
    if (!opts.forcing.empty()) lin[j] = lin[j] + opts.forcing[j];
  }

  std::vector<TorusField> iter(J, TorusField(h0.dim(), h0.modes_per_axis(),
                                             h0.box_length()));
  std::vector<double> deltas;
  bool converged = false;
  bool first_iterate = true;

  auto apply_map = [&](const std::vector<TorusField>& cur,
                       bool cur_is_zero) {
    std::vector<Spectrum> w_hat(J + 1);
    // The iterate's value at s=0: the zero start for H_0, h0 afterwards.
    w_hat[0] = cur_is_zero
                   ? Spectrum(h0.mode_count(), {0.0, 0.0})
                   : gradient_dot(h0, h0).coeffs();
    for (size_t j = 0; j < J; ++j)
      w_hat[j + 1] = gradient_dot(cur[j], cur[j]).coeffs();
    std::vector<TorusField> next(J, h0);
    for (size_t j = 0; j < J; ++j) {
      Spectrum v = duhamel_value(times, w_hat, k2, times[j]);
      for (size_t q = 0; q < v.size(); ++q)
        v[q] = lin[j].coeffs()[q] - v[q];
      next[j] = field_from_spectrum(h0, std::move(v));
    }
    return next;
  };

  for (int it = 0; it < opts.max_iter; ++it) {
    std::vector<TorusField> next = apply_map(iter, first_iterate);
    first_iterate = false;
    const double delta = x_distance(times, next, iter);
    deltas.push_back(delta);
    iter = std::move(next);
    if (!std::isfinite(delta) ||
        (deltas.size() > 2 && delta > 1e8 * (deltas.front() + 1e-300)))
      throw PicardDivergence("picard iteration diverged", deltas);
    if (delta < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw PicardDivergence("picard iteration did not converge within max_iter",
                           deltas);

  // Residual of the mild equation at the returned fixed point.
  std::vector<TorusField> once_more = apply_map(iter, false);
  const double residual = x_distance(times, once_more, iter);

  Trajectory traj;
  traj.times = times;
  traj.torus_fields = std::move(iter);
  traj.initial_torus = h0;
  PicardInfo info;
  info.iterations = static_cast<int>(deltas.size());
  info.deltas = std::move(deltas);
  info.mild_residual = residual;
  info.tol = opts.tol;
  info.converged = true;
  traj.provenance = info;
  return traj;
}

std::string scheme_name(Scheme s) {
  return s == Scheme::Etdrk2 ? "etdrk2" : "imex2";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "etdrk2") return Scheme::Etdrk2;
  if (name == "imex2") return Scheme::ImexAb2;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

namespace {

struct Phis {
  std::vector<double> E;    // exp(dt L)
  std::vector<double> E2;   // exp(2 dt L) for the AB2 history term
  std::vector<double> phi1; // (e^z - 1)/z
  std::vector<double> phi2; // (e^z - 1 - z)/z^2
};

Phis make_phis(const std::vector<double>& k2, double dt) {
  Phis p;
  const size_t n = k2.size();
  p.E.resize(n);
  p.E2.resize(n);
  p.phi1.resize(n);
  p.phi2.resize(n);
  for (size_t q = 0; q < n; ++q) {
    const double z = -dt * k2[q] * k2[q];
    p.E[q] = std::exp(z);
    p.E2[q] = std::exp(2.0 * z);
    if (std::abs(z) < 1e-5) {
      p.phi1[q] = 1.0 + z / 2.0 + z * z / 6.0;
      p.phi2[q] = 0.5 + z / 6.0 + z * z / 24.0;
    } else {
      p.phi1[q] = std::expm1(z) / z;
      p.phi2[q] = (std::expm1(z) - z) / (z * z);
    }
  }
  return p;
}

TorusField nonlinear_term(const TorusField& u, bool on) {
  if (!on) return TorusField(u.dim(), u.modes_per_axis(), u.box_length());
  // d/dt u = -Lap^2 u - Lap |grad u|^2; the nonlinear forcing is the
  // negated dealiased term.
  return -1.0 * laplacian(gradient_dot(u, u));
}

TorusField reference_march(const TorusField& h0, double T, int steps,
                           const ReferenceOptions& opts,
                           const std::vector<int>& store_at,
                           std::vector<TorusField>* stored) {
  const double dt = T / steps;
  const std::vector<double> k2 = mode_k2(h0);
  const Phis p = make_phis(k2, dt);
  const size_t n = k2.size();

  TorusField u = h0;
  TorusField n_prev(h0.dim(), h0.modes_per_axis(), h0.box_length());
  size_t next_store = 0;

  for (int step = 0; step < steps; ++step) {
    const TorusField nu = nonlinear_term(u, opts.nonlinearity_on);
    TorusField u_next = u;
    if (opts.scheme == Scheme::Etdrk2 || step == 0) {
      TorusField a = u;
      for (size_t q = 0; q < n; ++q)
        a.coeffs()[q] = p.E[q] * u.coeffs()[q] + dt * p.phi1[q] * nu.coeffs()[q];
      const TorusField na = nonlinear_term(a, opts.nonlinearity_on);
      for (size_t q = 0; q < n; ++q)
        u_next.coeffs()[q] =
            a.coeffs()[q] + dt * p.phi2[q] * (na.coeffs()[q] - nu.coeffs()[q]);
    } else {
      // Adams-Bashforth 2 on the integrating-factor transformed variable;
      // the linear part stays exact per mode.
      for (size_t q = 0; q < n; ++q)
        u_next.coeffs()[q] =
            p.E[q] * u.coeffs()[q] +
            dt * (1.5 * p.E[q] * nu.coeffs()[q] -
                  0.5 * p.E2[q] * n_prev.coeffs()[q]);
    }
    n_prev = nu;
    u = std::move(u_next);
    if (stored && next_store < store_at.size() && store_at[next_store] == step + 1) {
      stored->push_back(u);
      ++next_store;
    }
  }
  return u;
}

}  // namespace

Trajectory reference_solve(const TorusField& h0, double T, int steps,
                           const ReferenceOptions& opts) {
  h0.validate();
  if (!(T > 0) || steps < 2)
    throw std::invalid_argument("reference_solve needs T > 0 and steps >= 2");
  const double dt = T / steps;

  // Snap requested store times to step boundaries; always keep the final.
  std::vector<int> store_at;
  for (double t : opts.store_times) {
    int idx = static_cast<int>(std::llround(t / dt));
    idx = std::clamp(idx, 1, steps);
    store_at.push_back(idx);
  }
  store_at.push_back(steps);
  std::sort(store_at.begin(), store_at.end());
  store_at.erase(std::unique(store_at.begin(), store_at.end()), store_at.end());

  std::vector<TorusField> stored;
  reference_march(h0, T, steps, opts, store_at, &stored);

  OracleInfo info;
  info.steps = steps;
  info.scheme = scheme_name(opts.scheme);
  if (opts.measure_step_halving) {
    TorusField fine = reference_march(h0, T, 2 * steps, opts, {}, nullptr);
    info.step_halving_error = max_abs_diff(stored.back(), fine);
    info.accuracy_warning = info.step_halving_error > 1e-5;
  }

  Trajectory traj;
  for (int idx : store_at) traj.times.push_back(idx * dt);
  traj.torus_fields = std::move(stored);
  traj.initial_torus = h0;
  traj.provenance = info;
  return traj;
}

namespace {

SmallnessCertificate certificate_from(double b0, double c1,
                                      const KernelConstants& kc) {
  if (!(c1 > 0)) throw std::invalid_argument("certificate needs c1 > 0");
  SmallnessCertificate cert;
  cert.c1 = c1;
  cert.c4 = kc.c4;
  cert.delta = c1 / (8.0 * kc.c4);  // keeps 1 - 4 c4 delta / c1 = 1/2
  const double disc = 1.0 - 4.0 * kc.c4 * cert.delta / c1;
  cert.K_low = (1.0 - std::sqrt(disc)) / (2.0 * kc.c4);
  cert.K_high = 1.0 / (2.0 * kc.c4);
  cert.b_norm_h0 = b0;
  cert.satisfied = b0 <= cert.delta;
  return cert;
}

}  // namespace

SmallnessCertificate smallness_certificate(const TorusField& h0, double R,
                                           double c1, const KernelConstants& kc,
                                           const SupScanOptions& opts) {
  return certificate_from(b_norm(h0, R, BNormFlavor::X0, opts).value, c1, kc);
}

SmallnessCertificate smallness_certificate(const LineField& h0,
                                           const KernelTable& table, double R,
                                           double c1, const KernelConstants& kc,
                                           const SupScanOptions& opts) {
  return certificate_from(b_norm(h0, table, R, BNormFlavor::X0, opts).value, c1,
                          kc);
}

double weak_residual(const Trajectory& traj, const TestFunctionSpec& phi,
                     bool include_nonlinearity) {
  traj.validate();
  if (!traj.is_torus() || traj.torus_fields[0].dim() != 1)
    throw std::invalid_argument("weak_residual supports 1-D torus trajectories");
  if (!traj.initial_torus)
    throw std::invalid_argument("weak_residual needs the initial field");
  if (!(phi.t_halfwidth > 0) || !(phi.x_halfwidth > 0))
    throw std::domain_error("test function has empty support");

  const TorusField& proto = traj.torus_fields[0];
  const double L = proto.box_length();
  const int n = proto.modes_per_axis();
  const double dx = L / n;
  const double T = traj.horizon();
  if (phi.t_center + phi.t_halfwidth > T * (1.0 + 1e-12))
    throw std::domain_error("test function support leaves the time horizon");
  if (phi.x_center - phi.x_halfwidth < 0.0 ||
      phi.x_center + phi.x_halfwidth > L)
    throw std::domain_error("test function support leaves the box");

  // Fourier coefficients of the spatial bump on a fine auxiliary grid.
  // The pairing integrals int h b dx and int h Lap^2 b dx then use only the
  // band of h: exact for the band-limited states, free of the aliasing the
  // n-point trapezoid would suffer from the bump's fourth derivative.
  int fine = 8192;
  while (fine < 8 * n) fine *= 2;
  std::vector<std::complex<double>> bhat(fine);
  for (int i = 0; i < fine; ++i) {
    const double s = (i * (L / fine) - phi.x_center) / phi.x_halfwidth;
    bhat[i] = bump<0>(s).d[0];
  }
  dft(bhat, 1, fine, -1);
  for (auto& c : bhat) c /= static_cast<double>(fine);

  // b'' on the coarse grid for the quadratic term (its spectrum at the
  // aliasing frequencies is negligible, unlike the fourth derivative's).
  std::vector<double> b2(n);
  for (int i = 0; i < n; ++i) {
    const double s = (i * dx - phi.x_center) / phi.x_halfwidth;
    b2[i] = bump<2>(s).d[2] / (phi.x_halfwidth * phi.x_halfwidth);
  }

  auto eta_jet = [&](double t) {
    const Jet<1> j = bump<1>((t - phi.t_center) / phi.t_halfwidth);
    return std::array<double, 2>{phi.amplitude * j.d[0],
                                 phi.amplitude * j.d[1] / phi.t_halfwidth};
  };

  auto pairings = [&](const TorusField& h) {
    // (int h b dx, int h Lap^2 b dx) via the shared band.
    std::complex<double> p0(0.0, 0.0), p4(0.0, 0.0);
    for (int k = -n / 2; k < n / 2; ++k) {
      const std::complex<double> hk = h.coeffs()[(k + n) % n];
      const std::complex<double> bk =
          std::conj(bhat[(k + fine) % fine]);
      const double kap = h.kappa(k);
      const double kap4 = (kap * kap) * (kap * kap);
      p0 += hk * bk;
      p4 += hk * bk * kap4;
    }
    return std::array<double, 2>{p0.real() * L, p4.real() * L};
  };

  auto space_integral = [&](const TorusField& h, double t) {
    const auto [eta, eta_dot] = eta_jet(t);
    if (eta == 0.0 && eta_dot == 0.0) return 0.0;
    const auto [hb, hb4] = pairings(h);
    double acc = eta_dot * hb - eta * hb4;
    if (include_nonlinearity) {
      const auto gp = gradient(h)[0].to_physical();
      double quad = 0.0;
      for (int i = 0; i < n; ++i) quad += gp[i] * gp[i] * b2[i];
      acc -= eta * quad * dx;
    }
    return acc;
  };

  // Trapezoid in t over {0} u stored times.
  double total = 0.0;
  double prev_t = 0.0;
  double prev_I = space_integral(*traj.initial_torus, 0.0);
  for (size_t j = 0; j < traj.size(); ++j) {
    const double t = traj.times[j];
    const double I = space_integral(traj.torus_fields[j], t);
    total += 0.5 * (t - prev_t) * (I + prev_I);
    prev_t = t;
    prev_I = I;
  }

  // Initial-data pairing int h0 phi(0, .) dx.
  const auto [eta0, eta0_dot] = eta_jet(0.0);
  (void)eta0_dot;
  if (eta0 != 0.0) total += eta0 * pairings(*traj.initial_torus)[0];
  return std::abs(total);
}

namespace {

// 9-point central stencils: first and second derivatives at 8th order,
// fourth derivative at 6th order.
constexpr double kD1[9] = {1.0 / 280, -4.0 / 105, 1.0 / 5,   -4.0 / 5, 0.0,
                           4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
constexpr double kD2[9] = {-1.0 / 560, 8.0 / 315, -1.0 / 5,
                           8.0 / 5,    -205.0 / 72, 8.0 / 5,
                           -1.0 / 5,   8.0 / 315, -1.0 / 560};
constexpr double kD4[9] = {7.0 / 240,   -2.0 / 5,    169.0 / 60,
                           -122.0 / 15, 91.0 / 8,    -122.0 / 15,
                           169.0 / 60,  -2.0 / 5,    7.0 / 240};

std::vector<double> stencil_apply(const std::vector<double>& v,
                                  const double (&c)[9], double scale) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(n, 0.0);
  for (int i = 4; i < n - 4; ++i) {
    double s = 0.0;
    for (int k = -4; k <= 4; ++k) s += c[k + 4] * v[i + k];
    out[i] = s * scale;
  }
  return out;
}

}  // namespace

SelfSimilarReport self_similar_check(const Trajectory& traj,
                                     const std::vector<double>& times,
                                     bool nonlinear, double z_span,
                                     int z_points) {
  traj.validate();
  if (times.size() < 2)
    throw std::invalid_argument("self_similar_check needs at least two times");

  SelfSimilarReport rep;
  rep.times = times;
  const double dz = 2.0 * z_span / (z_points - 1);
  rep.z_grid.resize(z_points);
  for (int i = 0; i < z_points; ++i) rep.z_grid[i] = -z_span + i * dz;

  for (double t : times) {
    // Locate the stored time.
    size_t idx = traj.size();
    for (size_t j = 0; j < traj.size(); ++j)
      if (std::abs(traj.times[j] - t) <= 1e-9 * std::max(1.0, t)) idx = j;
    if (idx == traj.size())
      throw std::domain_error("self_similar_check: time " + std::to_string(t) +
                              " is not on the trajectory grid");
    const double tau = std::pow(t, 0.25);
    std::vector<double> profile(z_points);
    if (traj.is_torus()) {
      const TorusField& f = traj.torus_fields[idx];
      for (int i = 0; i < z_points; ++i)
        profile[i] = f.eval_series(rep.z_grid[i] * tau);
    } else {
      const LineField& f = traj.line_fields[idx];
      for (int i = 0; i < z_points; ++i)
        profile[i] = f.sample(rep.z_grid[i] * tau);
    }
    rep.profiles.push_back(std::move(profile));
  }

  double ref_mag = 0.0;
  for (double v : rep.profiles.back()) ref_mag = std::max(ref_mag, std::abs(v));
  for (size_t a = 0; a < rep.profiles.size(); ++a)
    for (size_t b = a + 1; b < rep.profiles.size(); ++b)
      for (int i = 0; i < z_points; ++i)
        rep.collapse_rel_linf =
            std::max(rep.collapse_rel_linf,
                     std::abs(rep.profiles[a][i] - rep.profiles[b][i]));
  if (ref_mag > 0) rep.collapse_rel_linf /= ref_mag;

  // Profile equation residual on the latest profile.
  const std::vector<double>& psi = rep.profiles.back();
  const auto d1 = stencil_apply(psi, kD1, 1.0 / dz);
  const auto d4 = stencil_apply(psi, kD4, 1.0 / (dz * dz * dz * dz));
  std::vector<double> q(psi.size(), 0.0);
  for (size_t i = 0; i < q.size(); ++i) q[i] = d1[i] * d1[i];
  const auto q2 = stencil_apply(q, kD2, 1.0 / (dz * dz));
  double worst = 0.0;
  for (int i = 8; i < z_points - 8; ++i) {
    double r = d4[i] - 0.25 * rep.z_grid[i] * d1[i];
    if (nonlinear) r += q2[i];
    worst = std::max(worst, std::abs(r));
  }
  rep.profile_ode_residual = worst;
  return rep;
}

}  // namespace sgflow
