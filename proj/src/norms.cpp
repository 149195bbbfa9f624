#include "sgflow/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgflow/fft.hpp"

namespace sgflow {

namespace {

constexpr double kPi = std::numbers::pi;

struct MaxWithPos {
  double value = 0.0;
  double x = 0.0;
};

MaxWithPos max_gradient(const TorusField& f) {
  auto g = gradient(f);
  const int n = f.modes_per_axis();
  const double dx = f.box_length() / n;
  MaxWithPos best;
  if (f.dim() == 1) {
    const auto p = g[0].to_physical();
    for (size_t i = 0; i < p.size(); ++i) {
      const double v = std::abs(p[i]);
      if (v > best.value) best = {v, static_cast<double>(i) * dx};
    }
  } else {
    const auto px = g[0].to_physical();
    const auto py = g[1].to_physical();
    for (size_t i = 0; i < px.size(); ++i) {
      const double v = std::hypot(px[i], py[i]);
      if (v > best.value) best = {v, static_cast<double>(i % n) * dx};
    }
  }
  return best;
}

MaxWithPos max_samples(const LineField& f) {
  MaxWithPos best;
  for (int i = 0; i < f.sample_count(); ++i) {
    const double v = std::abs(f.samples()[i]);
    if (v > best.value) best = {v, f.grid_x(i)};
  }
  return best;
}

// Horizon comparisons tolerate the rounding of R^4.
bool within_horizon(double t, double T4) { return t <= T4 * (1.0 + 1e-12); }

double pow4(double r) {
  const double r2 = r * r;
  return r2 * r2;
}

// Circular sums of v over balls of radius r for every grid point, times
// the cell measure. Cells are counted only when fully inside the ball, so
// for nonnegative integrands the sums underestimate the true integrals
// (consistent with the lower-bound semantics of the scans); radii below
// one cell fall back to the midpoint rule. Non-periodic callers must
// restrict their scan to positions whose window does not wrap.
std::vector<double> ball_sums(const std::vector<double>& v, int dim, int n,
                              double dx, double r) {
  if (dim == 1) {
    if (2.0 * r < dx) {
      std::vector<double> out(v.size());
      for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * 2.0 * r;
      return out;
    }
    const int w =
        std::min(static_cast<int>(std::floor(r / dx - 0.5)), n / 2 - 1);
    std::vector<double> prefix(2 * n + 1, 0.0);
    for (int i = 0; i < 2 * n; ++i) prefix[i + 1] = prefix[i] + v[i % n];
    std::vector<double> out(n);
    const int len = std::min(2 * std::max(w, 0) + 1, n);
    for (int i = 0; i < n; ++i) {
      const int a = ((i - w) % n + n) % n;
      out[i] = (prefix[a + len] - prefix[a]) * dx;
    }
    return out;
  }
  // 2-D: circular convolution with the inscribed-cell ball indicator via
  // the FFT.
  std::vector<std::complex<double>> a(v.size()), mask(v.size());
  for (size_t i = 0; i < v.size(); ++i) a[i] = v[i];
  const double r_in = std::max(r - dx * std::numbers::sqrt2 / 2.0, 0.0);
  for (int iy = 0; iy < n; ++iy) {
    const double ry = std::min(iy, n - iy) * dx;
    for (int ix = 0; ix < n; ++ix) {
      const double rx = std::min(ix, n - ix) * dx;
      mask[static_cast<size_t>(iy) * n + ix] =
          (rx * rx + ry * ry <= r_in * r_in) ? 1.0 : 0.0;
    }
  }
  dft(a, 2, n, -1);
  dft(mask, 2, n, -1);
  for (size_t i = 0; i < a.size(); ++i) a[i] *= mask[i];
  dft(a, 2, n, +1);
  std::vector<double> out(v.size());
  const double cell = dx * dx / (static_cast<double>(n) * n);
  for (size_t i = 0; i < out.size(); ++i) out[i] = a[i].real() * cell;
  return out;
}

// |grad h|^2 on the physical grid.
std::vector<double> grad_squared(const TorusField& f) {
  auto g = gradient(f);
  std::vector<double> out(f.mode_count(), 0.0);
  for (int ax = 0; ax < f.dim(); ++ax) {
    const auto p = g[ax].to_physical();
    for (size_t i = 0; i < out.size(); ++i) out[i] += p[i] * p[i];
  }
  return out;
}

std::vector<double> line_grad_squared(const Trajectory& traj, size_t i) {
  const LineField grad = traj.line_gradients.empty()
                             ? fd_gradient(traj.line_fields[i])
                             : traj.line_gradients[i];
  std::vector<double> out(grad.samples().size());
  for (size_t j = 0; j < out.size(); ++j)
    out[j] = grad.samples()[j] * grad.samples()[j];
  return out;
}

}  // namespace

NormReport x_norm(const Trajectory& traj, double R) {
  traj.validate();
  const double T4 = pow4(R);
  NormReport rep;
  rep.norm_name = std::isinf(R) ? "X" : "X_R";
  rep.R = R;
  bool any = false;
  for (size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    if (!within_horizon(t, T4)) break;
    any = true;
    MaxWithPos g;
    if (traj.is_torus()) {
      g = max_gradient(traj.torus_fields[i]);
    } else if (!traj.line_gradients.empty()) {
      g = max_samples(traj.line_gradients[i]);
    } else {
      g = max_samples(fd_gradient(traj.line_fields[i]));
    }
    rep.t_grid.push_back(t);
    const double val = std::pow(t, 0.25) * g.value;
    if (val > rep.value) {
      rep.value = val;
      rep.argmax_t = t;
      rep.argmax_x = g.x;
    }
  }
  if (!any) throw std::domain_error("x_norm: trajectory has no times within (0, R^4]");
  rep.x_points = traj.is_torus()
                     ? static_cast<int>(traj.torus_fields[0].mode_count())
                     : traj.line_fields[0].sample_count();
  return rep;
}

NormReport x0_norm(const Trajectory& traj, double R,
                   const std::vector<double>& r_grid, int x_stride) {
  traj.validate();
  if (r_grid.empty()) throw std::domain_error("x0_norm: empty radius grid");
  for (double r : r_grid)
    if (r <= 0 || r > R * (1.0 + 1e-12))
      throw std::domain_error("x0_norm: radius grid must lie in (0, R]");

  NormReport rep;
  rep.norm_name = std::isinf(R) ? "X0" : "X0_R";
  rep.R = R;
  rep.r_grid = r_grid;
  rep.t_grid = traj.times;

  const bool torus = traj.is_torus();
  const int dim = torus ? traj.torus_fields[0].dim() : 1;
  const int n = torus ? traj.torus_fields[0].modes_per_axis()
                      : traj.line_fields[0].sample_count();
  const double dx = torus ? traj.torus_fields[0].box_length() / n
                          : traj.line_fields[0].dx();

  // |grad h(t_i)|^2 once per stored time.
  std::vector<std::vector<double>> gsq(traj.size());
  for (size_t i = 0; i < traj.size(); ++i)
    gsq[i] = torus ? grad_squared(traj.torus_fields[i]) : line_grad_squared(traj, i);

  double best_sq = 0.0;
  for (double r : r_grid) {
    const double r4 = pow4(r);
    if (traj.times[0] > r4 * (1.0 + 1e-12))
      throw std::domain_error("x0_norm: trajectory does not cover (0, r^4]");

    // Time-accumulated ball integrals by trapezoid over stored times <= r^4.
    std::vector<double> acc;
    std::vector<double> prev_ball;
    double prev_t = 0.0;
    bool first = true;
    for (size_t i = 0; i < traj.size(); ++i) {
      const double t = traj.times[i];
      if (!within_horizon(t, r4)) break;
      // For the line window the wrap-around entries are invalid; the scan
      // range below keeps every ball inside the window.
      std::vector<double> ball = ball_sums(gsq[i], dim, n, dx, r);
      if (first) {
        acc.assign(ball.size(), 0.0);
        first = false;
      } else {
        const double dt = t - prev_t;
        for (size_t j = 0; j < acc.size(); ++j)
          acc[j] += 0.5 * dt * (ball[j] + prev_ball[j]);
      }
      prev_ball = std::move(ball);
      prev_t = t;
    }
    if (first) continue;

    const double weight = 1.0 / std::pow(r, dim + 2);
    size_t j_lo = 0, j_hi = acc.size();
    if (!torus) {
      const size_t margin = static_cast<size_t>(std::ceil(r / dx));
      j_lo = margin;
      j_hi = acc.size() - std::min(acc.size(), margin);
    }
    for (size_t j = j_lo; j < j_hi; j += static_cast<size_t>(std::max(1, x_stride))) {
      const double v = weight * acc[j];
      if (v > best_sq) {
        best_sq = v;
        rep.argmax_r = r;
        rep.argmax_x = torus ? (j % n) * dx
                             : traj.line_fields[0].grid_x(static_cast<int>(j));
        rep.argmax_t = r4;
      }
    }
  }
  rep.value = std::sqrt(best_sq);
  rep.x_points = n;
  return rep;
}

NormReport x0_norm(const Trajectory& traj, double R, const SupScanOptions& opts) {
  std::vector<double> r_grid;
  for (int j = 0; j <= opts.radius_levels; ++j)
    r_grid.push_back(R * std::pow(opts.radius_ratio, -j));
  std::sort(r_grid.begin(), r_grid.end());
  return x0_norm(traj, R, r_grid, opts.x_stride);
}

namespace {

Trajectory bicaloric_trajectory(const TorusField& k, double T4,
                                const SupScanOptions& opts) {
  Trajectory traj;
  traj.times = geometric_grid(T4, opts.time_levels, opts.time_ratio);
  for (double t : traj.times) traj.torus_fields.push_back(semigroup_apply(k, t));
  traj.initial_torus = k;
  return traj;
}

double torus_scan_horizon(const TorusField& k) {
  const double unit = k.box_length() / (2.0 * kPi);
  return 64.0 * pow4(unit);
}

}  // namespace

NormReport b_norm(const TorusField& k, double R, BNormFlavor flavor,
                  const SupScanOptions& opts) {
  const bool global = std::isinf(R);
  const double T4 = global ? torus_scan_horizon(k) : pow4(R);
  Trajectory traj = bicaloric_trajectory(k, T4, opts);
  NormReport rep;
  if (flavor == BNormFlavor::X) {
    rep = x_norm(traj, R);
    rep.norm_name = global ? "B" : "B_R";
  } else {
    rep = x0_norm(traj, global ? std::pow(T4, 0.25) : R, opts);
    rep.norm_name = global ? "B0" : "B0_R";
  }
  rep.R = R;
  return rep;
}

NormReport b_norm(const LineField& k, const KernelTable& table, double R,
                  BNormFlavor flavor, const SupScanOptions& opts) {
  if (!(R > 0) || std::isinf(R))
    throw std::domain_error("line b_norm needs a finite positive R");
  const double T4 = pow4(R);
  const std::vector<double> times = geometric_grid(T4, opts.time_levels, opts.time_ratio);

  if (flavor == BNormFlavor::X) {
    // Scan grid in x: scaled neighbourhoods of the data's features plus a
    // coarse pass over the window.
    NormReport rep;
    rep.norm_name = "B_R";
    rep.R = R;
    rep.t_grid = times;
    const double W = k.half_width();
    for (double t : times) {
      const double tau = std::pow(t, 0.25);
      std::vector<double> xs;
      std::vector<double> centers{0.0};
      for (auto [p, sing] : k.quadrature_breakpoints())
        if (std::abs(p) < W) centers.push_back(p);
      for (double c : centers)
        for (int j = -128; j <= 128; ++j) xs.push_back(c + tau * j / 16.0);
      const int coarse = 65;
      for (int j = 0; j < coarse; ++j)
        xs.push_back(-W + 2.0 * W * j / (coarse - 1));
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

      auto vals = line_semigroup_at(k, table, t, 1, xs);
      for (size_t i = 0; i < xs.size(); ++i) {
        const double v = std::pow(t, 0.25) * std::abs(vals[i]);
        if (v > rep.value) {
          rep.value = v;
          rep.argmax_t = t;
          rep.argmax_x = xs[i];
        }
      }
      rep.x_points = std::max(rep.x_points, static_cast<int>(xs.size()));
    }
    return rep;
  }

  // X0 flavor: build the gradient fields on the window grid and reuse the
  // trajectory-based estimator.
  Trajectory traj;
  traj.times = times;
  for (double t : times) {
    traj.line_fields.push_back(line_semigroup(k, table, t, 0));
    traj.line_gradients.push_back(line_semigroup(k, table, t, 1));
  }
  traj.initial_line = k;
  NormReport rep = x0_norm(traj, R, SupScanOptions{opts.time_levels, opts.time_ratio,
                                                   opts.radius_levels,
                                                   opts.radius_ratio, opts.x_stride});
  rep.norm_name = "B0_R";
  rep.R = R;
  return rep;
}

NormReport bmo_carleson(const TorusField& k, const SupScanOptions& opts) {
  NormReport rep;
  rep.norm_name = "BMO_CARLESON";
  const int n = k.modes_per_axis();
  const int dim = k.dim();
  const double L = k.box_length();
  const double dx = L / n;

  std::vector<double> R_grid;
  for (int j = 0; j <= opts.radius_levels; ++j)
    R_grid.push_back(0.5 * L * std::pow(opts.radius_ratio, -j));
  std::sort(R_grid.begin(), R_grid.end());
  rep.r_grid = R_grid;

  double best_sq = 0.0;
  for (double R : R_grid) {
    // Geometric t-grid accumulating from R 2^{-J} up to R.
    std::vector<double> ts = geometric_grid(R, opts.time_levels, opts.time_ratio);
    std::vector<double> acc;
    std::vector<double> prev;
    double prev_t = 0.0;
    for (size_t it = 0; it < ts.size(); ++it) {
      const double t = ts[it];
      // |(grad g)_t * k|^2 / t on the grid, with the standard dilation:
      // per mode the factor is i t kappa e^{-(t kappa)^4} per component.
      std::vector<double> wsq(k.mode_count(), 0.0);
      for (int ax = 0; ax < dim; ++ax) {
        TorusField comp = k;
        for (size_t i = 0; i < comp.coeffs().size(); ++i) {
          const double ka = k.kappa(k.wavenumber(i, ax));
          const double k2 = k.kappa_sq(i);
          const double damp = std::exp(-pow4(t) * k2 * k2);
          comp.coeffs()[i] *= std::complex<double>(0.0, t * ka * damp);
        }
        const auto p = comp.to_physical();
        for (size_t i = 0; i < wsq.size(); ++i) wsq[i] += p[i] * p[i];
      }
      for (auto& v : wsq) v /= t;
      auto ball = ball_sums(wsq, dim, n, dx, R);
      if (acc.empty()) {
        acc.assign(ball.size(), 0.0);
      } else {
        const double dt = t - prev_t;
        for (size_t j = 0; j < acc.size(); ++j)
          acc[j] += 0.5 * dt * (ball[j] + prev[j]);
      }
      prev = std::move(ball);
      prev_t = t;
    }
    const double weight = 1.0 / std::pow(R, dim);
    for (size_t j = 0; j < acc.size(); ++j) {
      const double v = weight * acc[j];
      if (v > best_sq) {
        best_sq = v;
        rep.argmax_r = R;
        rep.argmax_x = (j % n) * dx;
      }
    }
  }
  rep.value = std::sqrt(best_sq);
  rep.x_points = static_cast<int>(k.mode_count());
  return rep;
}

NormReport higher_norm(const Trajectory& traj, int m, double R) {
  if (m < 1)
    throw std::invalid_argument("higher_norm handles m >= 1; use x_norm for m = 0");
  traj.validate();
  if (!traj.is_torus())
    throw std::invalid_argument("higher_norm needs spectral (torus) trajectories");
  const double T4 = pow4(R);
  NormReport rep;
  rep.norm_name = "X_R_M";
  rep.R = R;
  rep.m = m;
  bool any = false;
  for (size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    if (!within_horizon(t, T4)) break;
    any = true;
    rep.t_grid.push_back(t);
    const TorusField& f = traj.torus_fields[i];
    double sum = 0.0;
    if (f.dim() == 1) {
      sum = derivative(f, m + 1).max_abs();
    } else {
      for (int ax = 0; ax <= m + 1; ++ax)
        sum += derivative(f, ax, m + 1 - ax).max_abs();
    }
    const double val = std::pow(t, (m + 1) / 4.0) * sum;
    if (val > rep.value) {
      rep.value = val;
      rep.argmax_t = t;
    }
  }
  if (!any) throw std::domain_error("higher_norm: no times within (0, R^4]");
  return rep;
}

std::vector<std::pair<double, double>> z_profile(
    const TorusField& k, const std::vector<double>& R_list,
    const SupScanOptions& opts) {
  std::vector<std::pair<double, double>> out;
  for (double R : R_list) out.push_back({R, b_norm(k, R, BNormFlavor::X, opts).value});
  return out;
}

std::vector<std::pair<double, double>> z_profile(
    const LineField& k, const KernelTable& table,
    const std::vector<double>& R_list, const SupScanOptions& opts) {
  std::vector<std::pair<double, double>> out;
  for (double R : R_list)
    out.push_back({R, b_norm(k, table, R, BNormFlavor::X, opts).value});
  return out;
}

}  // namespace sgflow
