#include "sgflow/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgflow/rng.hpp"

namespace sgflow {

std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t mode, std::uint64_t step) {
  const std::uint64_t h = key_hash(seed, stream, mode, step);
  std::uint64_t a = mix64(h ^ 0xD1B54A32D192ED03ull);
  std::uint64_t b = mix64(h + 0x8CB92BA72F3D8DD7ull);
  // 53-bit uniforms; keep u1 strictly positive for the logarithm.
  double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
  double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

NoiseSpec NoiseSpec::isotropic(int dim, int n, double L, double gamma,
                               int cutoff, std::uint64_t seed,
                               std::uint64_t stream_id) {
  NoiseSpec spec;
  spec.dim = dim;
  spec.n = n;
  spec.L = L;
  spec.cutoff = cutoff;
  spec.seed = seed;
  spec.stream_id = stream_id;
  TorusField proto(dim, n, L);
  spec.sigma.assign(proto.mode_count(), 0.0);
  for (size_t q = 0; q < spec.sigma.size(); ++q) {
    double k_sq = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
      const double k = proto.wavenumber(q, ax);
      k_sq += k * k;
    }
    const double k_abs = std::sqrt(k_sq);
    if (k_abs > 0 && k_abs <= cutoff)
      spec.sigma[q] = std::pow(k_abs, -gamma);
  }
  spec.validate();
  return spec;
}

NoiseSpec NoiseSpec::with_stream(std::uint64_t s) const {
  NoiseSpec out = *this;
  out.stream_id = s;
  return out;
}

void NoiseSpec::validate() const {
  TorusField proto(dim, n, L);
  if (sigma.size() != proto.mode_count())
    throw std::invalid_argument("noise spec: sigma size mismatch");
  if (3 * cutoff > n)
    throw std::invalid_argument("noise spec: cutoff must stay within n/3");
  if (sigma[0] != 0.0)
    throw std::invalid_argument("noise spec: the mean mode must be unforced");
  for (size_t q = 0; q < sigma.size(); ++q) {
    if (sigma[q] < 0)
      throw std::invalid_argument("noise spec: negative amplitude");
    size_t conj_q;
    if (dim == 1) {
      conj_q = (sigma.size() - q) % sigma.size();
    } else {
      const size_t ix = q % n, iy = q / n;
      conj_q = ((n - iy) % n) * n + (n - ix) % n;
    }
    if (sigma[q] != sigma[conj_q])
      throw std::invalid_argument("noise spec: sigma must be even in k");
    double k_sq = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
      const double k = proto.wavenumber(q, ax);
      k_sq += k * k;
    }
    if (std::sqrt(k_sq) > cutoff && sigma[q] != 0.0)
      throw std::invalid_argument("noise spec: amplitude beyond the cutoff");
  }
}

namespace {

// A mode owns its Hermitian pair when its wave vector is lexicographically
// positive; self-conjugate modes are never forced (sigma validation keeps
// them inside the cutoff < n/3, so only k = 0 could be self-paired).
bool canonical_mode(const TorusField& proto, size_t q) {
  const int kx = proto.wavenumber(q, 0);
  if (proto.dim() == 1) return kx > 0;
  const int ky = proto.wavenumber(q, 1);
  return ky > 0 || (ky == 0 && kx > 0);
}

size_t conjugate_index(const TorusField& proto, size_t q) {
  const int n = proto.modes_per_axis();
  if (proto.dim() == 1) return (proto.mode_count() - q) % proto.mode_count();
  const size_t ix = q % n, iy = q / n;
  return ((n - iy) % n) * n + (n - ix) % n;
}

}  // namespace

Trajectory ou_convolution(const NoiseSpec& spec, const std::vector<double>& t_grid) {
  spec.validate();
  if (t_grid.empty() || t_grid.front() <= 0)
    throw std::invalid_argument("ou_convolution: grid must start after 0");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("ou_convolution: grid must increase");

  TorusField state(spec.dim, spec.n, spec.L);
  Trajectory traj;
  traj.times = t_grid;
  double prev_t = 0.0;
  for (size_t step = 0; step < t_grid.size(); ++step) {
    const double dt = t_grid[step] - prev_t;
    for (size_t q = 0; q < state.mode_count(); ++q) {
      if (spec.sigma[q] == 0.0 || !canonical_mode(state, q)) continue;
      const double k2 = state.kappa_sq(q);
      const double k4 = k2 * k2;
      const double decay = std::exp(-dt * k4);
      // (1 - e^{-2 dt k4}) / (2 k4), stable for small exponents.
      const double var = -std::expm1(-2.0 * dt * k4) / (2.0 * k4);
      const auto [n1, n2] = gaussian_pair(spec.seed, spec.stream_id, q, step);
      const std::complex<double> xi(n1 / std::sqrt(2.0), n2 / std::sqrt(2.0));
      const std::complex<double> z =
          decay * state.coeffs()[q] + spec.sigma[q] * std::sqrt(var) * xi;
      state.coeffs()[q] = z;
      state.coeffs()[conjugate_index(state, q)] = std::conj(z);
    }
    traj.torus_fields.push_back(state);
    prev_t = t_grid[step];
  }
  StochasticInfo info;
  info.seed = spec.seed;
  info.stream_id = spec.stream_id;
  info.mode = "ou";
  traj.provenance = info;
  return traj;
}

namespace {

double pow4(double r) {
  const double r2 = r * r;
  return r2 * r2;
}

// Source term of the v-equation: the cross expansion of the quadratic form
// around the frozen path, -Lap(|grad v|^2 + 2 grad v . grad Z + |grad Z|^2).
TorusField random_pde_source(const TorusField& v, const TorusField& z) {
  TorusField sum = gradient_dot(v, v) + 2.0 * gradient_dot(v, z) +
                   gradient_dot(z, z);
  return -1.0 * laplacian(sum);
}

}  // namespace

Trajectory spde_solve(const TorusField& h0, const NoiseSpec& spec, double R,
                      SpdeMode mode, const SpdeOptions& opts) {
  h0.validate();
  if (h0.dim() != spec.dim || h0.modes_per_axis() != spec.n ||
      h0.box_length() != spec.L)
    throw std::invalid_argument("spde_solve: field and noise domains differ");
  const std::vector<double> grid = graded_grid(pow4(R), opts.time_levels);
  Trajectory z_path = ou_convolution(spec, grid);

  StochasticInfo info;
  info.seed = spec.seed;
  info.stream_id = spec.stream_id;

  if (mode == SpdeMode::MildDirect) {
    PicardOptions popts;
    popts.time_levels = opts.time_levels;
    popts.max_iter = opts.max_iter;
    popts.tol = opts.tol;
    popts.forcing = z_path.torus_fields;
    Trajectory traj = picard_solve(h0, R, popts);
    info.mode = "mild_direct";
    traj.provenance = info;
    return traj;
  }

  // RandomPde: ETDRK2 march of v on the (nonuniform) graded grid, with the
  // exact per-mode linear factor and Z frozen at node times.
  std::vector<double> k2(h0.mode_count());
  for (size_t q = 0; q < k2.size(); ++q) k2[q] = h0.kappa_sq(q);

  TorusField v = h0;
  TorusField z_prev(h0.dim(), h0.modes_per_axis(), h0.box_length());  // Z(0)=0
  Trajectory traj;
  traj.times = grid;
  double prev_t = 0.0;
  for (size_t j = 0; j < grid.size(); ++j) {
    const double dt = grid[j] - prev_t;
    const TorusField& z_next = z_path.torus_fields[j];
    const TorusField nv = random_pde_source(v, z_prev);
    TorusField a = v, v_next = v;
    for (size_t q = 0; q < k2.size(); ++q) {
      const double z = -dt * k2[q] * k2[q];
      const double E = std::exp(z);
      const double phi1 = std::abs(z) < 1e-5 ? 1.0 + z / 2.0 + z * z / 6.0
                                             : std::expm1(z) / z;
      a.coeffs()[q] = E * v.coeffs()[q] + dt * phi1 * nv.coeffs()[q];
    }
    const TorusField na = random_pde_source(a, z_next);
    for (size_t q = 0; q < k2.size(); ++q) {
      const double z = -dt * k2[q] * k2[q];
      double phi2;
      if (std::abs(z) < 1e-5) {
        phi2 = 0.5 + z / 6.0 + z * z / 24.0;
      } else {
        phi2 = (std::expm1(z) - z) / (z * z);
      }
      v_next.coeffs()[q] =
          a.coeffs()[q] + dt * phi2 * (na.coeffs()[q] - nv.coeffs()[q]);
    }
    v = std::move(v_next);
    traj.torus_fields.push_back(v + z_next);
    z_prev = z_next;
    prev_t = grid[j];
  }
  traj.initial_torus = h0;
  info.mode = "random_pde";
  traj.provenance = info;
  return traj;
}

std::vector<std::pair<double, double>> z_regularity_profile(
    const NoiseSpec& spec, const std::vector<double>& R_list,
    const SupScanOptions& opts) {
  if (R_list.empty()) return {};
  for (size_t i = 1; i < R_list.size(); ++i)
    if (R_list[i] >= R_list[i - 1])
      throw std::invalid_argument("z_regularity_profile: R list must decrease");
  const double R_max = R_list.front();
  const double R_min = R_list.back();
  // One path on a geometric grid reaching below the smallest horizon; all
  // horizons then restrict the same realization.
  int levels = opts.time_levels;
  const double needed = pow4(R_max) / pow4(R_min);
  while (std::pow(opts.time_ratio, levels) < needed * 64.0) ++levels;
  const std::vector<double> grid =
      geometric_grid(pow4(R_max), levels, opts.time_ratio);
  Trajectory z = ou_convolution(spec, grid);

  std::vector<std::pair<double, double>> out;
  for (double R : R_list) out.push_back({R, x_norm(z, R).value});
  return out;
}

}  // namespace sgflow
