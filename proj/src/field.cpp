#include "sgflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgflow/fft.hpp"
#include "sgflow/quadrature.hpp"

namespace sgflow {

namespace {
constexpr double kPi = std::numbers::pi;

int wrap_wave(int i, int n) { return i < n / 2 ? i : i - n; }
}  // namespace

TorusField::TorusField(int dim, int n, double box_length)
    : dim_(dim), n_(n), box_length_(box_length) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("field dim must be 1 or 2");
  if (n < 4 || (n & (n - 1)) != 0)
    throw std::invalid_argument("modes per axis must be a power of two >= 4");
  if (box_length <= 0) throw std::invalid_argument("box length must be positive");
  coeffs_.assign(dim == 1 ? n : static_cast<size_t>(n) * n, {0.0, 0.0});
}

TorusField TorusField::from_physical(int dim, int n, double box_length,
                                     std::span<const double> values) {
  TorusField f(dim, n, box_length);
  if (values.size() != f.coeffs_.size())
    throw std::invalid_argument("physical sample count mismatch");
  for (size_t i = 0; i < values.size(); ++i) f.coeffs_[i] = values[i];
  dft(f.coeffs_, dim, n, -1);
  const double inv = 1.0 / static_cast<double>(values.size());
  for (auto& c : f.coeffs_) c *= inv;
  return f;
}

int TorusField::wavenumber(size_t flat, int axis) const {
  if (dim_ == 1) return wrap_wave(static_cast<int>(flat), n_);
  const int ix = static_cast<int>(flat % n_);
  const int iy = static_cast<int>(flat / n_);
  return wrap_wave(axis == 0 ? ix : iy, n_);
}

double TorusField::kappa(int k) const { return 2.0 * kPi * k / box_length_; }

double TorusField::kappa_sq(size_t flat) const {
  double s = 0.0;
  for (int ax = 0; ax < dim_; ++ax) {
    const double ka = kappa(wavenumber(flat, ax));
    s += ka * ka;
  }
  return s;
}

std::vector<double> TorusField::to_physical() const {
  std::vector<std::complex<double>> work = coeffs_;
  dft(work, dim_, n_, +1);
  std::vector<double> out(work.size());
  for (size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
  return out;
}

double TorusField::max_abs() const {
  double m = 0.0;
  for (double v : to_physical()) m = std::max(m, std::abs(v));
  return m;
}

double TorusField::eval_series(double x) const {
  if (dim_ != 1)
    throw std::invalid_argument("eval_series supports 1-D fields only");
  double acc = coeffs_[0].real();
  for (int k = 1; k <= n_ / 2; ++k) {
    const double phase = kappa(k) * x;
    const std::complex<double> e(std::cos(phase), std::sin(phase));
    if (k == n_ / 2) {
      acc += (coeffs_[k] * e).real();  // unpaired Nyquist mode
    } else {
      acc += 2.0 * (coeffs_[k] * e).real();
    }
  }
  return acc;
}

double TorusField::hermitian_defect() const {
  double max_coeff = 0.0, defect = 0.0;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    max_coeff = std::max(max_coeff, std::abs(coeffs_[i]));
    size_t conj_index;
    if (dim_ == 1) {
      conj_index = (coeffs_.size() - i) % coeffs_.size();
    } else {
      const size_t ix = i % n_, iy = i / n_;
      conj_index = ((n_ - iy) % n_) * n_ + (n_ - ix) % n_;
    }
    defect = std::max(defect, std::abs(coeffs_[i] - std::conj(coeffs_[conj_index])));
  }
  return max_coeff > 0 ? defect / max_coeff : 0.0;
}

void TorusField::validate() const {
  if (hermitian_defect() > 1e-12)
    throw std::runtime_error("torus field is not Hermitian-symmetric");
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::runtime_error("torus field has non-finite coefficients");
}

TorusField operator+(const TorusField& a, const TorusField& b) {
  TorusField out = a;
  for (size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] += b.coeffs()[i];
  return out;
}

TorusField operator-(const TorusField& a, const TorusField& b) {
  TorusField out = a;
  for (size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] -= b.coeffs()[i];
  return out;
}

TorusField operator*(double s, const TorusField& a) {
  TorusField out = a;
  for (auto& c : out.coeffs()) c *= s;
  return out;
}

TorusField semigroup_apply(const TorusField& f, double t) {
  if (t < 0) throw std::domain_error("semigroup time must be nonnegative");
  TorusField out = f;
  for (size_t i = 0; i < out.coeffs().size(); ++i) {
    const double k2 = f.kappa_sq(i);
    out.coeffs()[i] *= std::exp(-t * k2 * k2);
  }
  return out;
}

std::vector<TorusField> gradient(const TorusField& f) {
  std::vector<TorusField> comps;
  for (int ax = 0; ax < f.dim(); ++ax) {
    TorusField g = f;
    for (size_t i = 0; i < g.coeffs().size(); ++i) {
      const double ka = f.kappa(f.wavenumber(i, ax));
      g.coeffs()[i] *= std::complex<double>(0.0, ka);
    }
    comps.push_back(std::move(g));
  }
  return comps;
}

TorusField laplacian(const TorusField& f) {
  TorusField out = f;
  for (size_t i = 0; i < out.coeffs().size(); ++i)
    out.coeffs()[i] *= -f.kappa_sq(i);
  return out;
}

TorusField derivative(const TorusField& f, int order_x, int order_y) {
  TorusField out = f;
  for (size_t i = 0; i < out.coeffs().size(); ++i) {
    std::complex<double> mult(1.0, 0.0);
    const std::complex<double> ix(0.0, f.kappa(f.wavenumber(i, 0)));
    for (int p = 0; p < order_x; ++p) mult *= ix;
    if (f.dim() == 2) {
      const std::complex<double> iy(0.0, f.kappa(f.wavenumber(i, 1)));
      for (int p = 0; p < order_y; ++p) mult *= iy;
    } else if (order_y > 0) {
      throw std::invalid_argument("y-derivative of a 1-D field");
    }
    out.coeffs()[i] *= mult;
  }
  return out;
}

TorusField dealias(const TorusField& f) {
  TorusField out = f;
  const int limit = f.modes_per_axis() / 3;
  for (size_t i = 0; i < out.coeffs().size(); ++i) {
    for (int ax = 0; ax < f.dim(); ++ax) {
      if (std::abs(f.wavenumber(i, ax)) > limit) {
        out.coeffs()[i] = 0.0;
        break;
      }
    }
  }
  return out;
}

TorusField gradient_dot(const TorusField& h, const TorusField& k) {
  if (h.dim() != k.dim() || h.modes_per_axis() != k.modes_per_axis() ||
      h.box_length() != k.box_length())
    throw std::invalid_argument("gradient_dot: mismatched fields");
  auto gh = gradient(h);
  auto gk = gradient(k);
  std::vector<double> prod(h.mode_count(), 0.0);
  for (int ax = 0; ax < h.dim(); ++ax) {
    const auto pa = dealias(gh[ax]).to_physical();
    const auto pb = dealias(gk[ax]).to_physical();
    for (size_t i = 0; i < prod.size(); ++i) prod[i] += pa[i] * pb[i];
  }
  TorusField w = TorusField::from_physical(h.dim(), h.modes_per_axis(),
                                           h.box_length(), prod);
  return dealias(w);
}

TorusField nonlinearity(const TorusField& f) { return laplacian(gradient_dot(f, f)); }

double max_abs_diff(const TorusField& a, const TorusField& b, bool ignore_mean) {
  TorusField d = a - b;
  if (ignore_mean) d.coeffs()[0] = 0.0;
  return d.max_abs();
}

double max_abs_gradient(const TorusField& f) {
  auto g = gradient(f);
  if (f.dim() == 1) return g[0].max_abs();
  const auto px = g[0].to_physical();
  const auto py = g[1].to_physical();
  double m = 0.0;
  for (size_t i = 0; i < px.size(); ++i)
    m = std::max(m, std::hypot(px[i], py[i]));
  return m;
}

double periodic_interp(std::span<const double> values, double box_length,
                       double x) {
  const int n = static_cast<int>(values.size());
  const double dx = box_length / n;
  double pos = x / dx;
  pos -= std::floor(pos / n) * n;
  const int i1 = static_cast<int>(std::floor(pos));
  const double s = pos - i1;
  auto at = [&](int i) { return values[((i % n) + n) % n]; };
  const double a = at(i1 - 1), b = at(i1), c = at(i1 + 1), d = at(i1 + 2);
  return b + 0.5 * s *
                 (c - a +
                  s * (2.0 * a - 5.0 * b + 4.0 * c - d +
                       s * (3.0 * (b - c) + d - a)));
}

LineField::LineField(double half_width, int sample_count, EdgeExtension ext)
    : half_width_(half_width), m_(sample_count), ext_(ext) {
  if (half_width <= 0) throw std::invalid_argument("window half-width must be positive");
  if (sample_count < 8) throw std::invalid_argument("too few line samples");
  samples_.assign(sample_count, 0.0);
}

double LineField::sample(double y) const {
  switch (ext_.kind) {
    case EdgeExtension::Kind::PowerEven:
      return ext_.coeff * std::pow(std::abs(y), ext_.alpha);
    case EdgeExtension::Kind::Linear:
      return ext_.coeff * y;
    case EdgeExtension::Kind::Logarithmic:
      if (y == 0.0) return samples_[(m_ - 1) / 2];
      return std::log(std::abs(y));
    case EdgeExtension::Kind::Constant:
      break;
  }
  if (y <= -half_width_) return ext_.left_value;
  if (y >= half_width_) return ext_.right_value;
  const double pos = (y + half_width_) / dx();
  const int i1 = std::clamp(static_cast<int>(std::floor(pos)), 1, m_ - 3);

  // A stencil sample is usable only when no declared discontinuity
  // separates it from y (samples sitting exactly on a jump are ambiguous
  // and never used).
  auto usable = [&](int i) {
    const double xi = grid_x(i);
    for (double p : discontinuities_) {
      if (xi == p) return false;
      if ((y - p) * (xi - p) < 0.0) return false;
    }
    return true;
  };

  bool clean = true;
  for (int i = i1 - 1; i <= i1 + 2; ++i)
    if (!usable(i)) clean = false;
  if (clean) {
    const double u = pos - i1;
    const double a = samples_[i1 - 1], b = samples_[i1], c = samples_[i1 + 1],
                 d = samples_[i1 + 2];
    return b + 0.5 * u *
                   (c - a +
                    u * (2.0 * a - 5.0 * b + 4.0 * c - d +
                         u * (3.0 * (b - c) + d - a)));
  }
  // Nearest usable sample on y's own side of the jump.
  const int start = std::clamp(static_cast<int>(std::llround(pos)), 0, m_ - 1);
  for (int off = 0; off < m_; ++off) {
    for (int i : {start - off, start + off}) {
      if (i >= 0 && i < m_ && usable(i)) return samples_[i];
    }
  }
  return samples_[start];
}

double LineField::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::pair<double, bool>> LineField::quadrature_breakpoints() const {
  std::vector<std::pair<double, bool>> pts;
  switch (ext_.kind) {
    case EdgeExtension::Kind::PowerEven:
      // Fractional powers have a kink (or unbounded derivative) at 0.
      if (ext_.alpha != 2.0 && ext_.alpha != 4.0)
        pts.push_back({0.0, ext_.alpha < 2.0});
      break;
    case EdgeExtension::Kind::Logarithmic:
      pts.push_back({0.0, true});
      break;
    case EdgeExtension::Kind::Linear:
      break;
    case EdgeExtension::Kind::Constant:
      // Transition from samples to the constant tails.
      pts.push_back({-half_width_, false});
      pts.push_back({half_width_, false});
      break;
  }
  for (double p : discontinuities_) pts.push_back({p, false});
  std::sort(pts.begin(), pts.end());
  return pts;
}

void LineField::validate() const {
  for (double v : samples_)
    if (!std::isfinite(v)) throw std::runtime_error("line field has non-finite samples");
  auto edge_value = [&](double y, double fallback) {
    switch (ext_.kind) {
      case EdgeExtension::Kind::PowerEven:
        return ext_.coeff * std::pow(std::abs(y), ext_.alpha);
      case EdgeExtension::Kind::Linear:
        return ext_.coeff * y;
      case EdgeExtension::Kind::Logarithmic:
        return std::log(std::abs(y));
      case EdgeExtension::Kind::Constant:
        return fallback;
    }
    return fallback;
  };
  const double left = edge_value(-half_width_, ext_.left_value);
  const double right = edge_value(half_width_, ext_.right_value);
  if (std::abs(left - samples_.front()) > 1e-8 ||
      std::abs(right - samples_.back()) > 1e-8)
    throw std::runtime_error("edge extension inconsistent with boundary samples");
}

namespace {

// Graded panel layout for a single t: Gauss-Legendre nodes in y covering
// [lo, hi], split at the field's breakpoints, with geometric refinement
// toward singular ones. Nodes never land on a breakpoint (open panels).
void build_line_panels(const LineField& f, double lo, double hi, double dy,
                       std::vector<double>& nodes, std::vector<double>& weights) {
  auto bps = f.quadrature_breakpoints();
  std::vector<double> edges{lo, hi};
  for (auto [p, sing] : bps)
    if (p > lo && p < hi) edges.push_back(p);
  std::sort(edges.begin(), edges.end());

  auto singular_at = [&](double p) {
    for (auto [q, sing] : bps)
      if (q == p) return sing;
    return false;
  };

  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    double a = edges[e], b = edges[e + 1];
    const bool sing_a = singular_at(a), sing_b = singular_at(b);
    // Geometrically graded sub-edges toward singular endpoints.
    std::vector<double> sub{a, b};
    const double len = b - a;
    if (len <= 0) continue;
    if (sing_a || sing_b) {
      for (int j = 1; j <= 40; ++j) {
        const double off = len * std::pow(0.5, j);
        if (off < 1e-12) break;
        if (sing_a) sub.push_back(a + off);
        if (sing_b) sub.push_back(b - off);
      }
      std::sort(sub.begin(), sub.end());
      sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
    }
    for (size_t s = 0; s + 1 < sub.size(); ++s) {
      const double sa = sub[s], sb = sub[s + 1];
      const int panels = std::max(1, static_cast<int>(std::ceil((sb - sa) / dy)));
      gauss4_panels(sa, sb, panels, nodes, weights);
    }
    // The innermost graded sliver next to a singular endpoint is dropped;
    // the integrand is integrable there and the omitted mass is O(1e-11).
  }
}

}  // namespace

std::vector<double> line_semigroup_at(const LineField& f, const KernelTable& table,
                                      double t, int deriv_order,
                                      std::span<const double> xs) {
  if (t <= 0) throw std::domain_error("line semigroup needs t > 0");
  if (deriv_order < 0 || deriv_order > 3)
    throw std::invalid_argument("unsupported derivative order");
  const double tau = std::pow(t, 0.25);
  if (tau * table.z_max > 10.0 * f.half_width())
    throw std::runtime_error(
        "window too small: kernel support t^{1/4} z_max = " +
        std::to_string(tau * table.z_max) + " exceeds 10 W = " +
        std::to_string(10.0 * f.half_width()));
  if (xs.empty()) return {};

  // Resolve both the kernel's own scale (tau) and, for sampled data, the
  // sample spacing.
  double dy = tau / 8.0;
  if (f.extension().kind == EdgeExtension::Kind::Constant)
    dy = std::min(dy, 2.0 * f.dx());

  // Evaluation points are grouped into clusters whose kernel supports
  // overlap, so that scattered scan points do not force one huge panel set.
  std::vector<size_t> order(xs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return xs[a] < xs[b]; });

  const double support = tau * table.z_max;
  const double scale = std::pow(tau, -deriv_order - 1);
  std::vector<double> out(xs.size(), 0.0);

  size_t start = 0;
  while (start < order.size()) {
    size_t stop = start + 1;
    while (stop < order.size() &&
           xs[order[stop]] - xs[order[stop - 1]] <= 2.0 * support)
      ++stop;
    const double lo = xs[order[start]] - support;
    const double hi = xs[order[stop - 1]] + support;

    std::vector<double> nodes, weights;
    build_line_panels(f, lo, hi, dy, nodes, weights);
    std::vector<double> wf(nodes.size());
    for (size_t j = 0; j < nodes.size(); ++j)
      wf[j] = weights[j] * f.sample(nodes[j]);

    // D^m e^{-tA} f (x) = tau^{-m-1} int g^{(m)}((x - y)/tau) f(y) dy.
    for (size_t q = start; q < stop; ++q) {
      const double x = xs[order[q]];
      double acc = 0.0;
      for (size_t j = 0; j < nodes.size(); ++j) {
        const double u = (x - nodes[j]) / tau;
        if (std::abs(u) > table.z_max) continue;
        acc += wf[j] * eval_kernel(table, u, deriv_order);
      }
      out[order[q]] = acc * scale;
    }
    start = stop;
  }
  return out;
}

LineField line_semigroup(const LineField& f, const KernelTable& table, double t,
                         int deriv_order) {
  std::vector<double> xs(f.sample_count());
  for (int i = 0; i < f.sample_count(); ++i) xs[i] = f.grid_x(i);
  auto vals = line_semigroup_at(f, table, t, deriv_order, xs);
  // The smoothed field has constant tails only approximately; record the
  // computed boundary values so the extension stays consistent.
  LineField out(f.half_width(), f.sample_count(),
                EdgeExtension::constant(vals.front(), vals.back()));
  out.samples() = std::move(vals);
  return out;
}

LineField fd_gradient(const LineField& f) {
  const int m = f.sample_count();
  const double h = f.dx();
  const auto& s = f.samples();
  std::vector<double> d(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (i >= 2 && i < m - 2) {
      d[i] = (-s[i + 2] + 8.0 * s[i + 1] - 8.0 * s[i - 1] + s[i - 2]) / (12.0 * h);
    } else if (i == 0) {
      d[i] = (s[1] - s[0]) / h;
    } else if (i == m - 1) {
      d[i] = (s[m - 1] - s[m - 2]) / h;
    } else {
      d[i] = (s[i + 1] - s[i - 1]) / (2.0 * h);
    }
  }
  LineField out(f.half_width(), m, EdgeExtension::constant(d.front(), d.back()));
  out.samples() = std::move(d);
  return out;
}

}  // namespace sgflow
