#include "sgflow/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "sgflow/quadrature.hpp"

using namespace sgflow;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: plain fixed-step Simpson quadrature of the Fourier
// integral, no shared code with the adaptive builder.
double simpson_kernel(double z, int m) {
  const double a = 0.0, b = 3.2;
  const int n = 1 << 16;
  const double h = (b - a) / n;
  auto f = [&](double xi) {
    const double damp = std::exp(-xi * xi * xi * xi);
    switch (m) {
      case 0: return damp * std::cos(xi * z);
      case 1: return -xi * damp * std::sin(xi * z);
      case 2: return -xi * xi * damp * std::cos(xi * z);
      default: return xi * xi * xi * damp * std::sin(xi * z);
    }
  };
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / (3.0 * kPi);
}

const KernelTable& table1d() {
  static KernelTable t = build_default_kernel(1);
  return t;
}

}  // namespace

TEST_CASE("kernel value at origin matches the Gamma evaluation") {
  // g(0) = Gamma(5/4)/pi via an independent special-function route.
  const double expected = std::tgamma(1.25) / kPi;
  CHECK(eval_kernel(table1d(), 0.0, 0) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(expected == doctest::Approx(0.2885168693082697).epsilon(1e-12));
}

TEST_CASE("kernel matches the Simpson oracle at sampled points") {
  for (double z : {0.5, 1.0, 2.5, 7.0, 10.0}) {
    for (int m = 0; m < 4; ++m) {
      CAPTURE(z);
      CAPTURE(m);
      CHECK(eval_kernel(table1d(), z, m) ==
            doctest::Approx(simpson_kernel(z, m)).epsilon(5e-9).scale(1.0));
    }
  }
  // Frozen oracle values.
  CHECK(eval_kernel(table1d(), 1.0, 0) == doctest::Approx(0.2426650945641446).epsilon(1e-9));
  CHECK(eval_kernel(table1d(), 10.0, 0) ==
        doctest::Approx(-4.2879435383181750e-04).epsilon(1e-6));
  CHECK(eval_kernel(table1d(), 1.0, 1) == doctest::Approx(-0.0860859573054103).epsilon(1e-8));
  CHECK(eval_kernel(table1d(), 1.0, 2) == doctest::Approx(-0.0643762102681166).epsilon(1e-8));
  CHECK(eval_kernel(table1d(), 1.0, 3) == doctest::Approx(0.0606662736410180).epsilon(1e-8));
}

TEST_CASE("kernel table invariants") {
  const KernelTable& t = table1d();
  CHECK_NOTHROW(validate_kernel(t));
  CHECK(kernel_mass(t) == doctest::Approx(1.0).epsilon(1e-11));
  // g'(0) = 0 and the truncation rule.
  CHECK(eval_kernel(t, 0.0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(eval_kernel(t, t.z_max + 1.0, 0) == 0.0);
  CHECK(std::abs(eval_kernel(t, t.z_max, 0)) < 1e-12);
  CHECK_THROWS_AS(eval_kernel(t, 0.0, 4), std::invalid_argument);
}

TEST_CASE("Parseval identity on the table") {
  const KernelTable& t = table1d();
  std::vector<double> sq(t.samples[0].size());
  for (size_t i = 0; i < sq.size(); ++i) sq[i] = t.samples[0][i] * t.samples[0][i];
  const double lhs = trapezoid_uniform(sq, t.dz);
  // (1/pi) int_0^inf e^{-2 xi^4} d xi = 2^{-1/4} Gamma(5/4) / pi.
  const double rhs = std::pow(2.0, -0.25) * std::tgamma(1.25) / kPi;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  CHECK(rhs == doctest::Approx(0.242612801141519).epsilon(1e-11));
}

TEST_CASE("semigroup composition of the scaled kernel") {
  // int G(t, x-y) G(s, y-w) dy = G(t+s, x-w) at sampled arguments.
  const KernelTable& tab = table1d();
  auto G = [&](double t, double x) {
    const double tau = std::pow(t, 0.25);
    return eval_kernel(tab, x / tau, 0) / tau;
  };
  const double t = 0.7, s = 0.4, x = 0.9, w = -0.3;
  const double h = 1.0 / 64.0;
  double conv = 0.0;
  for (double y = -14.0; y <= 14.0; y += h) conv += G(t, x - y) * G(s, y - w) * h;
  CHECK(conv == doctest::Approx(G(t + s, x - w)).epsilon(1e-8));
}

TEST_CASE("derived constants") {
  const KernelConstants c = kernel_constants(table1d());
  // B(1/2, 1/4) via the Gamma identity, cross-checked by direct quadrature
  // of int_0^1 s^{-1/2} (1-s)^{-3/4} ds with the endpoint substitutions
  // s = u^2 and 1 - s = v^4.
  const int n = 1 << 14;
  double beta_quad = 0.0;
  {
    const double b = std::sqrt(0.5);
    const double h = b / n;
    auto f = [](double u) { return 2.0 * std::pow(1.0 - u * u, -0.75); };
    double sum = f(0.0) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
    beta_quad += sum * h / 3.0;
  }
  {
    const double b = std::pow(0.5, 0.25);
    const double h = b / n;
    auto f = [](double v) { return 4.0 / std::sqrt(1.0 - v * v * v * v); };
    double sum = f(0.0) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
    beta_quad += sum * h / 3.0;
  }
  CHECK(c.beta_half_quarter == doctest::Approx(beta_quad).epsilon(1e-10));
  CHECK(c.beta_half_quarter == doctest::Approx(5.244115108584238).epsilon(1e-12));

  CHECK(c.linf_g == c.g0);
  CHECK(c.l1_g >= 1.0);
  CHECK(c.c4 == c.beta_half_quarter * c.w31_g);
  for (double v : {c.g0, c.l1_g, c.linf_g, c.l1_grad_g, c.w31_g, c.c4})
    CHECK(v > 0.0);

  // Frozen trapezoid-accuracy references.
  CHECK(c.l1_g == doctest::Approx(1.237294386956).epsilon(2e-5));
  CHECK(c.l1_grad_g == doctest::Approx(0.715845394128).epsilon(2e-5));
  CHECK(c.w31_g == doctest::Approx(2.993847461838).epsilon(2e-5));
  CHECK(c.c4 == doctest::Approx(15.7000807074).epsilon(2e-5));
}

TEST_CASE("tail integrals decrease and vanish at the boundary") {
  const KernelTable& t = table1d();
  const double full = kernel_l1_tail(t, 1, 0.0);
  CHECK(full == doctest::Approx(kernel_l1_norm(t, 1)).epsilon(1e-10));
  double prev = full;
  for (double s : {1.0, 2.0, 4.0, 8.0}) {
    const double v = kernel_l1_tail(t, 1, s);
    CHECK(v <= prev * (1.0 + 1e-14));
    prev = v;
  }
  CHECK(kernel_l1_tail(t, 1, t.z_max) == 0.0);
}

TEST_CASE("adaptive quadrature reports non-convergence") {
  // A peak the rule sees but cannot resolve within the subdivision budget.
  auto needle = [](double x) { return std::exp(-2500.0 * (x - 0.3) * (x - 0.3)); };
  bool ok = true;
  integrate_adaptive(needle, 0.0, 1.0, 1e-14, 2, ok);
  CHECK(!ok);
  CHECK_THROWS_AS(integrate_adaptive(needle, 0.0, 1.0, 1e-14, 2),
                  std::runtime_error);
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(build_kernel(3, 10, 0.1, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel(1, -1, 0.1, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel(1, 10, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "sgflow_kernel_cache";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "kernel.bin").string();
  const KernelTable& t = table1d();
  save_kernel(t, path);
  const KernelTable back = load_kernel(path);
  CHECK(back.dim == t.dim);
  CHECK(back.z_max == t.z_max);
  CHECK(back.dz == t.dz);
  CHECK(back.samples == t.samples);

  // A corrupted header is rejected.
  {
    std::FILE* fp = std::fopen(path.c_str(), "r+b");
    REQUIRE(fp);
    std::fputc('X', fp);
    std::fclose(fp);
  }
  CHECK_THROWS(load_kernel(path));
}

TEST_CASE("two-dimensional radial table") {
  // The radial profile is even, mass-one under the polar measure, and the
  // radial derivative matches finite differences.
  static KernelTable t2 = build_default_kernel(2);
  CHECK(t2.dim == 2);
  CHECK(kernel_mass(t2) == doctest::Approx(1.0).epsilon(1e-8));
  // 4th-order stencil on exact grid nodes, no interpolation involved.
  const double h = t2.dz;
  const int c = (t2.size() - 1) / 2;
  for (int off : {16, 48, 96}) {
    const int i = c + off;
    const auto& g0 = t2.samples[0];
    const double fd =
        (-g0[i + 2] + 8.0 * g0[i + 1] - 8.0 * g0[i - 1] + g0[i - 2]) / (12.0 * h);
    CHECK(t2.samples[1][i] == doctest::Approx(fd).epsilon(1e-7));
  }
  const KernelConstants c2 = kernel_constants(t2);
  CHECK(c2.l1_g >= 1.0);
  CHECK(c2.c4 == doctest::Approx(c2.beta_half_quarter * c2.w31_g));
  CHECK(c2.w31_g > c2.l1_g + c2.l1_grad_g);
}
