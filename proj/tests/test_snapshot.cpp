#include "sgflow/snapshot.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"

using namespace sgflow;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "sgflow_snapshot_tests";
  fs::create_directories(dir);
  return dir;
}

TorusField sample_torus() {
  TorusField f(1, 64, 2.0 * kPi);
  f.coeffs()[1] = std::complex<double>(0.0, -0.35);
  f.coeffs()[63] = std::complex<double>(0.0, 0.35);
  f.coeffs()[0] = 1.25;
  return f;
}

}  // namespace

TEST_CASE("torus snapshot round trip and validation") {
  const auto base = (work_dir() / "torus").string();
  const TorusField f = sample_torus();
  save_field(f, base, 0.75);
  const GalleryField back = load_field(base);
  const auto& g = std::get<TorusField>(back);
  CHECK(g.modes_per_axis() == 64);
  CHECK(g.box_length() == f.box_length());
  for (size_t q = 0; q < f.mode_count(); ++q)
    CHECK(g.coeffs()[q] == f.coeffs()[q]);

  // Breaking Hermitian symmetry in the raw array must fail validation.
  {
    std::fstream raw(base + ".f64",
                     std::ios::binary | std::ios::in | std::ios::out);
    raw.seekp(2 * 8);  // imaginary part of mode 0? no: real part of mode 1
    const double bad = 0.7;
    raw.write(reinterpret_cast<const char*>(&bad), 8);
  }
  CHECK_THROWS(load_field(base));
}

TEST_CASE("line snapshot keeps extension metadata") {
  const auto base = (work_dir() / "line").string();
  LineField f(4.0, 65, EdgeExtension::power(1.0, 0.5));
  for (int i = 0; i < 65; ++i)
    f.samples()[i] = std::sqrt(std::abs(f.grid_x(i)));
  f.discontinuities() = {0.5};
  save_field(f, base);
  const LineField g = std::get<LineField>(load_field(base));
  CHECK(g.half_width() == 4.0);
  CHECK(g.extension().kind == EdgeExtension::Kind::PowerEven);
  CHECK(g.extension().alpha == 0.5);
  CHECK(g.discontinuities() == std::vector<double>{0.5});
  CHECK(g.samples() == f.samples());
}

TEST_CASE("trajectory round trip with provenance") {
  const auto dir = (work_dir() / "traj").string();
  Trajectory traj;
  traj.times = {0.1, 0.4};
  traj.torus_fields = {semigroup_apply(sample_torus(), 0.1),
                       semigroup_apply(sample_torus(), 0.4)};
  traj.initial_torus = sample_torus();
  PicardInfo info;
  info.iterations = 5;
  info.deltas = {1e-2, 1e-4, 1e-7, 1e-9, 1e-11};
  info.mild_residual = 2e-11;
  info.tol = 1e-10;
  info.converged = true;
  traj.provenance = info;

  save_trajectory(traj, dir);
  const Trajectory back = load_trajectory(dir);
  CHECK(back.times == traj.times);
  REQUIRE(back.initial_torus.has_value());
  CHECK(max_abs_diff(*back.initial_torus, *traj.initial_torus) == 0.0);
  const auto& pi = std::get<PicardInfo>(back.provenance);
  CHECK(pi.iterations == 5);
  CHECK(pi.deltas == info.deltas);
  CHECK(pi.mild_residual == info.mild_residual);
}

TEST_CASE("norm report emission") {
  NormReport rep;
  rep.norm_name = "B_R";
  rep.value = 0.25;
  rep.R = 1.0;
  rep.m = 0;
  rep.t_grid = {0.5, 1.0};
  rep.argmax_t = 1.0;
  rep.argmax_x = 0.125;

  const std::string js = norm_report_to_json(rep);
  CHECK(js.find("\"B_R\"") != std::string::npos);
  CHECK(js.find("argmax") != std::string::npos);

  CHECK(norm_report_csv_header() ==
        "norm_name,R,m,value,argmax_t,argmax_x,argmax_r");
  const std::string row = norm_report_csv_row(rep);
  CHECK(row.substr(0, 6) == "B_R,1,");

  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("with,comma") == "\"with,comma\"");
  CHECK(csv_quote("with\"quote") == "\"with\"\"quote\"");
}

TEST_CASE("manifest hashes are reproducible") {
  const auto dir = (work_dir() / "manifest").string();
  fs::create_directories(dir);
  {
    std::ofstream out(dir + "/data.csv");
    out << "a,b\n1,2\n";
  }
  write_manifest(dir, {"data.csv"});
  std::ifstream in1(dir + "/manifest.json");
  std::string first((std::istreambuf_iterator<char>(in1)),
                    std::istreambuf_iterator<char>());
  write_manifest(dir, {"data.csv"});
  std::ifstream in2(dir + "/manifest.json");
  std::string second((std::istreambuf_iterator<char>(in2)),
                     std::istreambuf_iterator<char>());
  CHECK(first == second);
  CHECK(first.find("fnv1a64") != std::string::npos);

  const char payload[] = "abc";
  CHECK(fnv1a64(payload, 3) == 0xe71fa2190541574bull);
}
