// sgflow: experiment runner for the fourth-order surface-growth equation
//   d_t h + Lap^2 h + Lap |grad h|^2 = 0  (optionally driven by noise).
// Subcommands: kernel, picard, oracle, norms, gallery, selfsim, spde, verify.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance/acceptance.hpp"
#include "json.hpp"
#include "sgflow/gallery.hpp"
#include "sgflow/kernel.hpp"
#include "sgflow/norms.hpp"
#include "sgflow/snapshot.hpp"
#include "sgflow/solver.hpp"
#include "sgflow/stochastic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sgflow;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;

struct RunConfig {
  std::string subcommand;

  // kernel table
  int kernel_dim = 1;
  double z_max = 36.0;
  double dz = 1.0 / 256.0;
  double quad_tol = 1e-12;

  // torus / line discretization
  int dim = 1;
  int n = 512;
  double L = 2.0 * 3.14159265358979323846;
  double window = 40.0;
  int m = 2049;

  // solver
  std::string init = "sine:0.01,1";
  double R = 1.0;
  double tol = 1e-10;
  int max_iter = 25;
  int J = 64;
  std::string scheme = "etdrk2";
  double T = 1.0;
  int steps = 2048;
  bool linear_only = false;

  // norms / scans
  std::string norm = "B";
  std::string r_list = "1,0.5,0.25,0.125";
  int scan_levels = 40;
  int radius_levels = 8;
  int x_stride = 1;

  // gallery
  std::string item = "indicator";

  // selfsim
  double step_height = 0.1;
  std::string times = "0.01,0.16";

  // noise
  double sigma_decay = 0.0;
  int cutoff = 8;
  int paths = 4;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  std::string out_dir;
  int format_version = 1;
};

json config_to_json(const RunConfig& c) {
  return json{{"subcommand", c.subcommand},
              {"kernel_dim", c.kernel_dim},
              {"z_max", c.z_max},
              {"dz", c.dz},
              {"quad_tol", c.quad_tol},
              {"dim", c.dim},
              {"n", c.n},
              {"L", c.L},
              {"window", c.window},
              {"m", c.m},
              {"init", c.init},
              {"R", c.R},
              {"tol", c.tol},
              {"max_iter", c.max_iter},
              {"J", c.J},
              {"scheme", c.scheme},
              {"T", c.T},
              {"steps", c.steps},
              {"linear_only", c.linear_only},
              {"norm", c.norm},
              {"r_list", c.r_list},
              {"scan_levels", c.scan_levels},
              {"radius_levels", c.radius_levels},
              {"x_stride", c.x_stride},
              {"item", c.item},
              {"step_height", c.step_height},
              {"times", c.times},
              {"sigma_decay", c.sigma_decay},
              {"cutoff", c.cutoff},
              {"paths", c.paths},
              {"seed", c.seed},
              {"stream", c.stream},
              {"out_dir", c.out_dir},
              {"format_version", c.format_version}};
}

void config_from_json(const json& j, RunConfig& c) {
  auto opt = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  opt("subcommand", c.subcommand);
  opt("kernel_dim", c.kernel_dim);
  opt("z_max", c.z_max);
  opt("dz", c.dz);
  opt("quad_tol", c.quad_tol);
  opt("dim", c.dim);
  opt("n", c.n);
  opt("L", c.L);
  opt("window", c.window);
  opt("m", c.m);
  opt("init", c.init);
  opt("R", c.R);
  opt("tol", c.tol);
  opt("max_iter", c.max_iter);
  opt("J", c.J);
  opt("scheme", c.scheme);
  opt("T", c.T);
  opt("steps", c.steps);
  opt("linear_only", c.linear_only);
  opt("norm", c.norm);
  opt("r_list", c.r_list);
  opt("scan_levels", c.scan_levels);
  opt("radius_levels", c.radius_levels);
  opt("x_stride", c.x_stride);
  opt("item", c.item);
  opt("step_height", c.step_height);
  opt("times", c.times);
  opt("sigma_decay", c.sigma_decay);
  opt("cutoff", c.cutoff);
  opt("paths", c.paths);
  opt("seed", c.seed);
  opt("stream", c.stream);
  opt("out_dir", c.out_dir);
  opt("format_version", c.format_version);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty numeric list '" + text + "'");
  return out;
}

// Initial data spec: kind[:args]. Torus kinds: sine:AMP,WAVE
// square:HEIGHT  hhalf:SEED,EPS  bounded_uc:AMP,WAVE,BETA  zero.
TorusField parse_torus_init(const std::string& spec, int n, double L) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) args = parse_double_list(spec.substr(colon + 1));
  auto arg = [&](size_t i, double fallback) {
    return i < args.size() ? args[i] : fallback;
  };
  if (kind == "zero") return TorusField(1, n, L);
  if (kind == "sine") {
    GallerySpec g = GallerySpec::sine(arg(0, 0.01), static_cast<int>(arg(1, 1)));
    g.n = n;
    g.L = L;
    return make_torus(g);
  }
  if (kind == "square") {
    // Exact series of the periodic square wave with jumps at 0 and L/2.
    const double a = arg(0, 0.1);
    TorusField f(1, n, L);
    for (int k = 1; k < n / 2; k += 2) {
      const std::complex<double> c(0.0, a / (3.14159265358979323846 * k));
      f.coeffs()[k] = c;
      f.coeffs()[n - k] = std::conj(c);
    }
    return f;
  }
  if (kind == "hhalf") {
    GallerySpec g = GallerySpec::hhalf(static_cast<std::uint64_t>(arg(0, 1)),
                                       arg(1, 0.25));
    g.n = n;
    g.L = L;
    return make_torus(g);
  }
  if (kind == "bounded_uc") {
    GallerySpec g = GallerySpec::bounded_uc(arg(0, 1.0),
                                            static_cast<int>(arg(1, 1)),
                                            arg(2, 0.5));
    g.n = n;
    g.L = L;
    return make_torus(g);
  }
  throw std::invalid_argument("unknown torus initial data '" + spec + "'");
}

GallerySpec parse_gallery_item(const RunConfig& c) {
  const std::string& spec = c.item;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) args = parse_double_list(spec.substr(colon + 1));
  auto arg = [&](size_t i, double fallback) {
    return i < args.size() ? args[i] : fallback;
  };
  GallerySpec g;
  if (kind == "indicator") g = GallerySpec::indicator();
  else if (kind == "power") g = GallerySpec::power(arg(0, 0.5));
  else if (kind == "log") g = GallerySpec::log();
  else if (kind == "step") g = GallerySpec::step(arg(0, 0.1));
  else if (kind == "sine") g = GallerySpec::sine(arg(0, 1.0), static_cast<int>(arg(1, 1)));
  else if (kind == "linear") g = GallerySpec::linear(arg(0, 0.05));
  else if (kind == "hhalf")
    g = GallerySpec::hhalf(static_cast<std::uint64_t>(arg(0, 7)), arg(1, 0.25));
  else if (kind == "bounded_uc")
    g = GallerySpec::bounded_uc(arg(0, 1.0), static_cast<int>(arg(1, 1)), arg(2, 0.5));
  else throw std::invalid_argument("unknown gallery item '" + spec + "'");
  g.n = c.n;
  g.L = c.L;
  g.window = c.window;
  g.m = c.m;
  return g;
}

fs::path prepare_out_dir(RunConfig& c) {
  if (c.out_dir.empty()) {
    const char* env = std::getenv("SGFLOW_OUT");
    c.out_dir = ((env ? fs::path(env) : fs::path("sgflow_out")) / c.subcommand)
                    .string();
  }
  fs::create_directories(c.out_dir);
  return c.out_dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

// Writes the resolved config next to the artifacts and the manifest over
// everything produced.
void finalize_run(const RunConfig& c, const fs::path& dir,
                  std::vector<std::string> files) {
  write_text(dir / "resolved_config.json", config_to_json(c).dump(2) + "\n");
  files.push_back("resolved_config.json");
  write_manifest(dir.string(), files);
}

SupScanOptions scan_options(const RunConfig& c) {
  SupScanOptions o;
  o.time_levels = c.scan_levels;
  o.radius_levels = c.radius_levels;
  o.x_stride = c.x_stride;
  return o;
}

const KernelTable& shared_table() {
  static KernelTable t = build_default_kernel(1);
  return t;
}

int run_kernel(RunConfig& c) {
  const fs::path dir = prepare_out_dir(c);
  const KernelTable table = build_kernel(c.kernel_dim, c.z_max, c.dz, c.quad_tol);
  save_kernel(table, (dir / "kernel.bin").string());
  const KernelConstants kc = kernel_constants(table);
  const json constants{{"g0", kc.g0},
                       {"l1_g", kc.l1_g},
                       {"linf_g", kc.linf_g},
                       {"l1_grad_g", kc.l1_grad_g},
                       {"w31_g", kc.w31_g},
                       {"beta_half_quarter", kc.beta_half_quarter},
                       {"c4", kc.c4}};
  write_text(dir / "constants.json", constants.dump(2) + "\n");
  finalize_run(c, dir, {"kernel.bin", "constants.json"});
  std::cout << "kernel table: " << table.size() << " samples per order, g0="
            << kc.g0 << ", c4=" << kc.c4 << "\n";
  return 0;
}

int run_picard(RunConfig& c) {
  const fs::path dir = prepare_out_dir(c);
  const TorusField h0 = parse_torus_init(c.init, c.n, c.L);
  PicardOptions opts;
  opts.time_levels = c.J;
  opts.max_iter = c.max_iter;
  opts.tol = c.tol;
  const Trajectory traj = picard_solve(h0, c.R, opts);
  save_trajectory(traj, (dir / "trajectory").string());
  const auto& info = std::get<PicardInfo>(traj.provenance);
  const json report{{"iterations", info.iterations},
                    {"deltas", info.deltas},
                    {"mild_residual", info.mild_residual},
                    {"tol", info.tol},
                    {"converged", info.converged},
                    {"horizon", traj.horizon()}};
  write_text(dir / "convergence.json", report.dump(2) + "\n");
  finalize_run(c, dir, {"convergence.json"});
  std::cout << "picard converged in " << info.iterations
            << " iterations, mild residual " << info.mild_residual << "\n";
  return 0;
}

int run_oracle(RunConfig& c) {
  const fs::path dir = prepare_out_dir(c);
  const TorusField h0 = parse_torus_init(c.init, c.n, c.L);
  ReferenceOptions opts;
  opts.scheme = scheme_from_name(c.scheme);
  opts.nonlinearity_on = !c.linear_only;
  opts.store_times = parse_double_list(c.times);
  const Trajectory traj = reference_solve(h0, c.T, c.steps, opts);
  save_trajectory(traj, (dir / "trajectory").string());
  const auto& info = std::get<OracleInfo>(traj.provenance);
  const json report{{"steps", info.steps},
                    {"scheme", info.scheme},
                    {"step_halving_error", info.step_halving_error},
                    {"accuracy_warning", info.accuracy_warning}};
  write_text(dir / "oracle.json", report.dump(2) + "\n");
  finalize_run(c, dir, {"oracle.json"});
  std::cout << "oracle " << info.scheme << " with " << info.steps
            << " steps, halving error " << info.step_halving_error << "\n";
  return 0;
}

int run_norms(RunConfig& c) {
  const fs::path dir = prepare_out_dir(c);
  const GallerySpec item = parse_gallery_item(c);
  const SupScanOptions opts = scan_options(c);

  NormReport rep;
  if (c.norm == "B" || c.norm == "B0") {
    const BNormFlavor flavor = c.norm == "B" ? BNormFlavor::X : BNormFlavor::X0;
    if (item.on_torus()) {
      rep = b_norm(make_torus(item), c.R, flavor, opts);
    } else {
      rep = b_norm(make_line(item), shared_table(), c.R, flavor, opts);
    }
  } else if (c.norm == "BMO") {
    if (!item.on_torus())
      throw std::invalid_argument("the Carleson estimator needs torus data");
    rep = bmo_carleson(make_torus(item), opts);
  } else {
    throw std::invalid_argument("unknown norm '" + c.norm +
                                "' (expected B, B0 or BMO)");
  }
  write_text(dir / "report.json", norm_report_to_json(rep) + "\n");
  write_text(dir / "report.csv",
             norm_report_csv_header() + "\n" + norm_report_csv_row(rep) + "\n");
  finalize_run(c, dir, {"report.json", "report.csv"});
  std::cout << rep.norm_name << " = " << rep.value << "\n";
  return 0;
}

int run_gallery(RunConfig& c) {
  const fs::path dir = prepare_out_dir(c);
  const GallerySpec item = parse_gallery_item(c);
  const std::vector<double> rs = parse_double_list(c.r_list);
  const MembershipReport rep =
      membership_report(item, rs, shared_table(), scan_options(c));

  std::ostringstream csv;
  csv.precision(17);
  csv << "R,b_norm\n";
  for (const auto& [R, v] : rep.profile) csv << R << "," << v << "\n";
  write_text(dir / "profile.csv", csv.str());

  const json report{{"item", item.name()},
                    {"classification", membership_name(rep.classification)},
                    {"small_r_limit", rep.small_r_limit},
                    {"largest_r_value", rep.largest_r_value}};
  write_text(dir / "membership.json", report.dump(2) + "\n");
  finalize_run(c, dir, {"profile.csv", "membership.json"});
  std::cout << item.name() << ": " << membership_name(rep.classification)
            << " (small-R level " << rep.small_r_limit << ")\n";
  return 0;
}

int run_selfsim(RunConfig& c) {
  const fs::path dir = prepare_out_dir(c);
  const std::vector<double> times = parse_double_list(c.times);
  const double T = *std::max_element(times.begin(), times.end());

  RunConfig solve = c;
  solve.init = "square:" + std::to_string(c.step_height);
  const TorusField h0 = parse_torus_init(solve.init, c.n, c.L);
  PicardOptions opts;
  opts.time_levels = c.J;
  opts.max_iter = c.max_iter;
  opts.tol = c.tol;
  Trajectory traj = picard_solve(h0, std::pow(T, 0.25), opts);

  // Snap requested times onto the solver grid.
  std::vector<double> snapped;
  for (double t : times) {
    double best = traj.times.front();
    for (double tt : traj.times)
      if (std::abs(tt - t) < std::abs(best - t)) best = tt;
    snapped.push_back(best);
  }
  const SelfSimilarReport rep = self_similar_check(traj, snapped);

  std::ostringstream csv;
  csv.precision(17);
  csv << "z";
  for (double t : rep.times) csv << ",profile_t" << t;
  csv << "\n";
  for (size_t i = 0; i < rep.z_grid.size(); ++i) {
    csv << rep.z_grid[i];
    for (const auto& p : rep.profiles) csv << "," << p[i];
    csv << "\n";
  }
  write_text(dir / "profiles.csv", csv.str());
  const json report{{"times", rep.times},
                    {"collapse_rel_linf", rep.collapse_rel_linf},
                    {"profile_ode_residual", rep.profile_ode_residual}};
  write_text(dir / "report.json", report.dump(2) + "\n");
  finalize_run(c, dir, {"profiles.csv", "report.json"});
  std::cout << "collapse " << rep.collapse_rel_linf << ", profile residual "
            << rep.profile_ode_residual << "\n";
  return 0;
}

int run_spde(RunConfig& c) {
  const fs::path dir = prepare_out_dir(c);
  const std::vector<double> rs = parse_double_list(c.r_list);

  std::ostringstream profiles;
  profiles.precision(17);
  profiles << "path,R,x_norm\n";
  for (int p = 0; p < c.paths; ++p) {
    const NoiseSpec spec = NoiseSpec::isotropic(c.dim, c.n, c.L, c.sigma_decay,
                                                c.cutoff, c.seed, c.stream + p);
    for (const auto& [R, v] : z_regularity_profile(spec, rs, scan_options(c)))
      profiles << p << "," << R << "," << v << "\n";
  }
  write_text(dir / "profiles.csv", profiles.str());

  // Ensemble per-mode second moments at the horizon against the closed
  // form, over all paths.
  const double t_top = std::pow(rs.front(), 4.0);
  std::ostringstream stats;
  stats.precision(17);
  stats << "mode,t,empirical,exact,paths\n";
  TorusField proto(c.dim, c.n, c.L);
  std::vector<double> acc(proto.mode_count(), 0.0);
  for (int p = 0; p < c.paths; ++p) {
    const NoiseSpec spec = NoiseSpec::isotropic(c.dim, c.n, c.L, c.sigma_decay,
                                                c.cutoff, c.seed, c.stream + p);
    const Trajectory z = ou_convolution(spec, {t_top});
    for (size_t q = 0; q < acc.size(); ++q)
      acc[q] += std::norm(z.torus_fields[0].coeffs()[q]);
  }
  const NoiseSpec spec0 = NoiseSpec::isotropic(c.dim, c.n, c.L, c.sigma_decay,
                                               c.cutoff, c.seed, c.stream);
  for (size_t q = 0; q < acc.size(); ++q) {
    if (spec0.sigma[q] == 0.0) continue;
    const double k2 = proto.kappa_sq(q);
    const double k4 = k2 * k2;
    const double exact = spec0.sigma[q] * spec0.sigma[q] *
                         (1.0 - std::exp(-2.0 * t_top * k4)) / (2.0 * k4);
    stats << q << "," << t_top << "," << acc[q] / c.paths << "," << exact << ","
          << c.paths << "\n";
  }
  write_text(dir / "stats.csv", stats.str());
  finalize_run(c, dir, {"profiles.csv", "stats.csv"});
  std::cout << c.paths << " paths over " << rs.size() << " horizons\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // An optional JSON config supplies defaults; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) {
        std::cerr << json{{"error", std::string("cannot open config ") +
                                        argv[i + 1]}}
                  << "\n";
        return kExitUsage;
      }
      try {
        json j;
        in >> j;
        config_from_json(j, cfg);
      } catch (const std::exception& e) {
        std::cerr << json{{"error", std::string("bad config: ") + e.what()}}
                  << "\n";
        return kExitUsage;
      }
    }
  }

  CLI::App app{"surface-growth mild-solution toolbox"};
  app.set_help_all_flag("--help-all");
  std::string config_path;
  app.add_option("--config", config_path, "JSON config with defaults");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--n", cfg.n, "modes per axis (power of two)");
    sub->add_option("--L", cfg.L, "box length");
    sub->add_option("--dim", cfg.dim, "spatial dimension");
  };

  CLI::App* kernel = app.add_subcommand("kernel", "tabulate the heat kernel");
  kernel->add_option("--kernel-dim", cfg.kernel_dim, "1 or 2");
  kernel->add_option("--zmax", cfg.z_max, "truncation radius");
  kernel->add_option("--dz", cfg.dz, "sample spacing");
  kernel->add_option("--quad-tol", cfg.quad_tol, "quadrature tolerance");
  kernel->add_option("--out", cfg.out_dir, "output directory");

  CLI::App* picard = app.add_subcommand("picard", "fixed-point mild solve");
  add_common(picard);
  picard->add_option("--init", cfg.init, "initial data spec");
  picard->add_option("--R", cfg.R, "horizon parameter (solves on (0, R^4])");
  picard->add_option("--tol", cfg.tol, "fixed-point tolerance in the X_R norm");
  picard->add_option("--max-iter", cfg.max_iter, "iteration cap");
  picard->add_option("--J", cfg.J, "graded grid size");

  CLI::App* oracle = app.add_subcommand("oracle", "time-stepped reference solve");
  add_common(oracle);
  oracle->add_option("--init", cfg.init, "initial data spec");
  oracle->add_option("--T", cfg.T, "final time");
  oracle->add_option("--steps", cfg.steps, "step count");
  oracle->add_option("--scheme", cfg.scheme, "etdrk2 or imex2");
  oracle->add_option("--times", cfg.times, "comma list of store times");
  oracle->add_flag("--linear-only", cfg.linear_only, "disable the nonlinearity");

  CLI::App* norms = app.add_subcommand("norms", "norm estimators");
  add_common(norms);
  norms->add_option("--item", cfg.item, "data spec (gallery syntax)");
  norms->add_option("--norm", cfg.norm, "B, B0 or BMO");
  norms->add_option("--R", cfg.R, "horizon");
  norms->add_option("--levels", cfg.scan_levels, "geometric time levels");
  norms->add_option("--radius-levels", cfg.radius_levels, "geometric radii");
  norms->add_option("--x-stride", cfg.x_stride, "spatial scan stride");
  norms->add_option("--window", cfg.window, "line window half-width");
  norms->add_option("--m", cfg.m, "line sample count");

  CLI::App* gallery = app.add_subcommand("gallery", "membership reports");
  add_common(gallery);
  gallery->add_option("--item", cfg.item, "indicator, power:A, log, step:A, ...");
  gallery->add_option("--Rs", cfg.r_list, "decreasing comma list of radii");
  gallery->add_option("--levels", cfg.scan_levels, "geometric time levels");
  gallery->add_option("--window", cfg.window, "line window half-width");
  gallery->add_option("--m", cfg.m, "line sample count");

  CLI::App* selfsim = app.add_subcommand("selfsim", "self-similar collapse");
  add_common(selfsim);
  selfsim->add_option("--a", cfg.step_height, "step height");
  selfsim->add_option("--times", cfg.times, "comparison times");
  selfsim->add_option("--J", cfg.J, "graded grid size");
  selfsim->add_option("--tol", cfg.tol, "fixed-point tolerance");
  selfsim->add_option("--max-iter", cfg.max_iter, "iteration cap");

  CLI::App* spde = app.add_subcommand("spde", "stochastic convolution studies");
  add_common(spde);
  spde->add_option("--sigma-decay", cfg.sigma_decay, "spectral decay gamma");
  spde->add_option("--cutoff", cfg.cutoff, "highest forced mode");
  spde->add_option("--paths", cfg.paths, "ensemble size");
  spde->add_option("--seed", cfg.seed, "RNG seed");
  spde->add_option("--stream", cfg.stream, "first substream index");
  spde->add_option("--Rs", cfg.r_list, "decreasing comma list of horizons");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  (void)verify;

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << json{{"error", e.what()}} << "\n";
    return kExitUsage;
  }

  // Spectral decay default: white up to the cutoff in d=1, one inverse
  // power in d=2 (keeps the forced gradient bounded).
  if (spde->parsed() && spde->count("--sigma-decay") == 0 && cfg.dim == 2)
    cfg.sigma_decay = 1.0;

  CLI::App* active = nullptr;
  for (CLI::App* sub : {kernel, picard, oracle, norms, gallery, selfsim, spde,
                        verify})
    if (sub->parsed()) active = sub;
  if (!active) {
    std::cerr << json{{"error", "no subcommand given; see --help"}} << "\n";
    return kExitUsage;
  }
  cfg.subcommand = active->get_name();

  try {
    if (active == kernel) return run_kernel(cfg);
    if (active == picard) return run_picard(cfg);
    if (active == oracle) return run_oracle(cfg);
    if (active == norms) return run_norms(cfg);
    if (active == gallery) return run_gallery(cfg);
    if (active == selfsim) return run_selfsim(cfg);
    if (active == spde) return run_spde(cfg);
    if (active == verify) return sgflow::acceptance::run_all(std::cout);
  } catch (const PicardDivergence& e) {
    json payload{{"error", e.what()}, {"deltas", e.deltas()}};
    std::cerr << payload << "\n";
    return kExitDiverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", e.what()}} << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}} << "\n";
    return 1;
  }
  return 0;
}
