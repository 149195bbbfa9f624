#include "sgflow/snapshot.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sgflow {

namespace {

using nlohmann::json;

void write_doubles(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size()) * 8);
  if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<double> read_doubles(const std::string& path, size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> values(count);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(count) * 8);
  if (!in) throw std::runtime_error("truncated data file " + path);
  return values;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

json extension_to_json(const EdgeExtension& e) {
  const char* kind = "constant";
  switch (e.kind) {
    case EdgeExtension::Kind::Constant: kind = "constant"; break;
    case EdgeExtension::Kind::PowerEven: kind = "power"; break;
    case EdgeExtension::Kind::Linear: kind = "linear"; break;
    case EdgeExtension::Kind::Logarithmic: kind = "log"; break;
  }
  return json{{"kind", kind},
              {"left_value", e.left_value},
              {"right_value", e.right_value},
              {"coeff", e.coeff},
              {"alpha", e.alpha}};
}

EdgeExtension extension_from_json(const json& j) {
  EdgeExtension e;
  const std::string kind = j.at("kind");
  if (kind == "constant") e.kind = EdgeExtension::Kind::Constant;
  else if (kind == "power") e.kind = EdgeExtension::Kind::PowerEven;
  else if (kind == "linear") e.kind = EdgeExtension::Kind::Linear;
  else if (kind == "log") e.kind = EdgeExtension::Kind::Logarithmic;
  else throw std::runtime_error("unknown edge extension kind '" + kind + "'");
  e.left_value = j.at("left_value");
  e.right_value = j.at("right_value");
  e.coeff = j.at("coeff");
  e.alpha = j.at("alpha");
  return e;
}

}  // namespace

void save_field(const TorusField& f, const std::string& base_path, double time) {
  json meta{{"format_version", 1},
            {"type", "torus"},
            {"dim", f.dim()},
            {"n", f.modes_per_axis()},
            {"L", f.box_length()},
            {"data_file", std::filesystem::path(base_path + ".f64").filename().string()}};
  if (time >= 0) meta["time"] = time;
  std::vector<double> raw(2 * f.mode_count());
  for (size_t i = 0; i < f.mode_count(); ++i) {
    raw[2 * i] = f.coeffs()[i].real();
    raw[2 * i + 1] = f.coeffs()[i].imag();
  }
  write_json(base_path + ".json", meta);
  write_doubles(base_path + ".f64", raw);
}

void save_field(const LineField& f, const std::string& base_path, double time) {
  json meta{{"format_version", 1},
            {"type", "line"},
            {"m", f.sample_count()},
            {"W", f.half_width()},
            {"extension", extension_to_json(f.extension())},
            {"discontinuities", f.discontinuities()},
            {"data_file", std::filesystem::path(base_path + ".f64").filename().string()}};
  if (time >= 0) meta["time"] = time;
  write_json(base_path + ".json", meta);
  write_doubles(base_path + ".f64", f.samples());
}

GalleryField load_field(const std::string& base_path) {
  const json meta = read_json(base_path + ".json");
  if (meta.at("format_version") != 1)
    throw std::runtime_error("unsupported snapshot format version");
  const std::string type = meta.at("type");
  const std::string data_path =
      (std::filesystem::path(base_path).parent_path() /
       std::string(meta.at("data_file")))
          .string();
  if (type == "torus") {
    const int dim = meta.at("dim");
    const int n = meta.at("n");
    const double L = meta.at("L");
    TorusField f(dim, n, L);
    auto raw = read_doubles(data_path, 2 * f.mode_count());
    for (size_t i = 0; i < f.mode_count(); ++i)
      f.coeffs()[i] = {raw[2 * i], raw[2 * i + 1]};
    f.validate();
    return f;
  }
  if (type == "line") {
    const int m = meta.at("m");
    const double W = meta.at("W");
    LineField f(W, m, extension_from_json(meta.at("extension")));
    f.samples() = read_doubles(data_path, m);
    if (meta.contains("discontinuities"))
      f.discontinuities() = meta.at("discontinuities").get<std::vector<double>>();
    f.validate();
    return f;
  }
  throw std::runtime_error("unknown snapshot type '" + type + "'");
}

namespace {

json provenance_to_json(const Provenance& p) {
  if (const auto* pi = std::get_if<PicardInfo>(&p)) {
    return json{{"kind", "picard"},
                {"iterations", pi->iterations},
                {"deltas", pi->deltas},
                {"mild_residual", pi->mild_residual},
                {"tol", pi->tol},
                {"converged", pi->converged}};
  }
  if (const auto* oi = std::get_if<OracleInfo>(&p)) {
    return json{{"kind", "oracle"},
                {"steps", oi->steps},
                {"scheme", oi->scheme},
                {"step_halving_error", oi->step_halving_error},
                {"accuracy_warning", oi->accuracy_warning}};
  }
  if (const auto* si = std::get_if<StochasticInfo>(&p)) {
    return json{{"kind", "stochastic"},
                {"seed", si->seed},
                {"stream_id", si->stream_id},
                {"mode", si->mode}};
  }
  return json{{"kind", "none"}};
}

Provenance provenance_from_json(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "picard") {
    PicardInfo pi;
    pi.iterations = j.at("iterations");
    pi.deltas = j.at("deltas").get<std::vector<double>>();
    pi.mild_residual = j.at("mild_residual");
    pi.tol = j.at("tol");
    pi.converged = j.at("converged");
    return pi;
  }
  if (kind == "oracle") {
    OracleInfo oi;
    oi.steps = j.at("steps");
    oi.scheme = j.at("scheme");
    oi.step_halving_error = j.at("step_halving_error");
    oi.accuracy_warning = j.at("accuracy_warning");
    return oi;
  }
  if (kind == "stochastic") {
    StochasticInfo si;
    si.seed = j.at("seed");
    si.stream_id = j.at("stream_id");
    si.mode = j.at("mode");
    return si;
  }
  return std::monostate{};
}

std::string snap_name(size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "state_%04zu", i);
  return buf;
}

}  // namespace

void save_trajectory(const Trajectory& traj, const std::string& dir) {
  traj.validate();
  std::filesystem::create_directories(dir);
  json meta{{"format_version", 1},
            {"times", traj.times},
            {"family", traj.is_torus() ? "torus" : "line"},
            {"provenance", provenance_to_json(traj.provenance)},
            {"has_initial",
             traj.initial_torus.has_value() || traj.initial_line.has_value()},
            {"has_gradients", !traj.line_gradients.empty()}};
  write_json(dir + "/trajectory.json", meta);
  for (size_t i = 0; i < traj.size(); ++i) {
    const std::string base = dir + "/" + snap_name(i);
    if (traj.is_torus()) {
      save_field(traj.torus_fields[i], base, traj.times[i]);
    } else {
      save_field(traj.line_fields[i], base, traj.times[i]);
      if (!traj.line_gradients.empty())
        save_field(traj.line_gradients[i], base + "_grad", traj.times[i]);
    }
  }
  if (traj.initial_torus) save_field(*traj.initial_torus, dir + "/initial", 0.0);
  if (traj.initial_line) save_field(*traj.initial_line, dir + "/initial", 0.0);
}

Trajectory load_trajectory(const std::string& dir) {
  const json meta = read_json(dir + "/trajectory.json");
  Trajectory traj;
  traj.times = meta.at("times").get<std::vector<double>>();
  traj.provenance = provenance_from_json(meta.at("provenance"));
  const bool torus = meta.at("family") == "torus";
  const bool gradients = meta.value("has_gradients", false);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const std::string base = dir + "/" + snap_name(i);
    GalleryField f = load_field(base);
    if (torus) {
      traj.torus_fields.push_back(std::get<TorusField>(f));
    } else {
      traj.line_fields.push_back(std::get<LineField>(f));
      if (gradients)
        traj.line_gradients.push_back(std::get<LineField>(load_field(base + "_grad")));
    }
  }
  if (meta.value("has_initial", false)) {
    GalleryField f = load_field(dir + "/initial");
    if (torus) traj.initial_torus = std::get<TorusField>(f);
    else traj.initial_line = std::get<LineField>(f);
  }
  traj.validate();
  return traj;
}

std::string norm_report_to_json(const NormReport& rep) {
  json j{{"norm_name", rep.norm_name},
         {"value", rep.value},
         {"R", std::isinf(rep.R) ? json("inf") : json(rep.R)},
         {"m", rep.m},
         {"t_grid", rep.t_grid},
         {"r_grid", rep.r_grid},
         {"x_points", rep.x_points},
         {"argmax", {{"t", rep.argmax_t}, {"x", rep.argmax_x}, {"r", rep.argmax_r}}}};
  return j.dump(2);
}

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string norm_report_csv_header() {
  return "norm_name,R,m,value,argmax_t,argmax_x,argmax_r";
}

std::string norm_report_csv_row(const NormReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << csv_quote(rep.norm_name) << "," << rep.R << "," << rep.m << ","
     << rep.value << "," << rep.argmax_t << "," << rep.argmax_x << ","
     << rep.argmax_r;
  return os.str();
}

std::uint64_t fnv1a64(const void* data, size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& files) {
  json entries = json::array();
  for (const auto& rel : files) {
    const std::string full = dir + "/" + rel;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(full)));
    entries.push_back(json{{"path", rel},
                           {"bytes", std::filesystem::file_size(full)},
                           {"fnv1a64", hex}});
  }
  write_json(dir + "/manifest.json", json{{"format_version", 1}, {"files", entries}});
}

}  // namespace sgflow
