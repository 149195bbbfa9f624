#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sgflow/field.hpp"

namespace sgflow {

struct PicardInfo {
  int iterations = 0;
  std::vector<double> deltas;  // X_R distance between consecutive iterates
  double mild_residual = 0.0;  // X_R residual of the returned fixed point
  double tol = 0.0;
  bool converged = false;
};

struct OracleInfo {
  int steps = 0;
  std::string scheme;
  double step_halving_error = -1.0;  // negative when not measured
  bool accuracy_warning = false;
};

struct StochasticInfo {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::string mode;
};

using Provenance =
    std::variant<std::monostate, PicardInfo, OracleInfo, StochasticInfo>;

// Time-indexed family of fields on a grid over (0, T], plus the initial
// field and provenance of the producing computation. Line trajectories may
// carry precomputed gradient fields alongside the states.
struct Trajectory {
  std::vector<double> times;
  std::vector<TorusField> torus_fields;
  std::vector<LineField> line_fields;
  std::vector<LineField> line_gradients;
  std::optional<TorusField> initial_torus;
  std::optional<LineField> initial_line;
  Provenance provenance;

  bool is_torus() const { return !torus_fields.empty(); }
  size_t size() const { return times.size(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  void validate() const;
};

// Quartically graded grid t_j = T (j/J)^4, j = 1..J: spacing ~ T j^3 / J^4
// near zero resolves the t^{-1/4} gradient blow-up of rough data.
std::vector<double> graded_grid(double T, int levels);

// Geometric grid T ratio^{-j}, j = levels..0, ascending.
std::vector<double> geometric_grid(double T, int levels, double ratio = 2.0);

}  // namespace sgflow
