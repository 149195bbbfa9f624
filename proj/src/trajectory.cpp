#include "sgflow/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace sgflow {

void Trajectory::validate() const {
  if (times.empty()) throw std::runtime_error("trajectory has no time nodes");
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0) throw std::runtime_error("trajectory times must be positive");
    if (i > 0 && times[i] <= times[i - 1])
      throw std::runtime_error("trajectory times must be strictly increasing");
  }
  const bool torus = !torus_fields.empty();
  const bool line = !line_fields.empty();
  if (torus == line)
    throw std::runtime_error("trajectory must hold exactly one field family");
  if (torus && torus_fields.size() != times.size())
    throw std::runtime_error("trajectory field count mismatch");
  if (line && line_fields.size() != times.size())
    throw std::runtime_error("trajectory field count mismatch");
  if (!line_gradients.empty() && line_gradients.size() != times.size())
    throw std::runtime_error("trajectory gradient count mismatch");
}

std::vector<double> graded_grid(double T, int levels) {
  if (T <= 0 || levels < 1) throw std::invalid_argument("bad graded grid parameters");
  std::vector<double> t(levels);
  for (int j = 1; j <= levels; ++j) {
    const double s = static_cast<double>(j) / levels;
    const double s2 = s * s;
    t[j - 1] = T * s2 * s2;
  }
  return t;
}

std::vector<double> geometric_grid(double T, int levels, double ratio) {
  if (T <= 0 || levels < 0 || ratio <= 1.0)
    throw std::invalid_argument("bad geometric grid parameters");
  std::vector<double> t(levels + 1);
  for (int j = 0; j <= levels; ++j) t[levels - j] = T * std::pow(ratio, -j);
  return t;
}

}  // namespace sgflow
