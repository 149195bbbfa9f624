#include "sgflow/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sgflow {

namespace {

struct PlanSlot {
  fftw_plan plan = nullptr;
  fftw_complex* scratch = nullptr;
  size_t count = 0;
};

std::mutex g_mutex;
std::map<std::tuple<int, int, int>, PlanSlot> g_plans;

PlanSlot& plan_for(int dim, int n, int sign) {
  auto key = std::make_tuple(dim, n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  PlanSlot slot;
  slot.count = dim == 1 ? static_cast<size_t>(n) : static_cast<size_t>(n) * n;
  slot.scratch = fftw_alloc_complex(slot.count);
  if (!slot.scratch) throw std::bad_alloc();
  slot.plan = dim == 1
                  ? fftw_plan_dft_1d(n, slot.scratch, slot.scratch, sign,
                                     FFTW_ESTIMATE)
                  : fftw_plan_dft_2d(n, n, slot.scratch, slot.scratch, sign,
                                     FFTW_ESTIMATE);
  if (!slot.plan) throw std::runtime_error("fftw plan creation failed");
  return g_plans.emplace(key, slot).first->second;
}

}  // namespace

void dft(std::vector<std::complex<double>>& data, int dim, int n, int sign) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dft: dim must be 1 or 2");
  const size_t count = dim == 1 ? static_cast<size_t>(n) : static_cast<size_t>(n) * n;
  if (data.size() != count) throw std::invalid_argument("dft: size mismatch");
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSlot& slot = plan_for(dim, n, sign);
  // std::complex<double> is layout-compatible with fftw_complex.
  std::memcpy(static_cast<void*>(slot.scratch),
              static_cast<const void*>(data.data()), count * sizeof(fftw_complex));
  fftw_execute(slot.plan);
  std::memcpy(static_cast<void*>(data.data()),
              static_cast<const void*>(slot.scratch), count * sizeof(fftw_complex));
}

}  // namespace sgflow
