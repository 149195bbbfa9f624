#pragma once

#include <complex>
#include <vector>

namespace sgflow {

// In-place complex DFT over all axes of a 1-D (size n) or 2-D (row-major
// n x n) array. sign -1 is the forward transform (sum with e^{-i...}),
// sign +1 the unnormalized inverse. Plans are cached per (dim, n, sign);
// execution is deterministic for fixed input.
void dft(std::vector<std::complex<double>>& data, int dim, int n, int sign);

}  // namespace sgflow
