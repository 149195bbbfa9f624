#pragma once

#include <cstdint>
#include <utility>

namespace sgflow {

// SplitMix64 finalizer used as a counter-based pseudorandom function: the
// same key tuple always yields the same draw, independent of call order,
// which makes parallel ensembles reproducible.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t key_hash(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t mode, std::uint64_t step) {
  return mix64(seed + mix64(stream + mix64(mode + mix64(step))));
}

// Two independent standard normal draws keyed by (seed, stream, mode, step).
std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t mode, std::uint64_t step);

}  // namespace sgflow
