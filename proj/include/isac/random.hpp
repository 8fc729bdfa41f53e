#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace isac {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream derivation. The seed of a sub-stream is obtained by
/// folding each counter into the master seed through SplitMix64:
///
///   s0 = splitmix64(master)
///   s(k+1) = splitmix64(s(k) ^ splitmix64(counter_k + k + 1))
///
/// Every (experiment element, grid point, trial) tuple therefore owns an
/// independent stream whose contents do not depend on evaluation order or on
/// the number of worker threads.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> counters) noexcept {
  std::uint64_t s = splitmix64(master);
  std::uint64_t k = 0;
  for (std::uint64_t c : counters) {
    ++k;
    s = splitmix64(s ^ splitmix64(c + k));
  }
  return s;
}

inline Rng derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> counters) {
  return Rng(derive_seed(master, counters));
}

/// Stream tags used by the experiment harness.
namespace stream_tag {
inline constexpr std::uint64_t kGa = 1;
inline constexpr std::uint64_t kRandomDeployment = 2;
inline constexpr std::uint64_t kRmse = 3;
}  // namespace stream_tag

/// Uniform draw on [0, 1).
inline double uniform01(Rng& rng) {
  // generate_canonical may round up to 1.0; fold that back.
  double u = std::generate_canonical<double, 53>(rng);
  return u < 1.0 ? u : 0x1.fffffffffffffp-1;
}

}  // namespace isac
