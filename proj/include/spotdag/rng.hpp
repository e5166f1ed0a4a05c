#pragma once

// Portable variate transforms over std::mt19937_64, whose output sequence is fixed
// by the standard. The std:: distributions are implementation-defined, so seeded
// experiments use these instead to stay reproducible across toolchains.

#include <cmath>
#include <cstdint>
#include <random>

namespace spotdag::rng {

using Engine = std::mt19937_64;

/// Uniform in [0, 1).
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline double uniform(Engine& g, double lo, double hi) { return lo + (hi - lo) * uniform01(g); }

inline double exponential(Engine& g, double mean) { return -mean * std::log1p(-uniform01(g)); }

inline bool coin(Engine& g, double p = 0.5) { return uniform01(g) < p; }

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Engine& g, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(uniform01(g) * static_cast<double>(span)) %
                                        span);
}

/// Independent stream for a (seed, stream) pair.
inline Engine stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  return Engine(seq);
}

}  // namespace spotdag::rng
