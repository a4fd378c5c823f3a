#pragma once

#include <cstdint>
#include <random>

namespace coopdyn {

using Rng = std::mt19937_64;

/// Generator for stream `stream` of a run seeded with `seed`. Streams are
/// independent of how many other streams are drawn or in which order.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Uniform draw on [0, 1) from the top 53 bits; identical across standard libraries.
inline double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace coopdyn
