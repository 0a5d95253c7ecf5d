#ifndef NBPK_RANDOM_HPP
#define NBPK_RANDOM_HPP

#include <cstdint>
#include <random>

namespace nbpk {

using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Engine seeded from a (seed, stream) pair, so replications with the same
/// base seed get decorrelated streams.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace nbpk

#endif  // NBPK_RANDOM_HPP
