#pragma once

#include <cstdint>
#include <random>

namespace dyadic {

using Rng = std::mt19937_64;

/// Mixes a master seed with a stream counter (splitmix64 finalizer applied
/// twice), so stream r of a run can be reproduced without replaying streams
/// 0..r-1.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

// Fair coin used by the warm-start episodes.
inline int bernoulli_half(Rng& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
}

}  // namespace dyadic
