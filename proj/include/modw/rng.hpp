#pragma once

#include <cstdint>

namespace modw {

/// Seed of the `counter`-th independent stream derived from a master seed
/// (SplitMix64 finalizer applied to master + counter * golden gamma).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter)
{
  std::uint64_t z = master + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace modw
