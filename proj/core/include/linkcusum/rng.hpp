#pragma once

#include <cstdint>
#include <random>

namespace linkcusum {

// SplitMix64 finalizer. Used to derive independent engine seeds from a
// (master seed, stream index) pair so that replication i produces the same
// draws no matter which thread runs it or in which order.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::uint64_t index) noexcept {
  return splitmix64(base ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

inline std::mt19937_64 make_stream(std::uint64_t base, std::uint64_t index) {
  return std::mt19937_64{derive_seed(base, index)};
}

// 64 bits of system entropy, for runs where the caller gave no seed.
inline std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace linkcusum
