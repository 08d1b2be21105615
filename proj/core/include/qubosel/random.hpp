#pragma once

#include <cstdint>
#include <random>

namespace qubosel {

// splitmix64 step (Steele, Lea, Flood 2014). Used to derive independent,
// reproducible substream seeds from a user seed plus a stream index, so that
// e.g. annealer restarts and forest trees stay deterministic regardless of
// scheduling order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xd1342543de82ef95ULL + 1));
}

inline std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(substream_seed(seed, stream));
}

}  // namespace qubosel
