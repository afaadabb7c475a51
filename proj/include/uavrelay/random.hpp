#pragma once
#include <cstdint>
#include <random>

namespace uavrelay {

// SplitMix64 finalizer; seeds one mt19937_64 stream per trial
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed + (trial + 1) * 0x9E3779B97F4A7C15ull));
}

// [0, 1) from the top 53 bits; std distributions are not portable across libraries
inline double uniform01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

}  // namespace uavrelay
