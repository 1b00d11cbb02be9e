#pragma once

#include <cstdint>
#include <random>

namespace gtpush {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent per-trial streams from a
// single master seed by counter-based splitting.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 1));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_stream_seed(master, stream));
}

// Uniform draw on [0,1) with 53 bits; independent of the standard library's
// distribution implementations so that streams are reproducible across builds.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gtpush
