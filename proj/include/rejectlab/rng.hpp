#pragma once

#include <cstdint>
#include <random>

namespace rejectlab {

// SplitMix64 step; whitens seeds and derives substream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic generator. All sampling goes through this wrapper: mt19937_64
// output is fully specified by the standard, and we never use
// std::*_distribution (whose sequences are implementation-defined), so results
// are identical across platforms and compilers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0,1), 53 random bits
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

// Substream seed keyed by (master, a, b); the Monte Carlo driver uses
// (master seed, grid index, replication index) so every replication is
// independently and reproducibly seeded.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a + 0x243f6a8885a308d3ULL);
  h = splitmix64(s);
  s = h ^ (b + 0x452821e638d01377ULL);
  return splitmix64(s);
}

inline RngStream make_stream(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0) {
  return RngStream(derive_seed(master, a, b));
}

}  // namespace rejectlab
