#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace grouptest {

// Deterministic 64-bit generator with the splitmix64 transition. Chosen over
// std::mt19937_64 + std::uniform_*_distribution because the standard
// distributions are not bit-reproducible across library implementations and
// byte-identical output for a given seed is part of the contract here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0, 1, ..., bound-1}, rejection sampled so it is unbiased.
  std::int64_t next_below(std::int64_t bound) {
    if (bound <= 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b + 1) % b;
    std::uint64_t u = next_u64();
    while (u > limit) u = next_u64();
    return static_cast<std::int64_t>(u % b);
  }

  bool next_bernoulli(double q) { return next_double() < q; }

 private:
  std::uint64_t state_;
};

// Seed for an independent substream (e.g. one matrix column). Mixes the root
// seed and the index through the splitmix64 output function twice so streams
// for nearby (root, index) pairs do not overlap in practice.
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t index) {
  Rng h(root ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  std::uint64_t s = h.next_u64();
  return s ^ h.next_u64();
}

}  // namespace grouptest
