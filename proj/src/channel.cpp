#include "grouptest/channel.hpp"

#include <stdexcept>

#include "grouptest/rng.hpp"

namespace grouptest {

std::vector<std::uint8_t> noiseless_outcomes(
    const TestMatrix& m, const std::vector<std::int32_t>& defectives) {
  std::vector<std::uint8_t> y(static_cast<std::size_t>(m.n), 0);
  for (std::int32_t j : defectives) {
    if (j < 0 || j >= m.p)
      throw std::invalid_argument("noiseless_outcomes: item out of range");
    for (std::int32_t t : m.columns[static_cast<std::size_t>(j)])
      y[static_cast<std::size_t>(t)] = 1;
  }
  return y;
}

std::vector<std::uint8_t> apply_noise(const std::vector<std::uint8_t>& y0,
                                      double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho < 0.5))
    throw std::invalid_argument("apply_noise: rho must lie in [0, 1/2)");
  std::vector<std::uint8_t> y(y0);
  Rng rng(substream_seed(seed, 0x6e6f697365ULL));
  for (auto& bit : y)
    if (rng.next_bernoulli(rho)) bit ^= 1;
  return y;
}

std::vector<std::uint8_t> simulate_outcomes(
    const TestMatrix& m, const std::vector<std::int32_t>& defectives,
    double rho, std::uint64_t noise_seed) {
  return apply_noise(noiseless_outcomes(m, defectives), rho, noise_seed);
}

}  // namespace grouptest
