#pragma once

#include <cstdint>
#include <vector>

#include "grouptest/designs.hpp"

namespace grouptest {

// OR of the defective columns, one bit per test.
std::vector<std::uint8_t> noiseless_outcomes(
    const TestMatrix& m, const std::vector<std::int32_t>& defectives);

// Flips each outcome independently with probability rho in [0, 1/2); the
// noise stream depends only on the seed, not on the design.
std::vector<std::uint8_t> apply_noise(const std::vector<std::uint8_t>& y0,
                                      double rho, std::uint64_t seed);

std::vector<std::uint8_t> simulate_outcomes(
    const TestMatrix& m, const std::vector<std::int32_t>& defectives,
    double rho, std::uint64_t noise_seed);

}  // namespace grouptest
