#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grouptest/channel.hpp"
#include "grouptest/designs.hpp"

namespace grouptest {

// Thrown when an exhaustive search would exceed its candidate budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Number of tests whose outcome matches what candidate set s would produce
// through a noiseless OR. Maximizing this is equivalent to maximizing the
// likelihood for any fixed rho < 1/2.
std::int64_t count_correct(const TestMatrix& m,
                           const std::vector<std::uint8_t>& y,
                           const std::vector<std::int32_t>& s);

enum class DecodeStatus { unique, tie, none_satisfied, multiple_satisfied };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::none_satisfied;
  std::vector<std::int32_t> estimate;  // filled only when status == unique
  std::int64_t correct_tests = 0;      // score of the winning candidate
};

const char* decode_status_name(DecodeStatus s);

// Exhaustive maximum-likelihood decoding over all k-subsets. Refuses to
// enumerate more than ~2e6 candidates.
DecodeResult mle_exact(const TestMatrix& m, const std::vector<std::uint8_t>& y,
                       std::int64_t k, std::int64_t max_candidates = 2000000);

// Maximum likelihood restricted to sets within swap distance `radius` of the
// reference set (a genie-style device: the reference is normally the planted
// set). radius < 0 picks the default floor(k / ln k), clamped to [1, k].
DecodeResult mle_restricted(const TestMatrix& m,
                            const std::vector<std::uint8_t>& y,
                            const std::vector<std::int32_t>& reference,
                            std::int64_t radius = -1,
                            std::int64_t max_candidates = 2000000);

std::int64_t default_swap_radius(std::int64_t k);

struct InfoDensity {
  double value = 0.0;
  bool surrogate = false;  // true when the nc factorized form was used
};

// Log ratio (in nats) between the conditional outcome probability given the
// full candidate and the one with s_dif excluded, summed over tests. For the
// Bernoulli design the per-test marginal is exact; for nc a factorized
// surrogate with miss probability (1-1/n)^{sum of placements} is used.
InfoDensity info_density(const TestMatrix& m,
                         const std::vector<std::uint8_t>& y,
                         const std::vector<std::int32_t>& s_dif,
                         const std::vector<std::int32_t>& s_eq, double rho);

// Acceptance thresholds gamma_ell = ln C(p-k, ell) + ln(k / delta1)
// + ln C(k, ell) for ell in [ell_min, k] with ell_min = 1 + floor(k / ln k)
// clamped to k.
struct GammaSchedule {
  std::int64_t ell_min = 1;
  double delta1 = 0.1;
  std::vector<double> gamma;  // gamma[i] belongs to ell = ell_min + i

  double at(std::int64_t ell) const;
};

GammaSchedule gamma_schedule(std::int64_t p, std::int64_t k,
                             double delta1 = 0.1);

// Accepts a candidate iff every partition of size ell >= ell_min clears its
// threshold; reports whether zero, one, or several candidates are accepted.
DecodeResult threshold_decoder(const TestMatrix& m,
                               const std::vector<std::uint8_t>& y,
                               std::int64_t k, const GammaSchedule& schedule,
                               double rho,
                               std::int64_t max_candidates = 2000000);

// Two-part decoder: a candidate must strictly dominate every set within swap
// distance floor(k / ln k) by likelihood, and clear the info-density
// thresholds for all larger partitions.
DecodeResult hybrid_decoder(const TestMatrix& m,
                            const std::vector<std::uint8_t>& y, std::int64_t k,
                            const GammaSchedule& schedule, double rho,
                            std::int64_t max_candidates = 2000000);

// Column-wise baseline: keeps the k items with the smallest fraction of
// negative tests among their placements. Items whose fraction exceeds
// threshold_fraction are pushed behind all others. Ties break by index.
std::vector<std::int32_t> ncomp_baseline(const TestMatrix& m,
                                         const std::vector<std::uint8_t>& y,
                                         std::int64_t k,
                                         double threshold_fraction = 1.0);

}  // namespace grouptest
