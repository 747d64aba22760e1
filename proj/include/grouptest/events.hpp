#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "grouptest/designs.hpp"

namespace grouptest {

// Counts for a removal set J inside the planted set S. "Masked" tests are
// those containing an item of J but none of S \ J; the empty tests contain
// no item of S at all. Placement multiplicity matters only for m_prime,
// which drops masked tests where some J-item lands twice.
struct MaskingStats {
  std::int64_t mj = 0;   // masked tests
  std::int64_t mj0 = 0;  // masked with outcome 0
  std::int64_t mj1 = 0;  // masked with outcome 1
  std::int64_t n0 = 0;   // tests free of S
  std::int64_t n00 = 0;  // free with outcome 0
  std::int64_t n01 = 0;  // free with outcome 1
  std::int64_t m_prime = 0;
};

MaskingStats masking_stats(const TestMatrix& m,
                           const std::vector<std::uint8_t>& y,
                           const std::vector<std::int32_t>& s,
                           const std::vector<std::int32_t>& j_subset);

// Normalized coordinates of a masking event: C = mj k / (n nu e^-nu ell) and
// zeta = mj0 / mj. The integer fields are authoritative; (0,0) when mj = 0.
struct FeasiblePair {
  std::int64_t ell = 0;
  std::int64_t mj = 0;
  std::int64_t mj0 = 0;
  double C = 0.0;
  double zeta = 0.0;
};

FeasiblePair derive_feasible_pair(const MaskingStats& st, std::int64_t ell,
                                  std::int64_t n, std::int64_t k, double nu);

// Gains of swapping J for J': g1 counts tests in (free-with-1 or
// masked-with-1) hit by J', g2 the same over outcome-0 tests. The score
// difference of the swapped set is exactly g1 - g2 - (mj1 - mj0).
struct GainCounts {
  std::int64_t g1 = 0;
  std::int64_t g2 = 0;
};

GainCounts g_counts(const TestMatrix& m, const std::vector<std::uint8_t>& y,
                    const std::vector<std::int32_t>& s,
                    const std::vector<std::int32_t>& j_subset,
                    const std::vector<std::int32_t>& j_prime);

struct Witness {
  std::int64_t ell = 0;
  double C = 0.0;
  double zeta = 0.0;
  std::vector<std::int32_t> j_subset;
  std::vector<std::int32_t> j_prime;
  std::int64_t g1 = 0;
  std::int64_t g2 = 0;
  std::int64_t margin = 0;  // score(swapped) - score(planted), exact
};

// Exhaustive audit of the swap failure characterization around the planted
// set: enumerates every (J, J') pair up to the radius, records nonnegative
// margins as witnesses, and cross-checks each margin against a direct
// rescore of the swapped set.
struct FailureCheck {
  bool decoder_failed = false;        // restricted MLE missed the planted set
  bool strict_witness_found = false;  // some margin > 0
  bool geq_witness_found = false;     // some margin >= 0
  bool identity_ok = true;            // swap identity held on every pair
  std::int64_t pairs_checked = 0;
  std::vector<Witness> witnesses;     // margin >= 0, capped
};

FailureCheck check_failure_conditions(const TestMatrix& m,
                                      const std::vector<std::uint8_t>& y,
                                      const std::vector<std::int32_t>& s,
                                      std::int64_t radius = -1,
                                      std::int64_t max_witnesses = 64);

// Distribution of (mj, mj0) over all removal sets of size ell: sum of counts
// is C(k, ell).
struct KCountEntry {
  std::int64_t mj = 0;
  std::int64_t mj0 = 0;
  std::int64_t count = 0;
  double C = 0.0;
  double zeta = 0.0;
};

std::vector<KCountEntry> enumerate_k_czeta(const TestMatrix& m,
                                           const std::vector<std::uint8_t>& y,
                                           const std::vector<std::int32_t>& s,
                                           std::int64_t ell);

// One JSON object per line, keys in the order
// ell, C, zeta, J, Jprime, G1, G2, margin.
void dump_witnesses(const std::vector<Witness>& ws, std::ostream& out);

}  // namespace grouptest
