#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "grouptest/thresholds.hpp"

namespace grouptest {

struct ProblemParams {
  std::int64_t p = 0;   // number of items
  std::int64_t k = 0;   // number of defectives
  std::int64_t n = 0;   // number of tests
  double rho = 0.0;     // crossover probability of the outcome channel
  double nu = 1.0;      // design density parameter
  Design design = Design::bern;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument on nonsense
};

// Sparse test design: columns[j] lists the tests item j participates in.
// Bernoulli columns are sorted and duplicate-free; near-constant-weight
// columns keep the multiset of sampled placements (duplicates included),
// while rows always deduplicate.
struct TestMatrix {
  std::int64_t n = 0;
  std::int64_t p = 0;
  Design design = Design::bern;
  double nu = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::int32_t>> columns;
  std::vector<std::vector<std::int32_t>> rows;  // distinct items per test

  void rebuild_rows();
};

// Each cell is 1 independently with probability nu/k. Requires nu > 0 and
// nu/k <= 1.
TestMatrix gen_bernoulli(const ProblemParams& params);

// Each item draws Delta = round(nu n / k) placements uniformly with
// replacement; Delta must come out >= 1.
TestMatrix gen_near_constant(const ProblemParams& params);

TestMatrix gen_matrix(const ProblemParams& params);

// Number of placements per item for the near-constant-weight design.
std::int64_t nc_delta(const ProblemParams& params);

struct DesignStats {
  std::int64_t n0 = 0;         // tests containing no defective placement
  std::int64_t degree1 = 0;    // tests containing exactly one (with multiplicity)
  std::int64_t repeat_defectives = 0;  // defectives with a repeated placement
};

// Placement counts are taken with multiplicity, so a defective placed twice
// in one test makes that test degree 2.
DesignStats design_stats(const TestMatrix& m,
                         const std::vector<std::int32_t>& defectives);

// Plain-text dump used by golden tests: header "n p design nu seed", then one
// line per item listing its test indices (with multiplicity for nc).
void dump_matrix(const TestMatrix& m, std::ostream& out);

}  // namespace grouptest
