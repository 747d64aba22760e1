#include "grouptest/designs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "grouptest/rng.hpp"

namespace grouptest {

void ProblemParams::validate() const {
  if (p < 2) throw std::invalid_argument("params: p must be at least 2");
  if (k < 1 || k >= p) throw std::invalid_argument("params: need 1 <= k < p");
  if (n < 1) throw std::invalid_argument("params: n must be positive");
  if (!(rho >= 0.0 && rho < 0.5))
    throw std::invalid_argument("params: rho must lie in [0, 1/2)");
  if (!(nu > 0.0)) throw std::invalid_argument("params: nu must be positive");
}

void TestMatrix::rebuild_rows() {
  rows.assign(static_cast<std::size_t>(n), {});
  for (std::int64_t j = 0; j < p; ++j) {
    std::int32_t last = -1;
    for (std::int32_t t : columns[static_cast<std::size_t>(j)]) {
      if (t == last) continue;  // columns are sorted; skip repeat placements
      rows[static_cast<std::size_t>(t)].push_back(static_cast<std::int32_t>(j));
      last = t;
    }
  }
}

TestMatrix gen_bernoulli(const ProblemParams& params) {
  params.validate();
  const double q = params.nu / static_cast<double>(params.k);
  if (q > 1.0)
    throw std::invalid_argument("gen_bernoulli: nu/k exceeds 1");

  TestMatrix m;
  m.n = params.n;
  m.p = params.p;
  m.design = Design::bern;
  m.nu = params.nu;
  m.seed = params.seed;
  m.columns.resize(static_cast<std::size_t>(params.p));
  const double log1mq = q < 1.0 ? std::log1p(-q) : 0.0;
  for (std::int64_t j = 0; j < params.p; ++j) {
    Rng rng(substream_seed(params.seed, static_cast<std::uint64_t>(j)));
    auto& col = m.columns[static_cast<std::size_t>(j)];
    if (q >= 1.0) {
      col.resize(static_cast<std::size_t>(params.n));
      for (std::int64_t t = 0; t < params.n; ++t)
        col[static_cast<std::size_t>(t)] = static_cast<std::int32_t>(t);
      continue;
    }
    // Geometric jumps between successive 1-cells; O(weight) per column.
    std::int64_t t = -1;
    while (true) {
      const double u = rng.next_double();
      const double jump = std::floor(std::log1p(-u) / log1mq);
      if (jump >= static_cast<double>(params.n)) break;  // guards overflow
      t += 1 + static_cast<std::int64_t>(jump);
      if (t >= params.n) break;
      col.push_back(static_cast<std::int32_t>(t));
    }
  }
  m.rebuild_rows();
  return m;
}

std::int64_t nc_delta(const ProblemParams& params) {
  return std::llround(params.nu * static_cast<double>(params.n) /
                      static_cast<double>(params.k));
}

TestMatrix gen_near_constant(const ProblemParams& params) {
  params.validate();
  const std::int64_t delta = nc_delta(params);
  if (delta < 1)
    throw std::invalid_argument("gen_near_constant: round(nu n / k) must be >= 1");

  TestMatrix m;
  m.n = params.n;
  m.p = params.p;
  m.design = Design::nc;
  m.nu = params.nu;
  m.seed = params.seed;
  m.columns.resize(static_cast<std::size_t>(params.p));
  for (std::int64_t j = 0; j < params.p; ++j) {
    Rng rng(substream_seed(params.seed, static_cast<std::uint64_t>(j)));
    auto& col = m.columns[static_cast<std::size_t>(j)];
    col.resize(static_cast<std::size_t>(delta));
    for (std::int64_t i = 0; i < delta; ++i)
      col[static_cast<std::size_t>(i)] =
          static_cast<std::int32_t>(rng.next_below(params.n));
    std::sort(col.begin(), col.end());
  }
  m.rebuild_rows();
  return m;
}

TestMatrix gen_matrix(const ProblemParams& params) {
  return params.design == Design::bern ? gen_bernoulli(params)
                                       : gen_near_constant(params);
}

DesignStats design_stats(const TestMatrix& m,
                         const std::vector<std::int32_t>& defectives) {
  std::vector<std::int32_t> count(static_cast<std::size_t>(m.n), 0);
  DesignStats st;
  for (std::int32_t j : defectives) {
    if (j < 0 || j >= m.p) throw std::invalid_argument("design_stats: item out of range");
    bool repeated = false;
    const auto& col = m.columns[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < col.size(); ++i) {
      ++count[static_cast<std::size_t>(col[i])];
      if (i > 0 && col[i] == col[i - 1]) repeated = true;
    }
    if (repeated) ++st.repeat_defectives;
  }
  for (std::int64_t t = 0; t < m.n; ++t) {
    const std::int32_t c = count[static_cast<std::size_t>(t)];
    if (c == 0) ++st.n0;
    if (c == 1) ++st.degree1;
  }
  return st;
}

void dump_matrix(const TestMatrix& m, std::ostream& out) {
  char nu_buf[40];
  std::snprintf(nu_buf, sizeof nu_buf, "%.17g", m.nu);
  out << m.n << ' ' << m.p << ' ' << design_name(m.design) << ' ' << nu_buf
      << ' ' << m.seed << '\n';
  for (const auto& col : m.columns) {
    for (std::size_t i = 0; i < col.size(); ++i)
      out << (i ? " " : "") << col[i];
    out << '\n';
  }
}

}  // namespace grouptest
