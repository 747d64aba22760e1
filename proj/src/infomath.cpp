#include "grouptest/infomath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace grouptest {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_prob(double q, const char* name) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0,1]");
}

}  // namespace

double binary_entropy(double q) {
  check_prob(q, "binary_entropy: q");
  return -xlogx(q) - xlogx(1.0 - q);
}

double kl_bernoulli(double a, double b, bool allow_infinite) {
  check_prob(a, "kl_bernoulli: a");
  check_prob(b, "kl_bernoulli: b");
  if ((b == 0.0 && a > 0.0) || (b == 1.0 && a < 1.0)) {
    if (allow_infinite) return std::numeric_limits<double>::infinity();
    throw std::domain_error("kl_bernoulli: divergence is infinite at this boundary");
  }
  if (a == b) return 0.0;
  double d = 0.0;
  if (a > 0.0) d += a * std::log(a / b);
  if (a < 1.0) d += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  return d;
}

double star(double a, double b) {
  check_prob(a, "star: a");
  check_prob(b, "star: b");
  return a * b + (1.0 - a) * (1.0 - b);
}

TailBounds binomial_tail_bounds(std::int64_t N, double q, std::int64_t t,
                                TailSide side) {
  if (N <= 0) throw std::invalid_argument("binomial_tail_bounds: N must be positive");
  check_prob(q, "binomial_tail_bounds: q");
  if (t < 0 || t > N) throw std::domain_error("binomial_tail_bounds: t out of range");
  const double mean = static_cast<double>(N) * q;
  if (side == TailSide::lower && t > mean)
    throw std::domain_error("binomial_tail_bounds: lower side requires t <= N q");
  if (side == TailSide::upper && t < mean)
    throw std::domain_error("binomial_tail_bounds: upper side requires t >= N q");
  const double d = kl_bernoulli(static_cast<double>(t) / static_cast<double>(N), q,
                                /*allow_infinite=*/true);
  const double chernoff = std::exp(-static_cast<double>(N) * d);
  TailBounds out;
  out.chernoff = chernoff;
  out.anti = chernoff / std::sqrt(2.0 * static_cast<double>(N));
  return out;
}

double binomial_pmf(std::int64_t N, double q, std::int64_t t) {
  if (N < 0) throw std::invalid_argument("binomial_pmf: N must be nonnegative");
  check_prob(q, "binomial_pmf: q");
  if (t < 0 || t > N) return 0.0;
  if (q == 0.0) return t == 0 ? 1.0 : 0.0;
  if (q == 1.0) return t == N ? 1.0 : 0.0;
  const double lp = log_binomial(N, t) + static_cast<double>(t) * std::log(q) +
                    static_cast<double>(N - t) * std::log(1.0 - q);
  return std::exp(lp);
}

double binomial_tail(std::int64_t N, double q, std::int64_t t, TailSide side) {
  if (N < 0) throw std::invalid_argument("binomial_tail: N must be nonnegative");
  check_prob(q, "binomial_tail: q");
  double s = 0.0;
  if (side == TailSide::lower) {
    for (std::int64_t i = 0; i <= std::min(t, N); ++i) s += binomial_pmf(N, q, i);
  } else {
    for (std::int64_t i = std::max<std::int64_t>(t, 0); i <= N; ++i)
      s += binomial_pmf(N, q, i);
  }
  return std::min(s, 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n)
    throw std::domain_error("log_binomial: need 0 <= k <= n");
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

BigInt big_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact: r is C(n-k+i, i) after this step
  }
  return r;
}

BigInt stirling2(int n, int m) {
  if (n < 0 || m < 0 || m > n)
    throw std::domain_error("stirling2: need 0 <= m <= n");
  if (n > 64)
    throw std::domain_error("stirling2: supported only for n <= 64");
  if (n == 0) return 1;  // S(0,0) = 1; m > 0 handled by the recurrence below
  // Triangle recurrence S(i,j) = j S(i-1,j) + S(i-1,j-1), exact.
  std::vector<BigInt> row(static_cast<std::size_t>(m) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, m); j >= 1; --j)
      row[static_cast<std::size_t>(j)] =
          BigInt(j) * row[static_cast<std::size_t>(j)] +
          row[static_cast<std::size_t>(j) - 1];
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(m)];
}

double occupancy_pmf(int placements, int n1, int n2, int m) {
  if (placements < 0 || n1 < 0 || n2 < 1)
    throw std::invalid_argument("occupancy_pmf: bad cell counts");
  if (placements > 64)
    throw std::domain_error("occupancy_pmf: supported only for placements <= 64");
  if (m < 0 || m > n2) return 0.0;
  const int n = n1 + n2;
  const int L = placements;
  if (m > L) return 0.0;
  // P(M = m) = C(n2,m) m! sum_u C(L,u) n1^u S(L-u, m) / n^L with u the number
  // of throws landing in the first block. All terms are exact integers.
  BigInt num = 0;
  BigInt pow_n1 = 1;
  for (int u = 0; u <= L; ++u) {
    if (L - u >= m) num += big_binomial(L, u) * pow_n1 * stirling2(L - u, m);
    pow_n1 *= n1;
  }
  num *= big_binomial(n2, m);
  for (int i = 2; i <= m; ++i) num *= i;
  BigInt den = 1;
  for (int i = 0; i < L; ++i) den *= n;
  return num.convert_to<double>() / den.convert_to<double>();
}

double occupancy_upper_bound(int placements, int n1, int n2, int m) {
  if (placements < 1 || n1 < 1 || n2 < 1)
    throw std::invalid_argument("occupancy_upper_bound: needs n1 >= 1 and placements >= 1");
  if (m < 0 || m > std::min(placements, n2))
    throw std::domain_error("occupancy_upper_bound: m out of range");
  const double L = placements;
  const double frac = static_cast<double>(m) / L;
  const double q = static_cast<double>(n2) / static_cast<double>(n1 + n2);
  const double d = kl_bernoulli(frac, q, /*allow_infinite=*/true);
  return std::exp(L * L / (4.0 * static_cast<double>(n1)) - L * d);
}

double hypergeom_pmf(std::int64_t N, std::int64_t K, std::int64_t n,
                     std::int64_t t) {
  if (N < 0 || K < 0 || n < 0 || K > N || n > N)
    throw std::invalid_argument("hypergeom_pmf: bad population parameters");
  if (t < 0 || t > n || t > K || n - t > N - K) return 0.0;
  const double lp = log_binomial(K, t) + log_binomial(N - K, n - t) -
                    log_binomial(N, n);
  return std::exp(lp);
}

}  // namespace grouptest
