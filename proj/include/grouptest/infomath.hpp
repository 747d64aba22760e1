#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

namespace grouptest {

using BigInt = boost::multiprecision::cpp_int;

// All entropies and divergences are in nats. 0*log(0) is treated as 0.

// Binary entropy H2(q) = -q ln q - (1-q) ln(1-q), q in [0,1].
double binary_entropy(double q);

// KL divergence between Bernoulli(a) and Bernoulli(b). b in {0,1} with
// a != b is a domain error unless allow_infinite, in which case the
// divergence is +infinity. Useful for boundary scans in optimizers.
double kl_bernoulli(double a, double b, bool allow_infinite = false);

// Probability that two independent bits with P(1)=a and P(1)=b agree:
// a*b + (1-a)(1-b).
double star(double a, double b);

enum class TailSide { lower, upper };

struct TailBounds {
  double chernoff;  // upper bound exp(-N D(t/N || q)) on the tail beyond t
  double anti;      // lower bound chernoff / sqrt(2N) on the point mass at t
};

// Requires t <= N q for the lower side and t >= N q for the upper side;
// outside that range the exponent would not bound the tail.
TailBounds binomial_tail_bounds(std::int64_t N, double q, std::int64_t t,
                                TailSide side);

// P(Bin(N,q) = t), evaluated in log space.
double binomial_pmf(std::int64_t N, double q, std::int64_t t);

// Exact tail P(Bin(N,q) <= t) or P(Bin(N,q) >= t) by summation.
double binomial_tail(std::int64_t N, double q, std::int64_t t, TailSide side);

// ln C(n, k) via lgamma; 0 when k is 0 or n, -infinity never (throws on bad k).
double log_binomial(std::int64_t n, std::int64_t k);

// Exact binomial coefficient as a big integer.
BigInt big_binomial(int n, int k);

// Stirling number of the second kind S(n, m), exact. Supported for n <= 64;
// larger n is refused rather than silently losing precision.
BigInt stirling2(int n, int m);

// Probability that `placements` independent uniform throws into n1+n2 cells
// hit exactly m distinct cells of the n2-cell block. Exact rational
// arithmetic, converted to double once at the end. placements <= 64.
double occupancy_pmf(int placements, int n1, int n2, int m);

// Closed-form upper bound exp(L^2/(4 n1) - L D(m/L || n2/n)) on
// occupancy_pmf with L = placements and n = n1 + n2; requires n1 >= 1.
double occupancy_upper_bound(int placements, int n1, int n2, int m);

// P(Hypergeom(N, K, n) = t): t marked among n draws without replacement
// from a population of N with K marked.
double hypergeom_pmf(std::int64_t N, std::int64_t K, std::int64_t n,
                     std::int64_t t);

}  // namespace grouptest
