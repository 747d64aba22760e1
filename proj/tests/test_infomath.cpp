#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "grouptest/infomath.hpp"
#include "grouptest/rng.hpp"

using namespace grouptest;

TEST_CASE("binary entropy at the corners and a reference point") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  // High-precision reference values, frozen from an independent evaluation.
  CHECK(binary_entropy(0.01) == doctest::Approx(0.056001534354847340).epsilon(1e-13));
  CHECK(binary_entropy(0.11) == doctest::Approx(0.34651533691866615).epsilon(1e-13));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
}

TEST_CASE("kl divergence basics") {
  CHECK(kl_bernoulli(0.3, 0.3) == 0.0);
  CHECK(kl_bernoulli(0.5, 0.25) == doctest::Approx(0.14384103622589046).epsilon(1e-13));
  CHECK(kl_bernoulli(0.35, 0.368) == doctest::Approx(7.0150539292144430e-4).epsilon(1e-12));
  CHECK(kl_bernoulli(1.0, 0.25) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(kl_bernoulli(0.0, 0.25) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-15));
  for (double a : {0.0, 0.05, 0.3, 0.77, 1.0})
    for (double b : {0.1, 0.5, 0.9}) CHECK(kl_bernoulli(a, b) >= 0.0);
}

TEST_CASE("kl divergence boundary handling is opt-in") {
  CHECK_THROWS_AS(kl_bernoulli(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), std::domain_error);
  CHECK(kl_bernoulli(0.5, 0.0, true) == std::numeric_limits<double>::infinity());
  CHECK(kl_bernoulli(0.5, 1.0, true) == std::numeric_limits<double>::infinity());
  CHECK(kl_bernoulli(0.0, 0.0) == 0.0);
  CHECK(kl_bernoulli(1.0, 1.0) == 0.0);
}

TEST_CASE("entropy and divergence from one half agree") {
  for (int i = 0; i <= 100; ++i) {
    const double q = i / 100.0;
    CHECK(binary_entropy(q) ==
          doctest::Approx(std::numbers::ln2 - kl_bernoulli(q, 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("agreement probability star") {
  CHECK(star(0.5, 0.123) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(star(1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(star(0.0, 0.3) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(star(std::exp(-1.0), 0.1) ==
        doctest::Approx(0.60569644706284614).epsilon(1e-14));
  for (double a : {0.0, 0.2, 0.6, 1.0})
    for (double b : {0.0, 0.35, 0.9}) CHECK(star(a, b) == doctest::Approx(star(b, a)));
}

TEST_CASE("binomial pmf exact values and normalization") {
  CHECK(binomial_pmf(5, 0.5, 0) == doctest::Approx(0.03125).epsilon(1e-14));
  CHECK(binomial_pmf(30, 0.2, 12) ==
        doctest::Approx(0.0063820735427391073).epsilon(1e-12));
  CHECK(binomial_pmf(10, 0.0, 0) == 1.0);
  CHECK(binomial_pmf(10, 1.0, 10) == 1.0);
  CHECK(binomial_pmf(10, 0.3, -1) == 0.0);
  for (std::int64_t N : {1, 7, 40}) {
    for (double q : {0.03, 0.5, 0.97}) {
      double s = 0.0;
      for (std::int64_t t = 0; t <= N; ++t) s += binomial_pmf(N, q, t);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("tail bounds sandwich the point mass") {
  const TailBounds eq = binomial_tail_bounds(10, 0.3, 3, TailSide::lower);
  CHECK(eq.chernoff == 1.0);  // t = Nq makes the exponent vanish
  const TailBounds t20 = binomial_tail_bounds(20, 0.5, 20, TailSide::upper);
  CHECK(t20.chernoff == doctest::Approx(std::pow(2.0, -20.0)).epsilon(1e-12));

  CHECK_THROWS_AS(binomial_tail_bounds(10, 0.3, 5, TailSide::lower), std::domain_error);
  CHECK_THROWS_AS(binomial_tail_bounds(10, 0.3, 1, TailSide::upper), std::domain_error);

  for (std::int64_t N : {5, 12, 30, 100}) {
    for (double q : {0.1, 0.37, 0.5, 0.8}) {
      const double mean = N * q;
      for (std::int64_t t = 0; t <= N; ++t) {
        const TailSide side = t <= mean ? TailSide::lower : TailSide::upper;
        const TailBounds tb = binomial_tail_bounds(N, q, t, side);
        const double pmf = binomial_pmf(N, q, t);
        CHECK(pmf <= tb.chernoff * (1.0 + 1e-12));
        CHECK(pmf >= tb.anti * (1.0 - 1e-12));
        CHECK(binomial_tail(N, q, t, side) <= tb.chernoff * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("log binomial sits between the standard bounds") {
  for (std::int64_t n : {10, 100, 2000}) {
    for (std::int64_t k : {1, 3, 7}) {
      const double lb = log_binomial(n, k);
      CHECK(lb >= k * std::log(static_cast<double>(n) / k) - 1e-9);
      CHECK(lb <= k * std::log(std::exp(1.0) * n / k) + 1e-9);
    }
  }
  CHECK(log_binomial(10, 0) == doctest::Approx(0.0));
  CHECK(log_binomial(10, 10) == doctest::Approx(0.0));
  CHECK_THROWS_AS(log_binomial(5, 6), std::domain_error);
}

TEST_CASE("stirling numbers are exact") {
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(10, 5) == 42525);
  for (int n : {1, 4, 9}) CHECK(stirling2(n, 1) == 1);
  CHECK(stirling2(64, 20).str() ==
        "33495810656789082943201483435774256536339000096583115646647742014");
  CHECK_THROWS_AS(stirling2(65, 5), std::domain_error);
  CHECK_THROWS_AS(stirling2(5, 6), std::domain_error);
}

TEST_CASE("occupancy pmf matches hand values and normalizes") {
  CHECK(occupancy_pmf(1, 0, 4, 1) == 1.0);
  CHECK(occupancy_pmf(2, 0, 2, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(occupancy_pmf(6, 3, 5, 4) == doctest::Approx(0.1739501953125).epsilon(1e-13));
  for (int L : {1, 3, 6, 9}) {
    for (int n1 : {0, 2, 5}) {
      for (int n2 : {1, 4, 7}) {
        double s = 0.0;
        for (int m = 0; m <= n2; ++m) s += occupancy_pmf(L, n1, n2, m);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
  CHECK_THROWS_AS(occupancy_pmf(65, 1, 4, 2), std::domain_error);
}

TEST_CASE("occupancy pmf agrees with direct simulation") {
  const int L = 7, n1 = 4, n2 = 6, n = n1 + n2;
  std::vector<double> freq(n2 + 1, 0.0);
  Rng rng(20260817);
  const int trials = 200000;
  for (int it = 0; it < trials; ++it) {
    int mask = 0;
    for (int i = 0; i < L; ++i) {
      const std::int64_t cell = rng.next_below(n);
      if (cell >= n1) mask |= 1 << (cell - n1);
    }
    freq[static_cast<std::size_t>(__builtin_popcount(mask))] += 1.0 / trials;
  }
  double tv = 0.0;
  for (int m = 0; m <= n2; ++m)
    tv += 0.5 * std::fabs(freq[static_cast<std::size_t>(m)] - occupancy_pmf(L, n1, n2, m));
  CHECK(tv < 0.02);
}

TEST_CASE("occupancy upper bound dominates the exact pmf") {
  for (int L : {2, 5, 8, 12}) {
    for (int n1 : {1, 3, 6}) {
      for (int n2 : {2, 5, 9}) {
        for (int m = 0; m <= std::min(L, n2); ++m) {
          const double exact = occupancy_pmf(L, n1, n2, m);
          const double bound = occupancy_upper_bound(L, n1, n2, m);
          CHECK(exact <= bound * (1.0 + 1e-12));
        }
      }
    }
  }
  CHECK_THROWS_AS(occupancy_upper_bound(4, 0, 5, 2), std::invalid_argument);
}

TEST_CASE("hypergeometric pmf values and support") {
  CHECK(hypergeom_pmf(10, 10, 3, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hypergeom_pmf(10, 4, 3, 5) == 0.0);
  CHECK(hypergeom_pmf(2000, 736, 20, 7) ==
        doctest::Approx(0.18270332022635671).epsilon(1e-10));
  for (std::int64_t N : {8, 25}) {
    for (std::int64_t K : {2, 5}) {
      for (std::int64_t n : {3, 6}) {
        double s = 0.0;
        for (std::int64_t t = 0; t <= n; ++t) s += hypergeom_pmf(N, K, n, t);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("hypergeometric log-mass matches the divergence rate plus prefactor") {
  // Near the mode the point mass behaves like exp(-n D - ln(2 pi n c(1-c))/2),
  // so the per-draw exponent needs the Gaussian prefactor at finite n.
  const std::int64_t N = 2000, K = 736, n = 20, t = 7;
  const double c = static_cast<double>(t) / n;
  const double exact = -std::log(hypergeom_pmf(N, K, n, t)) / n;
  const double predicted =
      kl_bernoulli(c, static_cast<double>(K) / N) +
      0.5 * std::log(2.0 * std::numbers::pi * n * c * (1.0 - c)) / n;
  CHECK(std::fabs(exact - predicted) <= 0.15 * predicted);
}

TEST_CASE("hypergeometric mass is sandwiched by the binomial-style bounds") {
  // Sampling without replacement concentrates at least as fast, so the
  // Chernoff bound with the marked fraction still dominates.
  const std::int64_t N = 500, K = 100, n = 40;
  const double q = static_cast<double>(K) / N;
  for (std::int64_t t = 0; t <= n; ++t) {
    const double pmf = hypergeom_pmf(N, K, n, t);
    const TailSide side = t <= n * q ? TailSide::lower : TailSide::upper;
    const TailBounds tb = binomial_tail_bounds(n, q, t, side);
    CHECK(pmf <= tb.chernoff * (1.0 + 1e-12));
  }
}
