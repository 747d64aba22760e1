#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grouptest/infomath.hpp"
#include "grouptest/rng.hpp"
#include "grouptest/thresholds.hpp"

using namespace grouptest;

namespace {

// Brute-force minimum of g over a dense d grid, refined once around the best
// cell; independent of the closed-form minimizer.
double f2_grid(Design design, double C, double zeta, double rho, double nu,
               int points = 4001) {
  const double A = C * (1.0 - 2.0 * zeta);
  double lo, hi;
  if (design == Design::bern) {
    lo = std::max(0.0, A / rho) + 1e-12;
    hi = std::max(4.0 * (std::fabs(A) + 1.0) / rho, lo + 1.0);
  } else {
    lo = std::fabs(A);
    hi = std::exp(nu);
  }
  double best = std::numeric_limits<double>::infinity(), best_d = lo;
  for (int pass = 0; pass < 3; ++pass) {
    for (int i = 0; i <= points; ++i) {
      const double d = lo + (hi - lo) * i / points;
      const double v = g(design, C, zeta, d, rho, nu);
      if (v < best) {
        best = v;
        best_d = d;
      }
    }
    const double cell = (hi - lo) / points;
    lo = std::max(lo, best_d - 2.0 * cell);
    hi = std::min(hi, best_d + 2.0 * cell);
  }
  return best;
}

double rand_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_double();
}

}  // namespace

TEST_CASE("f1 vanishes exactly at the no-deviation point") {
  CHECK(f1(Design::bern, 1.0, 0.2, 0.2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f1(Design::nc, 1.0, 0.2, 0.2, 0.9) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f1(Design::bern, 0.0, 0.1, 0.1, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f1(Design::bern, 0.5, 0.3, 0.1, 1.0) > 0.0);
  CHECK_THROWS_AS(f1(Design::nc, 3.0, 0.1, 0.1, std::log(2.0)), std::domain_error);
}

TEST_CASE("score gap exponent reference values") {
  // A = 2 rho - 1 with d = 1 is the zero of the exponent for both designs.
  CHECK(g(Design::bern, 1.0, 0.95, 1.0, 0.05, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g(Design::nc, 1.0, 0.95, 1.0, 0.05, 0.8) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g(Design::bern, 0.5, 0.1, 9.0, 0.05, 1.0) ==
        doctest::Approx(1.3415291108429767).epsilon(1e-13));
  // rho d = A exactly: the x ln x term vanishes at the domain edge.
  CHECK(g(Design::bern, 0.5, 0.4, 2.0, 0.05, 1.0) ==
        doctest::Approx(0.96931471805599453).epsilon(1e-12));
  CHECK_THROWS_AS(g(Design::bern, 2.0, 0.0, 0.5, 0.1, 1.0), std::domain_error);
  // rho d < A is outside the domain, not a clamped region.
  CHECK_THROWS_AS(g(Design::bern, 0.5, 0.1, 2.0, 0.05, 1.0), std::domain_error);
  CHECK_THROWS_AS(g(Design::nc, 1.0, 0.0, 0.5, 0.1, std::log(2.0)), std::domain_error);
}

TEST_CASE("closed-form minimizer reference values") {
  CHECK(d_star(Design::bern, 1.0, 0.5, 0.25, 1.0) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  CHECK(d_star(Design::bern, 0.5, 0.1, 0.05, 1.0) ==
        doctest::Approx(9.9160797830996160).epsilon(1e-13));
  CHECK(d_star(Design::nc, 1.0, 0.0, 0.01, std::log(2.0)) ==
        doctest::Approx(1.0188811180489256).epsilon(1e-13));
  // (e^nu - 1)^2 = 4 rho (1 - rho) makes the quadratic degenerate; the
  // closed form must pass through it smoothly.
  CHECK(d_star(Design::nc, 0.0, 0.5, 0.1, std::log(1.6)) ==
        doctest::Approx(0.8).epsilon(1e-13));
  CHECK(d_star(Design::nc, 0.3, 0.0, 0.2, 0.9) ==
        doctest::Approx(0.90390513339711312).epsilon(1e-13));
  CHECK(d_star(Design::bern, 1.0, 1.0 - 0.05, 0.05, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(d_star(Design::nc, 1.0, 1.0 - 0.05, 0.05, 0.8) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("minimizer continuity across the degenerate-quadratic boundary") {
  for (double rho : {0.05, 0.2, 0.45}) {
    const double nu_b = std::log(1.0 + 2.0 * std::sqrt(rho * (1.0 - rho)));
    for (double A : {0.0, 0.3, 0.8}) {
      const double C = std::max(A, 0.1);  // zeta chosen so C(1-2 zeta) = A
      const double zeta = 0.5 * (1.0 - A / C);
      const double below = d_star(Design::nc, C, zeta, rho, nu_b - 1e-8);
      const double above = d_star(Design::nc, C, zeta, rho, nu_b + 1e-8);
      CHECK(std::fabs(below - above) < 1e-6);
    }
  }
}

TEST_CASE("derivative vanishes at the closed-form minimizer") {
  Rng rng(7011);
  for (int it = 0; it < 200; ++it) {
    const Design design = it % 2 ? Design::bern : Design::nc;
    const double rho = rand_in(rng, 0.01, 0.49);
    const double nu = rand_in(rng, 0.2, 3.0);
    const double cmax = design == Design::bern ? 5.0 : std::exp(nu) * 0.99;
    const double C = rand_in(rng, 0.01, cmax);
    const double zeta = rand_in(rng, 0.0, 1.0);
    const double ds = d_star(design, C, zeta, rho, nu);
    const double deriv = g_deriv_d(design, C, zeta, ds, rho, nu);
    CHECK(std::fabs(deriv) < 1e-8);
  }
}

TEST_CASE("finite difference of g matches the analytic derivative") {
  // Sampled comfortably inside the domain: the log terms are stiff near the
  // edges, where a finite difference cannot resolve them.
  Rng rng(7012);
  for (int it = 0; it < 100; ++it) {
    const Design design = it % 2 ? Design::bern : Design::nc;
    const double rho = rand_in(rng, 0.01, 0.49);
    const double nu = rand_in(rng, 0.2, 3.0);
    const double cmax = design == Design::bern ? 5.0 : std::exp(nu) * 0.99;
    const double C = rand_in(rng, 0.01, cmax);
    const double zeta = rand_in(rng, 0.02, 0.98);
    const double A = C * (1.0 - 2.0 * zeta);
    const double d_fd = design == Design::bern
                            ? d_star(design, C, zeta, rho, nu) + 1.0
                            : 0.5 * (std::fabs(A) + std::exp(nu));
    const double deriv = g_deriv_d(design, C, zeta, d_fd, rho, nu);
    const double h = 1e-6 * std::max(1.0, d_fd);
    const double fd = (g(design, C, zeta, d_fd + h, rho, nu) -
                       g(design, C, zeta, d_fd - h, rho, nu)) /
                      (2.0 * h);
    CHECK(std::fabs(fd - deriv) < 1e-6 * std::max(1.0, std::fabs(deriv)));
  }
}

TEST_CASE("f2 reference values and grid agreement") {
  CHECK(f2(Design::bern, 0.5, 0.1, 0.05, 1.0) ==
        doctest::Approx(1.3260550857044623).epsilon(1e-13));
  CHECK(f2(Design::bern, 1.0, 0.0, 0.11, 1.0) ==
        doctest::Approx(2.1136361099379136).epsilon(1e-13));
  CHECK(f2(Design::nc, 1.0, 0.0, 0.01, std::log(2.0)) ==
        doctest::Approx(4.5955048191216394).epsilon(1e-13));
  CHECK(f2(Design::bern, 1.0, 1.0 - 0.05, 0.05, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-13));

  Rng rng(40902);
  for (int it = 0; it < 100; ++it) {
    const Design design = it % 2 ? Design::bern : Design::nc;
    const double rho = rand_in(rng, 0.02, 0.48);
    const double nu = rand_in(rng, 0.3, 2.5);
    const double cmax = design == Design::bern ? 4.0 : std::exp(nu) * 0.95;
    const double C = rand_in(rng, 0.05, cmax);
    const double zeta = rand_in(rng, 0.0, 1.0);
    const double closed = f2(design, C, zeta, rho, nu);
    const double grid = f2_grid(design, C, zeta, rho, nu);
    CHECK(closed <= grid + 1e-9);
    CHECK(std::fabs(closed - grid) <= 1e-6 * std::max(1.0, std::fabs(grid)));
  }
}

TEST_CASE("clamped f2 zeroes the infeasible region") {
  // C = 1, zeta = 0.9 gives A = -0.8 < 2 rho - 1 for rho = 0.11.
  CHECK(f2_clamped(Design::bern, 1.0, 0.9, 0.11, 1.0) == 0.0);
  CHECK(f2(Design::bern, 1.0, 0.9, 0.11, 1.0) > 0.0);
  CHECK(f2_clamped(Design::bern, 1.0, 0.0, 0.11, 1.0) ==
        doctest::Approx(f2(Design::bern, 1.0, 0.0, 0.11, 1.0)));
}

TEST_CASE("minimax value is certified by random probing") {
  Rng rng(99021);
  for (const Design design : {Design::bern, Design::nc}) {
    const double theta = 0.5, rho = 0.11, nu = std::log(2.0);
    const MinimaxResult mm = minimax_czeta(design, theta, rho, nu);
    CHECK(mm.converged);
    CHECK(mm.value > 0.0);
    // The reported optimum evaluates back to the reported value.
    const double back = std::max(f1(design, mm.c_star, mm.zeta_star, rho, nu) / theta,
                                 f2_clamped(design, mm.c_star, mm.zeta_star, rho, nu));
    CHECK(back == doctest::Approx(mm.value).epsilon(1e-10));
    // No random probe beats it.
    const double cmax = design == Design::bern ? 10.0 : std::exp(nu) * (1 - 1e-6);
    for (int it = 0; it < 10000; ++it) {
      const double C = std::exp(rand_in(rng, std::log(1e-4), std::log(cmax)));
      const double zeta = rand_in(rng, 1e-6, 1.0 - 1e-6);
      const double v = std::max(f1(design, C, zeta, rho, nu) / theta,
                                f2_clamped(design, C, zeta, rho, nu));
      CHECK(v >= mm.value - 1e-9);
    }
    // The optimizer never leaves the feasible deviation region.
    CHECK(mm.c_star * (1.0 - 2.0 * mm.zeta_star) >= 2.0 * rho - 1.0 - 1e-9);
  }
}

TEST_CASE("minimax result does not depend on the initializer phase") {
  for (const Design design : {Design::bern, Design::nc}) {
    MinimaxOptions base;
    const MinimaxResult r0 = minimax_czeta(design, 0.4, 0.05, 0.8, base);
    for (double phase : {0.31, 0.5, 0.77}) {
      MinimaxOptions opt;
      opt.phase = phase;
      const MinimaxResult r = minimax_czeta(design, 0.4, 0.05, 0.8, opt);
      CHECK(std::fabs(r.value - r0.value) < 1e-6 * std::max(1.0, r0.value));
    }
    MinimaxOptions coarse;
    coarse.c_points = 41;
    coarse.zeta_points = 53;
    const MinimaxResult rc = minimax_czeta(design, 0.4, 0.05, 0.8, coarse);
    CHECK(std::fabs(rc.value - r0.value) < 1e-6 * std::max(1.0, r0.value));
  }
}

TEST_CASE("threshold coefficient structure") {
  const double ln2 = std::numbers::ln2;
  const ThresholdCoeff low = threshold_coeff(Design::bern, 0.05, 0.01, ln2);
  CHECK(low.term1 == doctest::Approx(1.5694998560471977).epsilon(1e-10));
  CHECK(low.capacity_binding);
  CHECK(low.coeff == doctest::Approx(low.term1));

  const ThresholdCoeff high = threshold_coeff(Design::bern, 0.95, 0.01, 1.0);
  CHECK_FALSE(high.capacity_binding);
  CHECK(high.coeff == doctest::Approx(high.term2));

  // term1 does not depend on the design.
  const ThresholdCoeff nc_low = threshold_coeff(Design::nc, 0.05, 0.01, ln2);
  CHECK(nc_low.term1 == doctest::Approx(low.term1).epsilon(1e-14));

  for (double theta : {0.05, 0.35, 0.65, 0.95})
    for (double rho : {0.01, 0.05, 0.11, 0.2})
      for (double nu : {0.2, 0.9, 1.7, 3.0})
        for (Design d : {Design::bern, Design::nc}) {
          const ThresholdCoeff tc = threshold_coeff(d, theta, rho, nu);
          CHECK(std::isfinite(tc.coeff));
          CHECK(tc.coeff > 0.0);
        }
}

TEST_CASE("rate reproduces the low-theta plateau") {
  const double ln2 = std::numbers::ln2;
  const double plateau = 1.0 - binary_entropy(0.01) / ln2;
  CHECK(rate(Design::bern, 0.05, 0.01, ln2) == doctest::Approx(plateau).epsilon(1e-9));
  CHECK(rate(Design::nc, 0.05, 0.01, ln2) == doctest::Approx(plateau).epsilon(1e-9));
  CHECK(rate(Design::bern, 0.05, 0.01, ln2) ==
        doctest::Approx(0.91920686410408883).epsilon(1e-9));
  // Rates stay inside [0, 1].
  for (double theta : {0.1, 0.5, 0.9}) {
    const double r = rate(Design::bern, theta, 0.2, 1.0);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
  CHECK(rate(Design::bern, 0.5, 0.499, ln2) < 0.02);
}

TEST_CASE("density optimizer lands on the closed-form branch optima") {
  const NuOpt cap = optimize_nu(Design::bern, 0.05, 0.01);
  CHECK(cap.bracket_ok);
  CHECK(cap.nu == doctest::Approx(std::numbers::ln2).epsilon(1e-3));

  const NuOpt mm = optimize_nu(Design::bern, 0.95, 0.01);
  CHECK(mm.bracket_ok);
  CHECK(mm.nu == doctest::Approx(1.0).epsilon(1e-2));

  // Optimized rate dominates a few fixed choices.
  for (double nu : {0.3, std::numbers::ln2, 1.0, 2.0})
    CHECK(mm.rate >= rate(Design::bern, 0.95, 0.01, nu) - 1e-9);
}

TEST_CASE("asymptotic mutual information formulas") {
  const double ln2 = std::numbers::ln2;
  const MutualInfo small = asymptotic_mutual_info(Design::bern, 1e5, 1000, 1, 0.05, ln2);
  CHECK(small.regime == MiRegime::small_ell);
  CHECK(small.value == doctest::Approx(91.841830953300979).epsilon(1e-12));

  const MutualInfo full = asymptotic_mutual_info(Design::bern, 5000, 100, 100, 0.05, ln2);
  CHECK(full.regime == MiRegime::proportional);
  CHECK(full.value ==
        doctest::Approx(5000.0 * (binary_entropy(star(0.5, 0.05)) -
                                  binary_entropy(0.05))).epsilon(1e-12));

  // At the regime switch the two expressions agree to within 2 percent.
  const MutualInfo at_switch = asymptotic_mutual_info(Design::bern, 1e5, 100, 1, 0.05, ln2);
  CHECK(at_switch.regime == MiRegime::small_ell);
  const double alpha = 0.01;
  const double other = 1e5 * std::exp(-(1.0 - alpha) * ln2) *
                       (binary_entropy(star(std::exp(-alpha * ln2), 0.05)) -
                        binary_entropy(0.05));
  CHECK(std::fabs(at_switch.value - other) / other < 0.02);

  CHECK_THROWS_AS(asymptotic_mutual_info(Design::bern, 1e4, 10, 11, 0.05, ln2),
                  std::invalid_argument);
}
