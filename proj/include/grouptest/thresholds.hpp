#pragma once

#include <cstdint>
#include <string>

namespace grouptest {

enum class Design { bern, nc };

const char* design_name(Design d);
Design design_from_name(const std::string& name);

// Exponent of the concentration event that a candidate pair (C, zeta)
// produces the observed masking pattern. For the nc design it depends on the
// placement density nu; for bern it does not.
double f1(Design design, double C, double zeta, double rho, double nu);

// Large-deviations exponent of the score gap at overlap ratio d, with
// A = C (1 - 2 zeta). Domain: bern needs d >= max(0, A/rho); nc needs
// |A| <= d <= e^nu.
double g(Design design, double C, double zeta, double d, double rho, double nu);

// Derivative of g in d, used to certify stationarity of d_star.
double g_deriv_d(Design design, double C, double zeta, double d, double rho,
                 double nu);

// Closed-form interior minimizer of g over d.
double d_star(Design design, double C, double zeta, double rho, double nu);

// f2 = min over d of g, evaluated at the closed-form minimizer.
double f2(Design design, double C, double zeta, double rho, double nu);

// f2 with the defect region zeroed: 0 when A = C(1-2 zeta) < 2 rho - 1.
double f2_clamped(Design design, double C, double zeta, double rho, double nu);

// Initializer grid for the minimax solver; exposed so tests can vary the
// phase and check the result does not depend on it.
struct MinimaxOptions {
  int c_points = 64;
  int zeta_points = 64;
  double phase = 0.0;  // in [0,1), shifts both coarse grids
};

struct MinimaxResult {
  double value = 0.0;
  double c_star = 0.0;
  double zeta_star = 0.0;
  bool converged = false;
};

// min over (C, zeta) of max{ f1/theta, f2_clamped }, with C in (0, c_cap]
// for bern (c_cap = 50, which must stay inactive) and C in (0, e^nu) for nc.
MinimaxResult minimax_czeta(Design design, double theta, double rho, double nu,
                            const MinimaxOptions& opt = {});

struct ThresholdCoeff {
  double term1 = 0.0;      // 1 / (H2(e^-nu * rho) - H2(rho)), * = agreement
  double term2 = 0.0;      // 1 / ((1-theta) nu e^-nu minimax)
  double coeff = 0.0;      // max of the two; multiplies k ln(p/k)
  bool capacity_binding = false;
  double c_star = 0.0;
  double zeta_star = 0.0;
  double d_star = 0.0;
  bool converged = false;
};

// Coefficient of k ln(p/k) in the exact number-of-tests threshold.
// Infinities are reported as such, never clamped.
ThresholdCoeff threshold_coeff(Design design, double theta, double rho,
                               double nu);

// Achievable rate in bits per test: 1 / (coeff ln 2), in [0, 1].
double rate(Design design, double theta, double rho, double nu);

struct NuOpt {
  double nu = 0.0;
  double rate = 0.0;
  bool bracket_ok = false;  // false when the search bracket (0.05, 5] failed
};

// Maximizes rate over nu in (0.05, 5].
NuOpt optimize_nu(Design design, double theta, double rho);

enum class MiRegime { small_ell, proportional };

struct MutualInfo {
  double value = 0.0;
  MiRegime regime = MiRegime::small_ell;
};

// Asymptotic conditional mutual information between the outcomes and a set
// of ell defectives given the other k - ell. Switches formula at
// ell/k > 0.01: below, n nu e^-nu (ell/k)(1-2 rho) ln((1-rho)/rho); above,
// n e^-(1-a) nu (H2(e^-a nu * rho) - H2(rho)) with a = ell/k.
MutualInfo asymptotic_mutual_info(Design design, double n, std::int64_t k,
                                  std::int64_t ell, double rho, double nu);

}  // namespace grouptest
