#include "grouptest/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "grouptest/infomath.hpp"

namespace grouptest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBernCCap = 50.0;
constexpr double kZetaLo = 1e-6;
constexpr double kZetaHi = 1.0 - 1e-6;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_rho_open(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::domain_error("rho must lie in (0,1)");
}

void check_design_czeta(Design design, double C, double zeta, double nu) {
  if (!(C >= 0.0)) throw std::domain_error("C must be nonnegative");
  if (!(zeta >= 0.0 && zeta <= 1.0))
    throw std::domain_error("zeta must lie in [0,1]");
  if (design == Design::nc) {
    if (!(nu > 0.0)) throw std::domain_error("nc design needs nu > 0");
    if (C > std::exp(nu)) throw std::domain_error("nc design needs C <= e^nu");
  }
}

}  // namespace

const char* design_name(Design d) { return d == Design::bern ? "bern" : "nc"; }

Design design_from_name(const std::string& name) {
  if (name == "bern") return Design::bern;
  if (name == "nc") return Design::nc;
  throw std::invalid_argument("unknown design '" + name + "' (want bern or nc)");
}

double f1(Design design, double C, double zeta, double rho, double nu) {
  check_rho_open(rho);
  check_design_czeta(design, C, zeta, nu);
  const double dz = C * kl_bernoulli(zeta, rho);
  if (design == Design::bern) return xlogx(C) - C + 1.0 + dz;
  const double env = std::exp(nu);
  return env * kl_bernoulli(C / env, 1.0 / env) + dz;
}

double g(Design design, double C, double zeta, double d, double rho, double nu) {
  check_rho_open(rho);
  check_design_czeta(design, C, zeta, nu);
  const double A = C * (1.0 - 2.0 * zeta);
  if (design == Design::bern) {
    if (!(d >= 0.0)) throw std::domain_error("g: d must be nonnegative");
    double r = rho * d - A;
    if (r < 0.0) {
      if (r < -1e-12 * std::max(1.0, std::fabs(A)))
        throw std::domain_error("g: rho d - A must be nonnegative");
      r = 0.0;
    }
    return rho * d * (d > 0.0 ? std::log(d) : 0.0) +
           (r > 0.0 ? r * std::log(r / (1.0 - rho)) : 0.0) + 1.0 -
           2.0 * rho * d + A;
  }
  const double env = std::exp(nu);
  if (!(d >= std::fabs(A) - 1e-12 && d <= env + 1e-12))
    throw std::domain_error("g: need |A| <= d <= e^nu");
  const double dc = std::min(std::max(d, std::fabs(A)), env);
  const double t1 = env * kl_bernoulli(std::min(dc / env, 1.0), 1.0 / env);
  if (dc == 0.0) return t1;
  const double half = std::min(std::max(0.5 + A / (2.0 * dc), 0.0), 1.0);
  return t1 + dc * kl_bernoulli(half, rho);
}

double g_deriv_d(Design design, double C, double zeta, double d, double rho,
                 double nu) {
  check_rho_open(rho);
  check_design_czeta(design, C, zeta, nu);
  const double A = C * (1.0 - 2.0 * zeta);
  if (design == Design::bern) {
    if (!(d > 0.0 && rho * d - A > 0.0))
      throw std::domain_error("g_deriv_d: interior point required");
    return rho * std::log(d * (rho * d - A) / (1.0 - rho));
  }
  const double env = std::exp(nu);
  if (!(d > std::fabs(A) && d < env))
    throw std::domain_error("g_deriv_d: interior point required");
  return 0.5 * std::log((d * d - A * A) / (4.0 * rho * (1.0 - rho))) -
         std::log((env - d) / (env - 1.0));
}

double d_star(Design design, double C, double zeta, double rho, double nu) {
  check_rho_open(rho);
  check_design_czeta(design, C, zeta, nu);
  const double A = C * (1.0 - 2.0 * zeta);
  if (design == Design::bern)
    return (A + std::sqrt(A * A + 4.0 * rho * (1.0 - rho))) / (2.0 * rho);
  // Root of (a-1)d^2 + 2e^nu d - (a A^2 + e^{2nu}), written so the a -> 1
  // limit is taken without cancellation.
  const double env = std::exp(nu);
  const double a = (env - 1.0) * (env - 1.0) / (4.0 * rho * (1.0 - rho));
  const double disc = a * (env * env + A * A * (a - 1.0));
  const double d = (a * A * A + env * env) / (env + std::sqrt(disc));
  return std::min(std::max(d, std::fabs(A)), env);
}

double f2(Design design, double C, double zeta, double rho, double nu) {
  return g(design, C, zeta, d_star(design, C, zeta, rho, nu), rho, nu);
}

double f2_clamped(Design design, double C, double zeta, double rho, double nu) {
  const double A = C * (1.0 - 2.0 * zeta);
  if (A < 2.0 * rho - 1.0) return 0.0;
  return f2(design, C, zeta, rho, nu);
}

namespace {

struct InnerMin {
  double value;
  double zeta;
};

// min over zeta of max{f1/theta, f2_clamped} at fixed C. The active-branch
// structure is: f1 is minimized at zeta = rho and increases away from it,
// while f2 decreases in zeta until A = C(1-2 zeta) reaches 2 rho - 1 where it
// vanishes. The inner minimum is either at zeta = rho or on the equalizer.
InnerMin inner_min_zeta(Design design, double theta, double rho, double nu,
                        double C) {
  const auto branch1 = [&](double z) { return f1(design, C, z, rho, nu) / theta; };
  const auto branch2 = [&](double z) { return f2_clamped(design, C, z, rho, nu); };
  const double b1_rho = branch1(rho);
  const double b2_rho = branch2(rho);
  if (b1_rho >= b2_rho) return {b1_rho, rho};
  double lo = rho;
  double hi = 0.5 + (1.0 - 2.0 * rho) / (2.0 * std::max(C, 1e-300));
  hi = std::min(hi, kZetaHi);
  if (branch1(hi) - branch2(hi) < 0.0)
    return {std::max(branch1(hi), branch2(hi)), hi};
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (branch1(mid) - branch2(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double z = 0.5 * (lo + hi);
  return {std::max(branch1(z), branch2(z)), z};
}

}  // namespace

MinimaxResult minimax_czeta(Design design, double theta, double rho, double nu,
                            const MinimaxOptions& opt) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::domain_error("minimax_czeta: theta must lie in (0,1)");
  if (!(rho > 0.0 && rho < 0.5))
    throw std::domain_error("minimax_czeta: rho must lie in (0,1/2)");
  if (design == Design::nc && !(nu > 0.0))
    throw std::domain_error("minimax_czeta: nc design needs nu > 0");

  const double c_hi =
      design == Design::bern ? kBernCCap : std::exp(nu) * (1.0 - 1e-9);
  const double c_lo = 1e-4;
  const double ph = opt.phase - std::floor(opt.phase);

  const auto objective = [&](double C, double z) {
    return std::max(f1(design, C, z, rho, nu) / theta,
                    f2_clamped(design, C, z, rho, nu));
  };

  // Coarse scan over a log grid in C and a linear grid in zeta.
  double best_v = kInf, best_c = c_lo, best_z = rho;
  const double lc_lo = std::log(c_lo), lc_hi = std::log(c_hi);
  for (int i = 0; i < opt.c_points; ++i) {
    const double C =
        std::exp(lc_lo + (i + ph) * (lc_hi - lc_lo) / opt.c_points);
    for (int j = 0; j < opt.zeta_points; ++j) {
      const double z = kZetaLo + (j + ph) * (kZetaHi - kZetaLo) / opt.zeta_points;
      const double v = objective(C, z);
      if (v < best_v) {
        best_v = v;
        best_c = C;
        best_z = z;
      }
    }
  }

  // Refine along C with the exact inner minimum over zeta, golden section on
  // a bracket around the best coarse cell.
  const double cell = (lc_hi - lc_lo) / opt.c_points;
  double a = std::max(lc_lo, std::log(best_c) - 2.0 * cell);
  double b = std::min(lc_hi, std::log(best_c) + 2.0 * cell);
  const auto h = [&](double lc) {
    return inner_min_zeta(design, theta, rho, nu, std::exp(lc));
  };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  InnerMin h1 = h(x1), h2 = h(x2);
  for (int it = 0; it < 220 && b - a > 1e-13; ++it) {
    if (h1.value <= h2.value) {
      b = x2;
      x2 = x1;
      h2 = h1;
      x1 = b - gr * (b - a);
      h1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      h1 = h2;
      x2 = a + gr * (b - a);
      h2 = h(x2);
    }
  }
  double lc = h1.value <= h2.value ? x1 : x2;
  InnerMin hm = h(lc);
  if (hm.value < best_v) {
    best_v = hm.value;
    best_c = std::exp(lc);
    best_z = hm.zeta;
  }

  // Compass polish in (ln C, zeta) certifies a local minimum and mops up any
  // structure the equalizer pass assumed away.
  double step_c = cell, step_z = (kZetaHi - kZetaLo) / opt.zeta_points;
  double cur_lc = std::log(best_c), cur_z = best_z, cur_v = best_v;
  int evals = 0;
  while ((step_c > 1e-12 || step_z > 1e-14) && evals < 20000) {
    bool moved = false;
    const double cand_lc[4] = {cur_lc - step_c, cur_lc + step_c, cur_lc, cur_lc};
    const double cand_z[4] = {cur_z, cur_z, cur_z - step_z, cur_z + step_z};
    for (int i = 0; i < 4; ++i) {
      const double nlc = std::min(std::max(cand_lc[i], lc_lo), lc_hi);
      const double nz = std::min(std::max(cand_z[i], kZetaLo), kZetaHi);
      const double v = objective(std::exp(nlc), nz);
      ++evals;
      if (v < cur_v) {
        cur_v = v;
        cur_lc = nlc;
        cur_z = nz;
        moved = true;
        break;
      }
    }
    if (!moved) {
      step_c *= 0.5;
      step_z *= 0.5;
    }
  }
  MinimaxResult res;
  if (cur_v < best_v) {
    res.value = cur_v;
    res.c_star = std::exp(cur_lc);
    res.zeta_star = cur_z;
  } else {
    res.value = best_v;
    res.c_star = best_c;
    res.zeta_star = best_z;
  }
  res.converged = evals < 20000 && std::isfinite(res.value);
  return res;
}

ThresholdCoeff threshold_coeff(Design design, double theta, double rho,
                               double nu) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::domain_error("threshold_coeff: theta must lie in (0,1)");
  if (!(rho > 0.0 && rho < 0.5))
    throw std::domain_error("threshold_coeff: rho must lie in (0,1/2)");
  if (!(nu > 0.0)) throw std::domain_error("threshold_coeff: nu must be positive");

  ThresholdCoeff out;
  const double env = std::exp(-nu);
  const double gap = binary_entropy(star(env, rho)) - binary_entropy(rho);
  out.term1 = gap > 0.0 ? 1.0 / gap : kInf;

  const MinimaxResult mm = minimax_czeta(design, theta, rho, nu);
  out.converged = mm.converged;
  out.c_star = mm.c_star;
  out.zeta_star = mm.zeta_star;
  out.d_star = d_star(design, mm.c_star, mm.zeta_star, rho, nu);
  const double denom = (1.0 - theta) * nu * env * mm.value;
  out.term2 = denom > 0.0 && std::isfinite(denom) ? 1.0 / denom : kInf;

  out.coeff = std::max(out.term1, out.term2);
  out.capacity_binding = out.term1 >= out.term2;
  return out;
}

double rate(Design design, double theta, double rho, double nu) {
  const ThresholdCoeff tc = threshold_coeff(design, theta, rho, nu);
  if (!std::isfinite(tc.coeff) || tc.coeff <= 0.0) return 0.0;
  const double r = 1.0 / (tc.coeff * std::numbers::ln2);
  return std::min(std::max(r, 0.0), 1.0);
}

NuOpt optimize_nu(Design design, double theta, double rho) {
  const double lo = 0.05, hi = 5.0;
  const auto f = [&](double nu) { return rate(design, theta, rho, nu); };

  // Coarse scan plus the two closed-form branch optimizers: nu = ln 2
  // maximizes the capacity term, nu = 1 maximizes nu e^-nu.
  const int grid_n = 60;
  double best_nu = lo, best_r = -1.0;
  std::vector<double> cand;
  for (int i = 0; i <= grid_n; ++i)
    cand.push_back(lo + (hi - lo) * i / grid_n);
  cand.push_back(std::numbers::ln2);
  cand.push_back(1.0);
  for (double nu : cand) {
    const double r = f(nu);
    if (r > best_r) {
      best_r = r;
      best_nu = nu;
    }
  }

  // Golden section around the best candidate.
  const double step = (hi - lo) / grid_n;
  double a = std::max(lo, best_nu - step), b = std::min(hi, best_nu + step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double r1 = f(x1), r2 = f(x2);
  while (b - a > 1e-7) {
    if (r1 >= r2) {
      b = x2;
      x2 = x1;
      r2 = r1;
      x1 = b - gr * (b - a);
      r1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      r1 = r2;
      x2 = a + gr * (b - a);
      r2 = f(x2);
    }
  }
  const double gm = 0.5 * (a + b);
  const double gr_rate = f(gm);
  if (gr_rate > best_r) {
    best_r = gr_rate;
    best_nu = gm;
  }
  // Prefer an exact branch optimizer when it ties the golden refinement.
  for (double nu : {std::numbers::ln2, 1.0}) {
    const double r = f(nu);
    if (r >= best_r - 1e-12 && r >= best_r * (1.0 - 1e-10)) {
      if (r >= best_r) {
        best_r = r;
        best_nu = nu;
      } else if (std::fabs(nu - best_nu) < 2e-4) {
        best_nu = nu;
        best_r = r;
      }
    }
  }

  NuOpt out;
  out.nu = best_nu;
  out.rate = best_r;
  out.bracket_ok = best_nu > lo + 1e-9 && best_nu < hi - 1e-9 && best_r > 0.0;
  return out;
}

MutualInfo asymptotic_mutual_info(Design design, double n, std::int64_t k,
                                  std::int64_t ell, double rho, double nu) {
  (void)design;  // both designs share the same asymptotic expressions
  if (!(n > 0.0)) throw std::invalid_argument("asymptotic_mutual_info: n must be positive");
  if (k < 1 || ell < 1 || ell > k)
    throw std::invalid_argument("asymptotic_mutual_info: need 1 <= ell <= k");
  if (!(rho > 0.0 && rho < 0.5))
    throw std::domain_error("asymptotic_mutual_info: rho must lie in (0,1/2)");
  if (!(nu > 0.0)) throw std::domain_error("asymptotic_mutual_info: nu must be positive");

  const double alpha = static_cast<double>(ell) / static_cast<double>(k);
  MutualInfo out;
  if (alpha > 0.01) {
    out.regime = MiRegime::proportional;
    out.value = n * std::exp(-(1.0 - alpha) * nu) *
                (binary_entropy(star(std::exp(-alpha * nu), rho)) -
                 binary_entropy(rho));
  } else {
    out.regime = MiRegime::small_ell;
    out.value = n * nu * std::exp(-nu) * alpha * (1.0 - 2.0 * rho) *
                std::log((1.0 - rho) / rho);
  }
  return out;
}

}  // namespace grouptest
