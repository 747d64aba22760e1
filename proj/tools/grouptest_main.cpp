// Command line front end: evaluates threshold coefficients and rates, sweeps
// the design density, runs desk-scale decoding simulations, and re-checks the
// library's numerical properties from the shell.
//
// Exit codes: 0 success, 1 a checked property failed, 2 bad configuration.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grouptest/channel.hpp"
#include "grouptest/decoders.hpp"
#include "grouptest/designs.hpp"
#include "grouptest/events.hpp"
#include "grouptest/infomath.hpp"
#include "grouptest/rng.hpp"
#include "grouptest/thresholds.hpp"

namespace gt = grouptest;
using nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Output goes to --out when given, stdout otherwise.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::invalid_argument("cannot open output file " + path);
    os = file.get();
  }
  std::ostream& out() { return *os; }
};

struct WilsonCi {
  double lo = 0.0, hi = 1.0;
};

WilsonCi wilson_interval(std::int64_t errors, std::int64_t trials) {
  const double z = 1.959963984540054;  // two-sided 95 percent
  const double ntr = static_cast<double>(trials);
  const double phat = static_cast<double>(errors) / ntr;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / ntr;
  const double center = (phat + z2 / (2.0 * ntr)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / ntr + z2 / (4.0 * ntr * ntr)) / denom;
  WilsonCi ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (errors == 0) ci.lo = 0.0;  // the closed form leaves roundoff dust here
  if (errors == trials) ci.hi = 1.0;
  return ci;
}

struct SharedOpts {
  std::string design = "bern";
  double rho = 0.11;
  double theta = 0.5;
  double nu = std::numbers::ln2;
  bool nu_opt = false;
  std::int64_t p = 100;
  std::int64_t k = 2;
  std::int64_t n = 50;
  std::int64_t trials = 100;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";
  std::string config_path;
};

void add_format_opts(CLI::App* cmd, SharedOpts& o) {
  cmd->add_option("--out", o.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  cmd->add_option("--config", o.config_path,
                  "Flat key=value defaults for this subcommand; explicit "
                  "flags win");
}

std::string trim_ws(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Expands --config FILE into --key=value tokens inserted right after the
// subcommand name. Keys already present on the command line are skipped, so
// explicit flags always win; unknown keys surface as parse errors.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::vector<std::string> inject;
  std::string line;
  while (std::getline(in, line)) {
    line = trim_ws(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + line);
    const std::string key = trim_ws(line.substr(0, eq));
    const std::string val = trim_ws(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line without key: " + line);
    if (key == "config") continue;
    const std::string flag = "--" + key;
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (!present) inject.push_back(val.empty() ? flag : flag + "=" + val);
  }
  args.insert(args.begin() + 1, inject.begin(), inject.end());
  return args;
}

void emit_threshold_row(Sink& sink, const std::string& format,
                        gt::Design design, double theta, double rho, double nu,
                        const gt::ThresholdCoeff& tc, double rate_bits) {
  const char* binding = tc.capacity_binding ? "capacity" : "minimax";
  if (format == "csv") {
    sink.out() << gt::design_name(design) << ',' << fmt_double(theta) << ','
               << fmt_double(rho) << ',' << fmt_double(nu) << ','
               << fmt_double(tc.term1) << ',' << fmt_double(tc.term2) << ','
               << fmt_double(tc.coeff) << ',' << fmt_double(rate_bits) << ','
               << fmt_double(tc.c_star) << ',' << fmt_double(tc.zeta_star)
               << ',' << fmt_double(tc.d_star) << ',' << binding << '\n';
  } else {
    ordered_json o;
    o["design"] = gt::design_name(design);
    o["theta"] = theta;
    o["rho"] = rho;
    o["nu"] = nu;
    o["term1_coeff"] = tc.term1;
    o["term2_coeff"] = tc.term2;
    o["coeff"] = tc.coeff;
    o["rate_bits"] = rate_bits;
    o["C_star"] = tc.c_star;
    o["zeta_star"] = tc.zeta_star;
    o["d_star"] = tc.d_star;
    o["binding"] = binding;
    sink.out() << o.dump() << '\n';
  }
}

constexpr const char* kThresholdColumns =
    "design,theta,rho,nu,term1_coeff,term2_coeff,coeff,rate_bits,C_star,"
    "zeta_star,d_star,binding";

int run_threshold(const SharedOpts& o, const std::vector<double>& thetas,
                  const std::vector<double>& rhos) {
  Sink sink;
  sink.open(o.out_path);
  if (o.format == "csv") sink.out() << kThresholdColumns << '\n';
  const gt::Design design = gt::design_from_name(o.design);
  bool trouble = false;
  for (double theta : thetas) {
    for (double rho : rhos) {
      double nu = o.nu;
      if (o.nu_opt) {
        const gt::NuOpt opt = gt::optimize_nu(design, theta, rho);
        if (!opt.bracket_ok) trouble = true;
        nu = opt.nu;
      }
      const gt::ThresholdCoeff tc = gt::threshold_coeff(design, theta, rho, nu);
      if (!tc.converged) trouble = true;
      emit_threshold_row(sink, o.format, design, theta, rho, nu, tc,
                         gt::rate(design, theta, rho, nu));
    }
  }
  return trouble ? 1 : 0;
}

int run_nu_sweep(const SharedOpts& o, double nu_min, double nu_max,
                 std::int64_t steps) {
  if (!(nu_min > 0.0) || !(nu_max > nu_min) || steps < 2)
    throw std::invalid_argument("nu-sweep: need 0 < nu-min < nu-max and steps >= 2");
  Sink sink;
  sink.open(o.out_path);
  const gt::Design design = gt::design_from_name(o.design);
  if (o.format == "csv")
    sink.out() << "design,theta,rho,nu,rate_bits,coeff,binding,opt\n";
  const auto emit = [&](double nu, bool opt_row) {
    const gt::ThresholdCoeff tc = gt::threshold_coeff(design, o.theta, o.rho, nu);
    const double r = gt::rate(design, o.theta, o.rho, nu);
    const char* binding = tc.capacity_binding ? "capacity" : "minimax";
    if (o.format == "csv") {
      sink.out() << gt::design_name(design) << ',' << fmt_double(o.theta) << ','
                 << fmt_double(o.rho) << ',' << fmt_double(nu) << ','
                 << fmt_double(r) << ',' << fmt_double(tc.coeff) << ','
                 << binding << ',' << (opt_row ? 1 : 0) << '\n';
    } else {
      ordered_json j;
      j["design"] = gt::design_name(design);
      j["theta"] = o.theta;
      j["rho"] = o.rho;
      j["nu"] = nu;
      j["rate_bits"] = r;
      j["coeff"] = tc.coeff;
      j["binding"] = binding;
      j["opt"] = opt_row;
      sink.out() << j.dump() << '\n';
    }
  };
  for (std::int64_t i = 0; i < steps; ++i)
    emit(nu_min + (nu_max - nu_min) * static_cast<double>(i) /
                      static_cast<double>(steps - 1),
         false);
  if (o.nu_opt) {
    const gt::NuOpt opt = gt::optimize_nu(design, o.theta, o.rho);
    emit(opt.nu, true);
    if (!opt.bracket_ok) return 1;
  }
  return 0;
}

int run_rate_curve(const SharedOpts& o, double theta_min, double theta_max,
                   std::int64_t steps) {
  if (!(theta_min > 0.0) || !(theta_max < 1.0) || !(theta_max > theta_min) ||
      steps < 2)
    throw std::invalid_argument(
        "rate-curve: need 0 < theta-min < theta-max < 1 and steps >= 2");
  Sink sink;
  sink.open(o.out_path);
  if (o.format == "csv") sink.out() << "design,theta,rho,nu,rate_bits,binding\n";
  bool trouble = false;
  for (std::int64_t i = 0; i < steps; ++i) {
    const double theta = theta_min + (theta_max - theta_min) *
                                         static_cast<double>(i) /
                                         static_cast<double>(steps - 1);
    for (const gt::Design design : {gt::Design::bern, gt::Design::nc}) {
      double nu = o.nu;
      if (o.nu_opt) {
        const gt::NuOpt opt = gt::optimize_nu(design, theta, o.rho);
        if (!opt.bracket_ok) trouble = true;
        nu = opt.nu;
      }
      const gt::ThresholdCoeff tc = gt::threshold_coeff(design, theta, o.rho, nu);
      const double r = gt::rate(design, theta, o.rho, nu);
      const char* binding = tc.capacity_binding ? "capacity" : "minimax";
      if (o.format == "csv") {
        sink.out() << gt::design_name(design) << ',' << fmt_double(theta) << ','
                   << fmt_double(o.rho) << ',' << fmt_double(nu) << ','
                   << fmt_double(r) << ',' << binding << '\n';
      } else {
        ordered_json j;
        j["design"] = gt::design_name(design);
        j["theta"] = theta;
        j["rho"] = o.rho;
        j["nu"] = nu;
        j["rate_bits"] = r;
        j["binding"] = binding;
        sink.out() << j.dump() << '\n';
      }
    }
  }
  return trouble ? 1 : 0;
}

int run_simulate(const SharedOpts& o, const std::string& decoder_name,
                 double delta1) {
  Sink sink;
  sink.open(o.out_path);
  gt::ProblemParams pr;
  pr.p = o.p;
  pr.k = o.k;
  pr.n = o.n;
  pr.rho = o.rho;
  pr.nu = o.nu;
  pr.design = gt::design_from_name(o.design);
  pr.validate();

  std::vector<std::int32_t> planted;
  for (std::int32_t j = 0; j < o.k; ++j) planted.push_back(j);
  const gt::GammaSchedule schedule = gt::gamma_schedule(o.p, o.k, delta1);

  if (o.format == "csv")
    sink.out() << "trial,seed,decoder,status,success,correct_tests\n";

  std::int64_t errors = 0, budget_errors = 0;
  for (std::int64_t i = 0; i < o.trials; ++i) {
    pr.seed = gt::substream_seed(o.seed, static_cast<std::uint64_t>(2 * i));
    const std::uint64_t noise_seed =
        gt::substream_seed(o.seed, static_cast<std::uint64_t>(2 * i + 1));
    std::string status;
    bool success = false;
    std::int64_t correct = 0;
    try {
      const gt::TestMatrix m = gt::gen_matrix(pr);
      const auto y = gt::simulate_outcomes(m, planted, o.rho, noise_seed);
      gt::DecodeResult res;
      if (decoder_name == "mle") {
        res = gt::mle_exact(m, y, o.k);
      } else if (decoder_name == "mle-restricted") {
        res = gt::mle_restricted(m, y, planted);
      } else if (decoder_name == "threshold") {
        res = gt::threshold_decoder(m, y, o.k, schedule, o.rho);
      } else if (decoder_name == "hybrid") {
        res = gt::hybrid_decoder(m, y, o.k, schedule, o.rho);
      } else if (decoder_name == "ncomp") {
        res.estimate = gt::ncomp_baseline(m, y, o.k);
        res.status = gt::DecodeStatus::unique;
        res.correct_tests = gt::count_correct(m, y, res.estimate);
      } else {
        throw std::invalid_argument("unknown decoder " + decoder_name);
      }
      status = gt::decode_status_name(res.status);
      success = res.status == gt::DecodeStatus::unique && res.estimate == planted;
      correct = res.correct_tests;
    } catch (const gt::budget_error&) {
      status = "budget_error";
      ++budget_errors;
    }
    if (!success) ++errors;
    if (o.format == "csv") {
      sink.out() << i << ',' << pr.seed << ',' << decoder_name << ',' << status
                 << ',' << (success ? "true" : "false") << ',' << correct << '\n';
    } else {
      ordered_json j;
      j["kind"] = "trial";
      j["trial"] = i;
      j["seed"] = pr.seed;
      j["decoder"] = decoder_name;
      j["status"] = status;
      j["success"] = success;
      j["correct_tests"] = correct;
      sink.out() << j.dump() << '\n';
    }
  }

  const double pe = static_cast<double>(errors) / static_cast<double>(o.trials);
  const WilsonCi ci = wilson_interval(errors, o.trials);
  if (o.format == "csv") {
    sink.out() << "\ndesign,p,k,n,rho,nu,decoder,trials,errors,budget_errors,"
                  "p_e,wilson_lo,wilson_hi\n"
               << o.design << ',' << o.p << ',' << o.k << ',' << o.n << ','
               << fmt_double(o.rho) << ',' << fmt_double(o.nu) << ','
               << decoder_name << ',' << o.trials << ',' << errors << ','
               << budget_errors << ',' << fmt_double(pe) << ','
               << fmt_double(ci.lo) << ',' << fmt_double(ci.hi) << '\n';
  } else {
    ordered_json j;
    j["kind"] = "summary";
    j["design"] = o.design;
    j["p"] = o.p;
    j["k"] = o.k;
    j["n"] = o.n;
    j["rho"] = o.rho;
    j["nu"] = o.nu;
    j["decoder"] = decoder_name;
    j["trials"] = o.trials;
    j["errors"] = errors;
    j["budget_errors"] = budget_errors;
    j["p_e"] = pe;
    j["wilson_lo"] = ci.lo;
    j["wilson_hi"] = ci.hi;
    sink.out() << j.dump() << '\n';
  }
  return 0;
}

struct PropertyRow {
  std::string suite;
  std::string property;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

void formula_properties(std::vector<PropertyRow>& rows) {
  {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double q = i / 200.0;
      worst = std::max(worst, std::fabs(gt::binary_entropy(q) -
                                        (std::numbers::ln2 -
                                         gt::kl_bernoulli(q, 0.5))));
    }
    rows.push_back({"formulas", "entropy_divergence_identity", worst, 1e-12,
                    worst <= 1e-12});
  }
  {
    gt::Rng rng(112);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
      const gt::Design d = it % 2 ? gt::Design::bern : gt::Design::nc;
      const double rho = 0.01 + 0.47 * rng.next_double();
      const double nu = 0.2 + 2.8 * rng.next_double();
      const double cmax = d == gt::Design::bern ? 5.0 : std::exp(nu) * 0.99;
      const double C = 0.01 + (cmax - 0.01) * rng.next_double();
      const double zeta = rng.next_double();
      const double ds = gt::d_star(d, C, zeta, rho, nu);
      worst = std::max(worst, std::fabs(gt::g_deriv_d(d, C, zeta, ds, rho, nu)));
    }
    rows.push_back({"formulas", "d_star_stationarity", worst, 1e-8, worst <= 1e-8});
  }
  {
    const double plateau = 1.0 - gt::binary_entropy(0.01) / std::numbers::ln2;
    const double r = gt::rate(gt::Design::bern, 0.05, 0.01, std::numbers::ln2);
    const double err = std::fabs(r - plateau);
    rows.push_back({"formulas", "rate_plateau", err, 1e-6, err <= 1e-6});
  }
  {
    gt::Rng rng(9134);
    double worst = 0.0;
    for (const gt::Design d : {gt::Design::bern, gt::Design::nc}) {
      const gt::MinimaxResult mm = gt::minimax_czeta(d, 0.5, 0.11, std::numbers::ln2);
      for (int it = 0; it < 1000; ++it) {
        const double cmax = d == gt::Design::bern ? 10.0 : 2.0 * (1 - 1e-6);
        const double C = std::exp(std::log(1e-4) +
                                  (std::log(cmax) - std::log(1e-4)) * rng.next_double());
        const double zeta = 1e-6 + (1.0 - 2e-6) * rng.next_double();
        const double v = std::max(gt::f1(d, C, zeta, 0.11, std::numbers::ln2) / 0.5,
                                  gt::f2_clamped(d, C, zeta, 0.11, std::numbers::ln2));
        worst = std::max(worst, mm.value - v);
      }
    }
    rows.push_back({"formulas", "minimax_is_min", worst, 1e-9, worst <= 1e-9});
  }
}

void design_properties(std::vector<PropertyRow>& rows) {
  {
    gt::ProblemParams pr;
    pr.p = 40;
    pr.k = 10;
    pr.n = 500;
    pr.rho = 0.1;
    pr.nu = 1.0;
    pr.design = gt::Design::bern;
    double total = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      pr.seed = s;
      for (const auto& col : gt::gen_bernoulli(pr).columns)
        total += static_cast<double>(col.size());
    }
    const double cells = 50.0 * 40 * 500, q = 0.1;
    const double dev = std::fabs(total - cells * q) /
                       std::sqrt(cells * q * (1 - q));
    rows.push_back({"designs", "bernoulli_density_sigma", dev, 4.0, dev <= 4.0});
  }
  {
    gt::ProblemParams pr;
    pr.p = 60;
    pr.k = 50;
    pr.n = 1443;
    pr.rho = 0.1;
    pr.nu = std::numbers::ln2;
    pr.design = gt::Design::nc;
    std::vector<std::int32_t> defectives;
    for (std::int32_t j = 0; j < 50; ++j) defectives.push_back(j);
    const std::int64_t delta = gt::nc_delta(pr);
    double mean_d1 = 0.0;
    const int trials = 40;
    for (int it = 0; it < trials; ++it) {
      pr.seed = static_cast<std::uint64_t>(it);
      mean_d1 += static_cast<double>(
                     gt::design_stats(gt::gen_near_constant(pr), defectives).degree1) /
                 trials;
    }
    const double nu_eff = static_cast<double>(50 * delta) / 1443.0;
    const double expect = std::exp(-nu_eff) * 50.0 * static_cast<double>(delta);
    const double rel = std::fabs(mean_d1 - expect) / expect;
    rows.push_back({"designs", "nc_degree1_rel_err", rel, 0.03, rel <= 0.03});
  }
  {
    const std::vector<std::uint8_t> zeros(1000, 0);
    double flips = 0.0;
    const int trials = 4000;
    for (int it = 0; it < trials; ++it) {
      const auto y = gt::apply_noise(zeros, 0.11, static_cast<std::uint64_t>(it));
      for (std::uint8_t b : y) flips += b;
    }
    const double mean = flips / trials;
    const double sig = std::sqrt(1000 * 0.11 * 0.89 / trials);
    const double dev = std::fabs(mean - 110.0) / sig;
    rows.push_back({"designs", "noise_rate_sigma", dev, 3.0, dev <= 3.0});
  }
}

void event_properties(std::vector<PropertyRow>& rows) {
  std::int64_t identity_bad = 0, equiv_bad = 0, instances = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gt::ProblemParams pr;
    pr.p = 14;
    pr.k = 2;
    pr.n = 24;
    pr.rho = (seed % 3) * 0.1;
    pr.nu = 1.0;
    pr.design = seed % 2 ? gt::Design::bern : gt::Design::nc;
    pr.seed = seed;
    const gt::TestMatrix m = gt::gen_matrix(pr);
    const std::vector<std::int32_t> s{4, 9};
    const auto y = gt::simulate_outcomes(m, s, pr.rho, seed + 123);
    const gt::FailureCheck fc = gt::check_failure_conditions(m, y, s);
    ++instances;
    if (!fc.identity_ok) ++identity_bad;
    if (fc.decoder_failed != fc.geq_witness_found) ++equiv_bad;
    if (fc.strict_witness_found && !fc.decoder_failed) ++equiv_bad;
  }
  rows.push_back({"events", "swap_identity_violations",
                  static_cast<double>(identity_bad), 0.0, identity_bad == 0});
  rows.push_back({"events", "failure_equivalence_violations",
                  static_cast<double>(equiv_bad), 0.0, equiv_bad == 0});
  (void)instances;
}

int run_verify(const SharedOpts& o, const std::string& suite) {
  Sink sink;
  sink.open(o.out_path);
  std::vector<PropertyRow> rows;
  if (suite == "all" || suite == "formulas") formula_properties(rows);
  if (suite == "all" || suite == "designs") design_properties(rows);
  if (suite == "all" || suite == "events") event_properties(rows);
  if (rows.empty()) throw std::invalid_argument("unknown suite " + suite);

  if (o.format == "csv") sink.out() << "suite,property,status,measured,bound\n";
  bool all_pass = true;
  for (const PropertyRow& r : rows) {
    all_pass = all_pass && r.pass;
    if (o.format == "csv") {
      sink.out() << r.suite << ',' << r.property << ','
                 << (r.pass ? "pass" : "fail") << ',' << fmt_double(r.measured)
                 << ',' << fmt_double(r.bound) << '\n';
    } else {
      ordered_json j;
      j["suite"] = r.suite;
      j["property"] = r.property;
      j["status"] = r.pass ? "pass" : "fail";
      j["measured"] = r.measured;
      j["bound"] = r.bound;
      sink.out() << j.dump() << '\n';
    }
  }
  return all_pass ? 0 : 1;
}

int run_pmf_check(const SharedOpts& o, const std::string& dist, std::int64_t N,
                  double q, std::int64_t hyper_N, std::int64_t K,
                  std::int64_t draws, int placements, int n1, int n2) {
  Sink sink;
  sink.open(o.out_path);
  if (o.format == "csv") sink.out() << "dist,point,exact,lower,upper,ok\n";
  bool all_ok = true;
  const auto emit = [&](const std::string& d, const std::string& point,
                        double exact, double lower, double upper, bool ok) {
    all_ok = all_ok && ok;
    if (o.format == "csv") {
      sink.out() << d << ',' << point << ',' << fmt_double(exact) << ','
                 << fmt_double(lower) << ',' << fmt_double(upper) << ','
                 << (ok ? "true" : "false") << '\n';
    } else {
      ordered_json j;
      j["dist"] = d;
      j["point"] = point;
      j["exact"] = exact;
      j["lower"] = lower;
      j["upper"] = upper;
      j["ok"] = ok;
      sink.out() << j.dump() << '\n';
    }
  };

  if (dist == "binom" || dist == "all") {
    for (std::int64_t t = 0; t <= N; ++t) {
      const gt::TailSide side =
          static_cast<double>(t) <= static_cast<double>(N) * q
              ? gt::TailSide::lower
              : gt::TailSide::upper;
      const gt::TailBounds tb = gt::binomial_tail_bounds(N, q, t, side);
      const double pmf = gt::binomial_pmf(N, q, t);
      emit("binom", std::to_string(t), pmf, tb.anti, tb.chernoff,
           pmf <= tb.chernoff * (1 + 1e-12) && pmf >= tb.anti * (1 - 1e-12));
    }
  }
  if (dist == "hyper" || dist == "all") {
    const double frac = static_cast<double>(K) / static_cast<double>(hyper_N);
    for (std::int64_t t = 0; t <= draws; ++t) {
      const gt::TailSide side =
          static_cast<double>(t) <= static_cast<double>(draws) * frac
              ? gt::TailSide::lower
              : gt::TailSide::upper;
      const gt::TailBounds tb = gt::binomial_tail_bounds(draws, frac, t, side);
      const double pmf = gt::hypergeom_pmf(hyper_N, K, draws, t);
      emit("hyper", std::to_string(t), pmf, 0.0, tb.chernoff,
           pmf <= tb.chernoff * (1 + 1e-12));
    }
  }
  if (dist == "occupancy" || dist == "all") {
    double total = 0.0;
    for (int m = 0; m <= std::min(placements, n2); ++m) {
      const double exact = gt::occupancy_pmf(placements, n1, n2, m);
      total += exact;
      const double upper = gt::occupancy_upper_bound(placements, n1, n2, m);
      emit("occupancy", std::to_string(m), exact, 0.0, upper,
           exact <= upper * (1 + 1e-12));
    }
    emit("occupancy", "normalization", total, 1.0 - 1e-10, 1.0 + 1e-10,
         std::fabs(total - 1.0) <= 1e-10);
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact thresholds, rates, and desk-scale simulations for noisy "
      "pooled testing with Bernoulli and near-constant-weight designs"};
  app.require_subcommand(1);

  SharedOpts o;
  std::vector<double> thetas;
  std::vector<double> rhos;

  auto* threshold = app.add_subcommand(
      "threshold",
      std::string("Threshold coefficients and rates; csv columns: ") +
          kThresholdColumns);
  threshold->add_option("--design", o.design, "bern or nc")->capture_default_str();
  threshold->add_option("--theta", thetas, "Sparsity exponent(s)");
  threshold->add_option("--rho", rhos, "Noise level(s)");
  threshold->add_option("--nu", o.nu, "Design density")->capture_default_str();
  threshold->add_flag("--nu-opt", o.nu_opt, "Optimize nu per row");
  add_format_opts(threshold, o);

  double nu_min = 0.1, nu_max = 3.0, theta_min = 0.05, theta_max = 0.95;
  std::int64_t steps = 30;
  auto* nu_sweep = app.add_subcommand(
      "nu-sweep",
      "Rate as a function of the design density; csv columns: "
      "design,theta,rho,nu,rate_bits,coeff,binding,opt");
  nu_sweep->add_option("--design", o.design, "bern or nc")->capture_default_str();
  nu_sweep->add_option("--theta", o.theta, "Sparsity exponent")->capture_default_str();
  nu_sweep->add_option("--rho", o.rho, "Noise level")->capture_default_str();
  nu_sweep->add_option("--nu-min", nu_min, "Sweep start")->capture_default_str();
  nu_sweep->add_option("--nu-max", nu_max, "Sweep end")->capture_default_str();
  nu_sweep->add_option("--steps", steps, "Grid points")->capture_default_str();
  nu_sweep->add_flag("--nu-opt", o.nu_opt, "Append the optimized row");
  add_format_opts(nu_sweep, o);

  auto* rate_curve = app.add_subcommand(
      "rate-curve",
      "Rates for both designs over a theta grid; csv columns: "
      "design,theta,rho,nu,rate_bits,binding");
  rate_curve->add_option("--rho", o.rho, "Noise level")->capture_default_str();
  rate_curve->add_option("--nu", o.nu, "Fixed design density")->capture_default_str();
  rate_curve->add_flag("--nu-opt", o.nu_opt, "Optimize nu per point");
  rate_curve->add_option("--theta-min", theta_min, "Grid start")->capture_default_str();
  rate_curve->add_option("--theta-max", theta_max, "Grid end")->capture_default_str();
  rate_curve->add_option("--steps", steps, "Grid points")->capture_default_str();
  add_format_opts(rate_curve, o);

  std::string decoder = "mle";
  double delta1 = 0.1;
  auto* simulate = app.add_subcommand(
      "simulate",
      "Monte Carlo decoding runs; csv columns: "
      "trial,seed,decoder,status,success,correct_tests then a summary table "
      "design,p,k,n,rho,nu,decoder,trials,errors,budget_errors,p_e,wilson_lo,"
      "wilson_hi");
  simulate->add_option("--design", o.design, "bern or nc")->capture_default_str();
  simulate->add_option("--p", o.p, "Items")->capture_default_str();
  simulate->add_option("--k", o.k, "Defectives")->capture_default_str();
  simulate->add_option("--n", o.n, "Tests")->capture_default_str();
  simulate->add_option("--rho", o.rho, "Noise level")->capture_default_str();
  simulate->add_option("--nu", o.nu, "Design density")->capture_default_str();
  simulate->add_option("--trials", o.trials, "Trial count")->capture_default_str();
  simulate->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  simulate->add_option("--decoder", decoder,
                       "mle, mle-restricted, threshold, hybrid, or ncomp")
      ->check(CLI::IsMember({"mle", "mle-restricted", "threshold", "hybrid", "ncomp"}))
      ->capture_default_str();
  simulate->add_option("--delta1", delta1, "Threshold schedule confidence split")
      ->capture_default_str();
  add_format_opts(simulate, o);

  std::string suite = "all";
  auto* verify = app.add_subcommand(
      "verify",
      "Re-check numerical properties; csv columns: "
      "suite,property,status,measured,bound");
  verify->add_option("--suite", suite, "all, formulas, designs, or events")
      ->check(CLI::IsMember({"all", "formulas", "designs", "events"}))
      ->capture_default_str();
  add_format_opts(verify, o);

  std::string dist = "all";
  std::int64_t N = 30, hyper_N = 500, K = 100, draws = 40;
  double q = 0.2;
  int placements = 8, n1 = 4, n2 = 6;
  auto* pmf_check = app.add_subcommand(
      "pmf-check",
      "Exact pmfs against their bounds; csv columns: "
      "dist,point,exact,lower,upper,ok");
  pmf_check->add_option("--dist", dist, "binom, hyper, occupancy, or all")
      ->check(CLI::IsMember({"binom", "hyper", "occupancy", "all"}))
      ->capture_default_str();
  pmf_check->add_option("--binom-N", N, "Binomial trials")->capture_default_str();
  pmf_check->add_option("--binom-q", q, "Binomial success probability")
      ->capture_default_str();
  pmf_check->add_option("--hyper-N", hyper_N, "Hypergeometric population size")
      ->capture_default_str();
  pmf_check->add_option("--hyper-K", K, "Marked population size")
      ->capture_default_str();
  pmf_check->add_option("--hyper-draws", draws, "Hypergeometric draws")
      ->capture_default_str();
  pmf_check->add_option("--placements", placements, "Occupancy throws")
      ->capture_default_str();
  pmf_check->add_option("--n1", n1, "Occupancy cells outside the tracked block")
      ->capture_default_str();
  pmf_check->add_option("--n2", n2, "Occupancy cells in the tracked block")
      ->capture_default_str();
  add_format_opts(pmf_check, o);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (threshold->parsed()) {
      if (thetas.empty()) thetas.push_back(o.theta);
      if (rhos.empty()) rhos.push_back(o.rho);
      return run_threshold(o, thetas, rhos);
    }
    if (nu_sweep->parsed()) return run_nu_sweep(o, nu_min, nu_max, steps);
    if (rate_curve->parsed()) return run_rate_curve(o, theta_min, theta_max, steps);
    if (simulate->parsed()) return run_simulate(o, decoder, delta1);
    if (verify->parsed()) return run_verify(o, suite);
    if (pmf_check->parsed())
      return run_pmf_check(o, dist, N, q, hyper_N, K, draws, placements, n1, n2);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
