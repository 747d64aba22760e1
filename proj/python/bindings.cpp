// Python surface of the library. Designs are named by the strings "bern" and
// "nc" at this boundary; enums and counters come back as plain python types,
// and the exact big-integer results are converted losslessly to python ints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "grouptest/channel.hpp"
#include "grouptest/decoders.hpp"
#include "grouptest/designs.hpp"
#include "grouptest/events.hpp"
#include "grouptest/infomath.hpp"
#include "grouptest/rng.hpp"
#include "grouptest/thresholds.hpp"

namespace py = pybind11;
namespace gt = grouptest;

namespace {

py::object big_to_int(const gt::BigInt& v) {
  const std::string digits = v.str();
  PyObject* obj = PyLong_FromString(digits.c_str(), nullptr, 10);
  if (obj == nullptr) throw py::error_already_set();
  return py::reinterpret_steal<py::object>(obj);
}

gt::TailSide side_from_name(const std::string& side) {
  if (side == "lower") return gt::TailSide::lower;
  if (side == "upper") return gt::TailSide::upper;
  throw std::invalid_argument("side must be 'lower' or 'upper'");
}

gt::ProblemParams make_params(std::int64_t p, std::int64_t k, std::int64_t n,
                              double rho, double nu, const std::string& design,
                              std::uint64_t seed) {
  gt::ProblemParams pr;
  pr.p = p;
  pr.k = k;
  pr.n = n;
  pr.rho = rho;
  pr.nu = nu;
  pr.design = gt::design_from_name(design);
  pr.seed = seed;
  return pr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact thresholds, rates, and desk-scale simulation for noisy pooled "
      "testing with Bernoulli and near-constant-weight designs";
  m.attr("__version__") = "0.1.0";

  // scalar information measures and distribution oracles
  m.def("binary_entropy", &gt::binary_entropy, py::arg("q"),
        "Binary entropy in nats");
  m.def("kl_bernoulli", &gt::kl_bernoulli, py::arg("a"), py::arg("b"),
        py::arg("allow_infinite") = false,
        "KL divergence between Bernoulli(a) and Bernoulli(b), in nats");
  m.def("star", &gt::star, py::arg("a"), py::arg("b"),
        "Probability that two independent biased bits agree: ab + (1-a)(1-b)");
  m.def("binomial_pmf", &gt::binomial_pmf, py::arg("n"), py::arg("q"),
        py::arg("t"));
  m.def(
      "binomial_tail",
      [](std::int64_t n, double q, std::int64_t t, const std::string& side) {
        return gt::binomial_tail(n, q, t, side_from_name(side));
      },
      py::arg("n"), py::arg("q"), py::arg("t"), py::arg("side"),
      "Exact binomial tail probability toward the given side");
  m.def(
      "binomial_tail_bounds",
      [](std::int64_t n, double q, std::int64_t t, const std::string& side) {
        return gt::binomial_tail_bounds(n, q, t, side_from_name(side));
      },
      py::arg("n"), py::arg("q"), py::arg("t"), py::arg("side"),
      "Chernoff upper and matching anti-concentration lower bound");
  m.def("log_binomial", &gt::log_binomial, py::arg("n"), py::arg("k"));
  m.def(
      "big_binomial",
      [](std::int64_t n, std::int64_t k) {
        return big_to_int(gt::big_binomial(n, k));
      },
      py::arg("n"), py::arg("k"), "Exact binomial coefficient as a python int");
  m.def(
      "stirling2",
      [](std::int64_t n, std::int64_t k) {
        return big_to_int(gt::stirling2(n, k));
      },
      py::arg("n"), py::arg("k"),
      "Stirling number of the second kind as a python int");
  m.def("occupancy_pmf", &gt::occupancy_pmf, py::arg("placements"),
        py::arg("n1"), py::arg("n2"), py::arg("m"),
        "Probability that uniform placements cover exactly m of the n2 "
        "tracked cells");
  m.def("occupancy_upper_bound", &gt::occupancy_upper_bound,
        py::arg("placements"), py::arg("n1"), py::arg("n2"), py::arg("m"));
  m.def("hypergeom_pmf", &gt::hypergeom_pmf, py::arg("population"),
        py::arg("marked"), py::arg("draws"), py::arg("t"));

  py::class_<gt::TailBounds>(m, "TailBounds")
      .def_readonly("chernoff", &gt::TailBounds::chernoff)
      .def_readonly("anti", &gt::TailBounds::anti)
      .def("__repr__", [](const gt::TailBounds& b) {
        std::ostringstream ss;
        ss << "TailBounds(chernoff=" << b.chernoff << ", anti=" << b.anti << ")";
        return ss.str();
      });

  // threshold coefficients and rates
  m.def(
      "f1",
      [](const std::string& design, double C, double zeta, double rho,
         double nu) {
        return gt::f1(gt::design_from_name(design), C, zeta, rho, nu);
      },
      py::arg("design"), py::arg("C"), py::arg("zeta"), py::arg("rho"),
      py::arg("nu"));
  m.def(
      "g",
      [](const std::string& design, double C, double zeta, double d, double rho,
         double nu) {
        return gt::g(gt::design_from_name(design), C, zeta, d, rho, nu);
      },
      py::arg("design"), py::arg("C"), py::arg("zeta"), py::arg("d"),
      py::arg("rho"), py::arg("nu"));
  m.def(
      "d_star",
      [](const std::string& design, double C, double zeta, double rho,
         double nu) {
        return gt::d_star(gt::design_from_name(design), C, zeta, rho, nu);
      },
      py::arg("design"), py::arg("C"), py::arg("zeta"), py::arg("rho"),
      py::arg("nu"), "Closed-form minimizer of g over the overlap variable");
  m.def(
      "f2",
      [](const std::string& design, double C, double zeta, double rho,
         double nu) {
        return gt::f2(gt::design_from_name(design), C, zeta, rho, nu);
      },
      py::arg("design"), py::arg("C"), py::arg("zeta"), py::arg("rho"),
      py::arg("nu"));
  m.def(
      "f2_clamped",
      [](const std::string& design, double C, double zeta, double rho,
         double nu) {
        return gt::f2_clamped(gt::design_from_name(design), C, zeta, rho, nu);
      },
      py::arg("design"), py::arg("C"), py::arg("zeta"), py::arg("rho"),
      py::arg("nu"));

  py::class_<gt::MinimaxResult>(m, "MinimaxResult")
      .def_readonly("value", &gt::MinimaxResult::value)
      .def_readonly("c_star", &gt::MinimaxResult::c_star)
      .def_readonly("zeta_star", &gt::MinimaxResult::zeta_star)
      .def_readonly("converged", &gt::MinimaxResult::converged)
      .def("__repr__", [](const gt::MinimaxResult& r) {
        std::ostringstream ss;
        ss << "MinimaxResult(value=" << r.value << ", c_star=" << r.c_star
           << ", zeta_star=" << r.zeta_star << ", converged=" << r.converged
           << ")";
        return ss.str();
      });
  m.def(
      "minimax_czeta",
      [](const std::string& design, double theta, double rho, double nu) {
        return gt::minimax_czeta(gt::design_from_name(design), theta, rho, nu);
      },
      py::arg("design"), py::arg("theta"), py::arg("rho"), py::arg("nu"),
      "min over (C, zeta) of max{f1/theta, f2_clamped}");

  py::class_<gt::ThresholdCoeff>(m, "ThresholdCoeff")
      .def_readonly("term1", &gt::ThresholdCoeff::term1)
      .def_readonly("term2", &gt::ThresholdCoeff::term2)
      .def_readonly("coeff", &gt::ThresholdCoeff::coeff)
      .def_readonly("capacity_binding", &gt::ThresholdCoeff::capacity_binding)
      .def_readonly("c_star", &gt::ThresholdCoeff::c_star)
      .def_readonly("zeta_star", &gt::ThresholdCoeff::zeta_star)
      .def_readonly("d_star", &gt::ThresholdCoeff::d_star)
      .def_readonly("converged", &gt::ThresholdCoeff::converged)
      .def("__repr__", [](const gt::ThresholdCoeff& t) {
        std::ostringstream ss;
        ss << "ThresholdCoeff(coeff=" << t.coeff
           << ", capacity_binding=" << t.capacity_binding << ")";
        return ss.str();
      });
  m.def(
      "threshold_coeff",
      [](const std::string& design, double theta, double rho, double nu) {
        return gt::threshold_coeff(gt::design_from_name(design), theta, rho, nu);
      },
      py::arg("design"), py::arg("theta"), py::arg("rho"), py::arg("nu"),
      "Coefficient of k ln(p/k) in the exact number-of-tests threshold");
  m.def(
      "rate",
      [](const std::string& design, double theta, double rho, double nu) {
        return gt::rate(gt::design_from_name(design), theta, rho, nu);
      },
      py::arg("design"), py::arg("theta"), py::arg("rho"), py::arg("nu"),
      "Achievable rate in bits per test");

  py::class_<gt::NuOpt>(m, "NuOpt")
      .def_readonly("nu", &gt::NuOpt::nu)
      .def_readonly("rate", &gt::NuOpt::rate)
      .def_readonly("bracket_ok", &gt::NuOpt::bracket_ok)
      .def("__repr__", [](const gt::NuOpt& r) {
        std::ostringstream ss;
        ss << "NuOpt(nu=" << r.nu << ", rate=" << r.rate << ")";
        return ss.str();
      });
  m.def(
      "optimize_nu",
      [](const std::string& design, double theta, double rho) {
        return gt::optimize_nu(gt::design_from_name(design), theta, rho);
      },
      py::arg("design"), py::arg("theta"), py::arg("rho"),
      "Maximize the rate over the design density");

  py::class_<gt::MutualInfo>(m, "MutualInfo")
      .def_readonly("value", &gt::MutualInfo::value)
      .def_property_readonly("regime",
                             [](const gt::MutualInfo& mi) {
                               return mi.regime == gt::MiRegime::small_ell
                                          ? "small_ell"
                                          : "proportional";
                             })
      .def("__repr__", [](const gt::MutualInfo& mi) {
        std::ostringstream ss;
        ss << "MutualInfo(value=" << mi.value << ")";
        return ss.str();
      });
  m.def(
      "asymptotic_mutual_info",
      [](const std::string& design, double n, std::int64_t k, std::int64_t ell,
         double rho, double nu) {
        return gt::asymptotic_mutual_info(gt::design_from_name(design), n, k,
                                          ell, rho, nu);
      },
      py::arg("design"), py::arg("n"), py::arg("k"), py::arg("ell"),
      py::arg("rho"), py::arg("nu"));

  // designs and the outcome channel
  py::class_<gt::TestMatrix>(m, "TestMatrix")
      .def_readonly("n", &gt::TestMatrix::n)
      .def_readonly("p", &gt::TestMatrix::p)
      .def_property_readonly(
          "design",
          [](const gt::TestMatrix& mat) { return gt::design_name(mat.design); })
      .def_readonly("nu", &gt::TestMatrix::nu)
      .def_readonly("seed", &gt::TestMatrix::seed)
      .def_readonly("columns", &gt::TestMatrix::columns)
      .def_readonly("rows", &gt::TestMatrix::rows)
      .def("__repr__", [](const gt::TestMatrix& mat) {
        std::ostringstream ss;
        ss << "TestMatrix(n=" << mat.n << ", p=" << mat.p << ", design='"
           << gt::design_name(mat.design) << "')";
        return ss.str();
      });
  m.def(
      "gen_matrix",
      [](std::int64_t p, std::int64_t k, std::int64_t n, double rho, double nu,
         const std::string& design, std::uint64_t seed) {
        return gt::gen_matrix(make_params(p, k, n, rho, nu, design, seed));
      },
      py::arg("p"), py::arg("k"), py::arg("n"), py::arg("rho"), py::arg("nu"),
      py::arg("design"), py::arg("seed"),
      "Draw a seeded random test design; columns[j] lists item j's tests");
  m.def(
      "nc_delta",
      [](std::int64_t p, std::int64_t k, std::int64_t n, double nu) {
        return gt::nc_delta(make_params(p, k, n, 0.0, nu, "nc", 0));
      },
      py::arg("p"), py::arg("k"), py::arg("n"), py::arg("nu"),
      "Placements per item for the near-constant-weight design");

  py::class_<gt::DesignStats>(m, "DesignStats")
      .def_readonly("n0", &gt::DesignStats::n0)
      .def_readonly("degree1", &gt::DesignStats::degree1)
      .def_readonly("repeat_defectives", &gt::DesignStats::repeat_defectives);
  m.def("design_stats", &gt::design_stats, py::arg("matrix"),
        py::arg("defectives"));
  m.def(
      "dump_matrix",
      [](const gt::TestMatrix& mat) {
        std::ostringstream ss;
        gt::dump_matrix(mat, ss);
        return ss.str();
      },
      py::arg("matrix"), "Plain-text dump: header line, then one line per item");

  m.def("noiseless_outcomes", &gt::noiseless_outcomes, py::arg("matrix"),
        py::arg("defectives"));
  m.def("apply_noise", &gt::apply_noise, py::arg("outcomes"), py::arg("rho"),
        py::arg("seed"));
  m.def("simulate_outcomes", &gt::simulate_outcomes, py::arg("matrix"),
        py::arg("defectives"), py::arg("rho"), py::arg("noise_seed"));

  // decoders
  m.def("count_correct", &gt::count_correct, py::arg("matrix"),
        py::arg("outcomes"), py::arg("candidate"),
        "Number of tests whose outcome matches the candidate's noiseless OR");
  py::class_<gt::DecodeResult>(m, "DecodeResult")
      .def_property_readonly(
          "status",
          [](const gt::DecodeResult& r) { return gt::decode_status_name(r.status); })
      .def_readonly("estimate", &gt::DecodeResult::estimate)
      .def_readonly("correct_tests", &gt::DecodeResult::correct_tests)
      .def("__repr__", [](const gt::DecodeResult& r) {
        std::ostringstream ss;
        ss << "DecodeResult(status='" << gt::decode_status_name(r.status)
           << "', correct_tests=" << r.correct_tests << ")";
        return ss.str();
      });
  m.def("mle_exact", &gt::mle_exact, py::arg("matrix"), py::arg("outcomes"),
        py::arg("k"), py::arg("max_candidates") = 2000000,
        "Exhaustive maximum-likelihood decoding over all k-subsets");
  m.def("mle_restricted", &gt::mle_restricted, py::arg("matrix"),
        py::arg("outcomes"), py::arg("reference"), py::arg("radius") = -1,
        py::arg("max_candidates") = 2000000,
        "Maximum likelihood within a swap radius of the reference set");
  m.def("default_swap_radius", &gt::default_swap_radius, py::arg("k"));
  py::class_<gt::InfoDensity>(m, "InfoDensity")
      .def_readonly("value", &gt::InfoDensity::value)
      .def_readonly("surrogate", &gt::InfoDensity::surrogate)
      .def("__repr__", [](const gt::InfoDensity& d) {
        std::ostringstream ss;
        ss << "InfoDensity(value=" << d.value << ", surrogate=" << d.surrogate
           << ")";
        return ss.str();
      });
  m.def("info_density", &gt::info_density, py::arg("matrix"),
        py::arg("outcomes"), py::arg("s_dif"), py::arg("s_eq"), py::arg("rho"),
        "Log likelihood ratio for excluding s_dif, summed over tests");
  py::class_<gt::GammaSchedule>(m, "GammaSchedule")
      .def_readonly("ell_min", &gt::GammaSchedule::ell_min)
      .def_readonly("delta1", &gt::GammaSchedule::delta1)
      .def_readonly("gamma", &gt::GammaSchedule::gamma)
      .def("at", &gt::GammaSchedule::at, py::arg("ell"));
  m.def("gamma_schedule", &gt::gamma_schedule, py::arg("p"), py::arg("k"),
        py::arg("delta1") = 0.1);
  m.def("threshold_decoder", &gt::threshold_decoder, py::arg("matrix"),
        py::arg("outcomes"), py::arg("k"), py::arg("schedule"), py::arg("rho"),
        py::arg("max_candidates") = 2000000);
  m.def("hybrid_decoder", &gt::hybrid_decoder, py::arg("matrix"),
        py::arg("outcomes"), py::arg("k"), py::arg("schedule"), py::arg("rho"),
        py::arg("max_candidates") = 2000000);
  m.def("ncomp_baseline", &gt::ncomp_baseline, py::arg("matrix"),
        py::arg("outcomes"), py::arg("k"), py::arg("threshold_fraction") = 1.0,
        "Column-wise baseline: k items with the fewest negative placements");

  // failure events around a planted set
  py::class_<gt::MaskingStats>(m, "MaskingStats")
      .def_readonly("mj", &gt::MaskingStats::mj)
      .def_readonly("mj0", &gt::MaskingStats::mj0)
      .def_readonly("mj1", &gt::MaskingStats::mj1)
      .def_readonly("n0", &gt::MaskingStats::n0)
      .def_readonly("n00", &gt::MaskingStats::n00)
      .def_readonly("n01", &gt::MaskingStats::n01)
      .def_readonly("m_prime", &gt::MaskingStats::m_prime);
  m.def("masking_stats", &gt::masking_stats, py::arg("matrix"),
        py::arg("outcomes"), py::arg("s"), py::arg("j_subset"));
  py::class_<gt::FeasiblePair>(m, "FeasiblePair")
      .def_readonly("ell", &gt::FeasiblePair::ell)
      .def_readonly("mj", &gt::FeasiblePair::mj)
      .def_readonly("mj0", &gt::FeasiblePair::mj0)
      .def_readonly("C", &gt::FeasiblePair::C)
      .def_readonly("zeta", &gt::FeasiblePair::zeta);
  m.def("derive_feasible_pair", &gt::derive_feasible_pair, py::arg("stats"),
        py::arg("ell"), py::arg("n"), py::arg("k"), py::arg("nu"));
  py::class_<gt::GainCounts>(m, "GainCounts")
      .def_readonly("g1", &gt::GainCounts::g1)
      .def_readonly("g2", &gt::GainCounts::g2);
  m.def("g_counts", &gt::g_counts, py::arg("matrix"), py::arg("outcomes"),
        py::arg("s"), py::arg("j_subset"), py::arg("j_prime"));
  py::class_<gt::Witness>(m, "Witness")
      .def_readonly("ell", &gt::Witness::ell)
      .def_readonly("C", &gt::Witness::C)
      .def_readonly("zeta", &gt::Witness::zeta)
      .def_readonly("j_subset", &gt::Witness::j_subset)
      .def_readonly("j_prime", &gt::Witness::j_prime)
      .def_readonly("g1", &gt::Witness::g1)
      .def_readonly("g2", &gt::Witness::g2)
      .def_readonly("margin", &gt::Witness::margin);
  py::class_<gt::FailureCheck>(m, "FailureCheck")
      .def_readonly("decoder_failed", &gt::FailureCheck::decoder_failed)
      .def_readonly("strict_witness_found", &gt::FailureCheck::strict_witness_found)
      .def_readonly("geq_witness_found", &gt::FailureCheck::geq_witness_found)
      .def_readonly("identity_ok", &gt::FailureCheck::identity_ok)
      .def_readonly("pairs_checked", &gt::FailureCheck::pairs_checked)
      .def_readonly("witnesses", &gt::FailureCheck::witnesses);
  m.def("check_failure_conditions", &gt::check_failure_conditions,
        py::arg("matrix"), py::arg("outcomes"), py::arg("s"),
        py::arg("radius") = -1, py::arg("max_witnesses") = 64,
        "Exhaustive audit of the swap failure characterization");
  py::class_<gt::KCountEntry>(m, "KCountEntry")
      .def_readonly("mj", &gt::KCountEntry::mj)
      .def_readonly("mj0", &gt::KCountEntry::mj0)
      .def_readonly("count", &gt::KCountEntry::count)
      .def_readonly("C", &gt::KCountEntry::C)
      .def_readonly("zeta", &gt::KCountEntry::zeta);
  m.def("enumerate_k_czeta", &gt::enumerate_k_czeta, py::arg("matrix"),
        py::arg("outcomes"), py::arg("s"), py::arg("ell"));

  m.def("substream_seed", &gt::substream_seed, py::arg("root"),
        py::arg("index"), "Derive an independent child seed deterministically");

  py::register_exception<gt::budget_error>(m, "BudgetError", PyExc_RuntimeError);
}
