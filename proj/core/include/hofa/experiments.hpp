#pragma once

// Desk-scale verification experiments. Each one measures every quantity it
// mentions and asserts only inequalities whose terms are measured; no
// appeal to non-explicit constants. Reports embed their parameters and
// seeds, so re-running them reproduces every recorded number bit-for-bit.
//
// Assertions come in two kinds: hard ones are backed by finite, exact
// statements (a failure means a bug), soft ones record empirical behaviour
// the asymptotic theory predicts but does not quantify at this scale.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hofa/analytic.hpp"
#include "hofa/codec.hpp"
#include "hofa/factors.hpp"
#include "hofa/linear_system.hpp"

namespace hofa {

struct Assertion {
  std::string name;
  bool hard = true;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ExperimentReport {
  std::string id;
  json params = json::object();
  json measurements = json::object();
  std::vector<Assertion> assertions;
  bool vacuous = false;  // hypothesis gate failed; nothing was asserted
  double runtime_ms = 0.0;

  bool passed() const;  // every hard assertion holds (or the report is vacuous)
  json to_json() const;
};

enum class CompanionFunctions { ones, random_unimodular };

// Builds f_1 as a nondegenerate degree-(d+1) phase (its U^{d+1} norm has a
// closed form and shrinks with n) and companions per `others`; requires
// that the first form's (d+1)-st tensor power avoid the span of the rest,
// otherwise the report is marked vacuous. Asserts the Cauchy-Schwarz-level
// bound on |t| at each n and co-decrease of |t| along the n sweep.
ExperimentReport verify_strong_independence(const LinearSystem& system, std::uint32_t d,
                                            std::uint32_t n_lo, std::uint32_t n_hi,
                                            CompanionFunctions others = CompanionFunctions::ones,
                                            std::uint64_t seed = 1);

// For function pairs (f_i, g_i): measures U^{d+1} and U^{s+1} distances,
// asserts the telescoping bound |t(f) - t(g)| <= sum_i ||f_i - g_i||_{U^{s+1}}
// and the per-subset bounds on products of the differences; records the
// d-level variant as a soft check.
ExperimentReport verify_avg_approx(const LinearSystem& system, std::uint32_t d,
                                   std::span<const DenseFunction> fs,
                                   std::span<const DenseFunction> gs);

// Default pair battery for verify_avg_approx at dimension n.
void make_avg_approx_battery(const LinearSystem& system, std::uint32_t d, std::uint32_t n,
                             std::uint64_t seed, std::vector<DenseFunction>& fs,
                             std::vector<DenseFunction>& gs);

// f = Gamma(P_1..P_k), g = Gamma(Q_1..Q_k) with deg P_i = deg Q_i; scans
// every nonzero coefficient pattern for the bias of the induced
// combinations, checks that the two zero sets coincide, and asserts
// |t(f) - t(g)| <= 2 * eps_meas * p^{mk}.
ExperimentReport verify_invariance(std::span<const Polynomial> ps,
                                   std::span<const Polynomial> qs, const LinearSystem& system,
                                   std::span<const cplx> gamma_table);

struct PipelineConfig {
  std::uint32_t factor_degree = 1;  // degree of the decomposition factor
  std::uint32_t d = 1;              // uniformity level used to classify terms
  double epsilon = 0.3;
  std::uint64_t term_budget = std::uint64_t(1) << 22;  // p^{mC} cap
};

// Runs the shared decomposition with eta = epsilon / 2m, expands the
// structured parts over the factor's exponential basis, reconciles the
// term sum against the direct average, and checks that every term whose
// exponential average is (numerically) one corresponds to an identically
// vanishing combination.
ExperimentReport verify_pipeline_section6(const LinearSystem& system,
                                          std::span<const DenseFunction> fs,
                                          const PipelineConfig& cfg);

// Named batteries: "strong_independence", "avg_approx", "invariance",
// "pipeline6", or "all".
std::vector<ExperimentReport> run_suite(const std::string& name);

json suite_to_json(std::span<const ExperimentReport> reports);
std::string suite_table(std::span<const ExperimentReport> reports);

}  // namespace hofa
