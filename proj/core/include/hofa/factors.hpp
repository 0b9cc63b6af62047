#pragma once

// Polynomial factors: sigma-algebras on F_p^n whose atoms are the joint
// level sets of a list of defining polynomials. On top of them sit
// conditional expectation, exhaustive rank certification at desk scale,
// regularization to high rank, and the energy-increment decomposition of a
// bounded function into a structured part (its projection on a factor) plus
// a residual with small Gowers norm. At these sizes the exhaustive search
// over low-degree polynomials plays the role of the inverse theorem: if any
// phase of degree <= d correlates with the residual, the search finds the
// best one.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hofa/analytic.hpp"
#include "hofa/polynomial.hpp"

namespace hofa {

class PolynomialFactor {
 public:
  PolynomialFactor(std::uint32_t p, std::uint32_t n, std::vector<Polynomial> polys);
  static PolynomialFactor trivial(std::uint32_t p, std::uint32_t n);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t complexity() const noexcept { return static_cast<std::uint32_t>(polys_.size()); }
  int degree() const noexcept;  // max degree of the defining polynomials; -1 if none
  const std::vector<Polynomial>& polys() const noexcept { return polys_; }

  // Atom identifier of each point: the defining polynomials' value tuple,
  // encoded base p.
  const std::vector<std::uint64_t>& atom_keys() const noexcept { return atom_keys_; }
  std::uint64_t num_atoms() const noexcept { return num_atoms_; }
  // Dense atom index per point, in [0, num_atoms).
  const std::vector<std::uint32_t>& atom_index() const noexcept { return atom_index_; }

  // Every atom of this factor lies inside one atom of `coarser`.
  bool refines(const PolynomialFactor& coarser) const;

 private:
  std::uint32_t p_, n_;
  std::vector<Polynomial> polys_;
  std::vector<std::uint64_t> atom_keys_;
  std::vector<std::uint32_t> atom_index_;
  std::uint64_t num_atoms_ = 0;
};

// Atom-wise averaging projection. Mean-preserving and idempotent.
DenseFunction conditional_expectation(const DenseFunction& f, const PolynomialFactor& factor);

// Both sides of <f, g> = <E(f|B), g> for a factor-measurable g.
// Throws if g is not constant on the atoms.
std::pair<cplx, cplx> project_check(const DenseFunction& f, const DenseFunction& g,
                                    const PolynomialFactor& factor);

struct RankBudget {
  std::uint64_t max_tuples = std::uint64_t(1) << 22;  // candidate Q-tuples per combination
  std::uint64_t enum_budget = PolynomialEnumerator::kDefaultBudget;
  bool allow_bias_fallback = true;
  // Caller-configured stand-in for the (non-explicit) bias->rank bound,
  // recorded into bias-bound certificates; 0 means unspecified.
  std::uint32_t bias_rank_bound = 0;
};

struct RankCertificate {
  enum class Kind { exhaustive, bias_bound, none };

  Kind kind = Kind::none;
  std::uint32_t r = 0;       // the bound tested
  bool rank_exceeds = false;  // exhaustive only: certified rank > r

  // Low-rank witness (exhaustive search, rank_exceeds == false):
  // sum_j alpha_j P_j = Gamma(Q_1, ..., Q_r).
  struct Witness {
    std::vector<std::uint32_t> alpha;
    std::vector<Polynomial> qs;
    std::unordered_map<std::uint64_t, std::uint32_t> gamma;  // Q-value key -> value
  };
  std::optional<Witness> witness;

  // Bias-bound fallback: max bias over nonzero combinations, plus the
  // configured bound.
  double measured_bias = 0.0;
  std::uint32_t configured_bound = 0;
};

// Re-evaluates an exhaustive low-rank witness pointwise.
bool verify_witness(const RankCertificate& cert, std::span<const Polynomial> polys);

// Whether the set has rank greater than r. Exhaustive when the search space
// fits the budget: every nonzero combination is tested against every
// r-tuple of lower-degree polynomials. Otherwise measures biases and
// returns a bias-bound record (or kind none when the fallback is off).
RankCertificate rank_gt(std::span<const Polynomial> polys, std::uint32_t r,
                        const RankBudget& budget = {});

// Growth function r(C) for regularization: either the formula C + offset or
// an explicit sequence.
struct GrowthSpec {
  std::int64_t offset = 1;
  std::vector<std::uint32_t> sequence;  // overrides the formula when nonempty

  std::uint32_t eval(std::uint32_t c) const;
  static GrowthSpec parse(const std::string& text);  // accepts "r(C)=C+<int>"
  std::string text() const;
};

// Refines the factor until its polynomial set certifies rank > r(C').
// Each step replaces a maximal-degree generator of a low-rank combination
// by the witnessing lower-degree polynomials, so the degree multiset drops
// and the loop terminates.
PolynomialFactor refine_to_high_rank(const PolynomialFactor& factor, const GrowthSpec& growth,
                                     const RankBudget& budget = {});

struct DecomposeConfig {
  std::uint32_t d = 1;           // factor degree bound
  double epsilon = 0.1;          // residual Gowers-norm target, U^{d+1}
  double delta = 0.0;            // correlation threshold; 0 means epsilon/2
  std::uint32_t max_steps = 0;   // 0 means ceil(1/delta^2) + 1
  std::uint64_t enum_budget = PolynomialEnumerator::kDefaultBudget;
  std::uint64_t point_budget = kDefaultPointBudget;
  bool regularize = false;       // refine to high rank as the factor grows
  GrowthSpec growth;

  double effective_delta() const;
  std::uint32_t effective_max_steps() const;
  void validate(std::uint32_t p) const;  // needs 0 < delta <= epsilon <= 1, d < p
};

struct DecomposeStep {
  double energy_before = 0.0;     // ||f - E(f|B)||_2^2 entering the step
  double correlation = 0.0;       // |<g, e_p(P))>| of the chosen polynomial
  std::size_t function_index = 0; // which function drove the step
  Polynomial chosen;
};

enum class DecomposeStatus { converged, max_steps_reached };

struct DecomposeResult {
  PolynomialFactor factor;
  DenseFunction structured;  // E(f|B)
  DenseFunction residual;    // f - structured
  double residual_norm = 0.0;
  DecomposeStatus status = DecomposeStatus::converged;
  std::vector<DecomposeStep> trace;
  std::vector<double> energy_trace;  // per step, entering energies
  std::optional<RankCertificate> certificate;
};

// f = E(f|B) + residual with ||residual||_{U^{d+1}} <= epsilon, or
// max_steps reported. The energy ||f - E(f|B)||_2^2 drops by at least the
// squared found correlation at every step.
DecomposeResult decompose(const DenseFunction& f, const DecomposeConfig& cfg);

struct MultiDecomposeResult {
  PolynomialFactor factor;  // shared; generators homogeneous
  std::vector<DenseFunction> structured;
  std::vector<DenseFunction> residuals;
  std::vector<double> residual_norms;
  DecomposeStatus status = DecomposeStatus::converged;
  std::vector<DecomposeStep> trace;
  std::optional<RankCertificate> certificate;
};

// One shared factor for several functions; every found polynomial is split
// into homogeneous parts before entering the factor.
MultiDecomposeResult decompose_multi(std::span<const DenseFunction> fs,
                                     const DecomposeConfig& cfg);

}  // namespace hofa
