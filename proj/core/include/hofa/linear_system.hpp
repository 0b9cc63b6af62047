#pragma once

// Systems of linear forms over F_p and their complexity measures.
//
// True complexity is computed from the algebraic criterion: the least d
// such that the (d+1)-st tensor powers of the forms are linearly
// independent over F_p. Cauchy-Schwarz complexity is the least s such
// that, for every form, the remaining forms split into s+1 groups none of
// whose spans contain it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hofa/fp.hpp"
#include "hofa/gf.hpp"

namespace hofa {

class LinearForm {
 public:
  LinearForm(std::uint32_t p, std::vector<std::uint32_t> coeffs);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t k() const noexcept { return static_cast<std::uint32_t>(coeffs_.size()); }
  std::uint32_t operator[](std::uint32_t i) const { return coeffs_[i]; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return coeffs_; }

  bool is_zero() const noexcept;
  bool operator==(const LinearForm&) const = default;

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> coeffs_;
};

class LinearSystem {
 public:
  explicit LinearSystem(std::vector<LinearForm> forms);  // distinct, same p and k

  std::uint32_t p() const noexcept { return forms_[0].p(); }
  std::uint32_t k() const noexcept { return forms_[0].k(); }
  std::uint32_t m() const noexcept { return static_cast<std::uint32_t>(forms_.size()); }
  const LinearForm& form(std::uint32_t i) const { return forms_[i]; }
  const std::vector<LinearForm>& forms() const noexcept { return forms_; }

  // nullopt when no pair is proportional; otherwise an offending pair.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> proportional_pair() const;

  bool operator==(const LinearSystem&) const = default;

 private:
  std::vector<LinearForm> forms_;
};

// Arithmetic-progression system {x, x+y, ..., x+(len-1)y}.
LinearSystem arithmetic_progression(std::uint32_t p, std::uint32_t len);

// Full d-th tensor power as a vector of length k^d (little-endian
// multi-index order). Guarded by a budget since k^d grows fast.
std::vector<std::uint32_t> tensor_power(const LinearForm& form, std::uint32_t d,
                                        std::uint64_t budget = std::uint64_t(1) << 24);

// Entries of the tensor power over sorted multi-indices only. Duplicate
// coordinates of the full tensor are dropped, which preserves ranks and
// span relations while staying polynomial-sized.
std::vector<std::uint32_t> tensor_power_compressed(const LinearForm& form, std::uint32_t d);

struct TrueComplexityResult {
  std::uint32_t d = 0;
  // (d, rank of the (d+1)-st powers) for each candidate tried.
  std::vector<std::pair<std::uint32_t, std::size_t>> rank_trace;
};

TrueComplexityResult true_complexity(const LinearSystem& system, std::uint32_t d_max = 16);

struct CsComplexityResult {
  std::uint32_t s = 0;
  // witness_partitions[i] = groups of indices into the other forms,
  // none of whose spans contain form i.
  std::vector<std::vector<std::vector<std::uint32_t>>> witness_partitions;
  bool upper_bound_only = false;  // greedy only (m too large for exact search)
};

CsComplexityResult cs_complexity(const LinearSystem& system, std::uint32_t exact_limit = 8);

// A vector v with L_i(v) = 1 for every i, when one exists. Existence is
// equivalent to shift-invariance of the joint output distribution.
std::optional<FpVector> homogeneity_witness(const LinearSystem& system);

// Invertible change of variables making variable 1 have coefficient one in
// every form. Throws ValidationError on non-homogeneous systems.
LinearSystem canonicalize_homogeneous(const LinearSystem& system);

// A bijection (as a permutation of form indices) under which the two
// systems have identical linear dependencies, if one exists. Brute force
// over permutations; m must be at most perm_limit.
std::optional<std::vector<std::uint32_t>> systems_isomorphic(const LinearSystem& a,
                                                             const LinearSystem& b,
                                                             std::uint32_t perm_limit = 8);

// Canonical label of the dependency structure: the lexicographically least
// relation-space matrix over all form permutations. Isomorphic systems get
// equal keys.
std::string isomorphism_key(const LinearSystem& system, std::uint32_t perm_limit = 8);

struct ComplexityReport {
  std::uint32_t cs = 0;
  std::uint32_t true_d = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> witness_partitions;
  std::vector<std::pair<std::uint32_t, std::size_t>> rank_trace;
  bool cs_upper_bound_only = false;
  bool true_d_is_zero = false;        // flagged: some conventions start at d = 1
  std::uint32_t true_d_min1 = 1;      // answer under the d >= 1 convention
  bool cs_exceeds_p = false;          // tensor criterion assumes s <= p
  std::optional<std::vector<std::uint32_t>> homogeneous_witness;
};

ComplexityReport analyze(const LinearSystem& system);

}  // namespace hofa
