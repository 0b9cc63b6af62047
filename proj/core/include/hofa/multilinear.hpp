#pragma once

// Polarization of homogeneous polynomials into symmetric multilinear forms,
// expansion of P(L(x)) over the sorted multi-index basis, and the exact
// coefficient test for whether a combination
//
//   sum_i sum_j lambda[i][j] * P_i(L_j(x))
//
// vanishes identically. For linearly independent collections the verdict
// depends only on the coefficients, the forms, and the degree sequence,
// never on the particular polynomials; this module computes that verdict
// and, for cross-checking, also evaluates concrete instances by brute
// force. Degrees must stay below p throughout (d! must be invertible).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hofa/linear_system.hpp"
#include "hofa/polynomial.hpp"

namespace hofa {

// Non-decreasing tuple over variables [0, k); the canonical representative
// of one symmetric coordinate class.
struct MultisetIndex {
  std::vector<std::uint32_t> entries;

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(entries.size()); }
  auto operator<=>(const MultisetIndex&) const = default;
};

// All of them, in lexicographic order.
std::vector<MultisetIndex> enumerate_multisets(std::uint32_t k, std::uint32_t d);

// Number of distinct permutations of the tuple, reduced mod p; nonzero
// whenever the length is below p. Throws for length >= p.
std::uint32_t multiset_permutation_count(const MultisetIndex& u, std::uint32_t p);

// prod_j lambda_{u_j} for the given form.
std::uint32_t multiset_form_product(const MultisetIndex& u, const LinearForm& form);

// A symmetric multilinear form B(x_1,...,x_d) on (F_p^n)^d, stored by its
// sorted coordinate tuples. Construct via polarize().
class SymMultilinearForm {
 public:
  SymMultilinearForm(std::uint32_t p, std::uint32_t n, std::uint32_t d);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t d() const noexcept { return d_; }

  void set_entry(std::vector<std::uint32_t> sorted_vars, std::uint32_t value);
  const std::map<std::vector<std::uint32_t>, std::uint32_t>& entries() const { return entries_; }

  // B(args[0], ..., args[d-1]); multilinear and symmetric by construction.
  std::uint32_t eval(std::span<const FpVector> args) const;

  // B(x, ..., x); equals the polarized polynomial on the diagonal.
  std::uint32_t eval_diagonal(const FpVector& x) const;

 private:
  std::uint32_t p_, n_, d_;
  // sorted variable tuple -> tensor entry (the common value over its orbit)
  std::map<std::vector<std::uint32_t>, std::uint32_t> entries_;
};

// The unique symmetric multilinear B with B(x,...,x) = P(x), computed via
// the 2^d inclusion-exclusion polarization identity. Requires P homogeneous
// of degree 1 <= d < p.
SymMultilinearForm polarize(const Polynomial& poly);

// Coefficients of P(L(x)) over the basis B(x_u), u a sorted multi-index:
// the coefficient at u is (number of permutations of u) * prod_j lambda_{u_j}.
// Aligned with enumerate_multisets(form.k(), deg P).
std::vector<std::uint32_t> expand_composition(const Polynomial& poly, const LinearForm& form);

// Coefficient matrix lambda[i][j]: polynomial i against form j.
using CoefficientMatrix = std::vector<std::vector<std::uint32_t>>;

// Layered coefficients of the combination sum_{i,j} lambda[i][j] P_i(L_j):
// for polynomial slot i and layer l in [1, d_i], one value per multiset
// u in U^l. These depend only on (lambda, forms, degrees).
class LayerCoefficients {
 public:
  LayerCoefficients(std::uint32_t p, std::uint32_t num_vars, std::vector<std::uint32_t> degrees);

  std::uint32_t degree(std::size_t poly) const { return degrees_[poly]; }
  std::size_t num_polys() const noexcept { return degrees_.size(); }

  std::uint32_t& at(std::size_t poly, std::uint32_t layer, std::size_t multiset_pos);
  std::uint32_t at(std::size_t poly, std::uint32_t layer, std::size_t multiset_pos) const;
  std::span<const std::uint32_t> layer(std::size_t poly, std::uint32_t layer) const;

  bool top_layers_zero() const;
  bool all_layers_zero() const;

 private:
  std::vector<std::uint32_t> degrees_;
  std::vector<std::vector<std::vector<std::uint32_t>>> values_;  // [poly][layer-1][pos]
};

LayerCoefficients layer_coefficients(const CoefficientMatrix& lambda, const LinearSystem& system,
                                     std::span<const std::uint32_t> degrees);

// Exact zero test from coefficients alone. Valid for linearly independent
// collections: homogeneous polynomials over any system, or general
// polynomials over a homogeneous system (which is canonicalized first; the
// top layer then determines all lower layers). The unsupported combination
// -- general polynomials over a non-homogeneous system -- throws.
bool composition_vanishes(const CoefficientMatrix& lambda, const LinearSystem& system,
                          std::span<const std::uint32_t> degrees, bool homogeneous_polys);

// Instantiates concrete polynomials and evaluates the combination at every
// point of (F_p^n)^k.
bool composition_vanishes_bruteforce(const CoefficientMatrix& lambda, const LinearSystem& system,
                                     std::span<const Polynomial> polys);

// Coefficient test when the collection is linearly independent over the
// degree-d monomial basis, brute force otherwise. `used_bruteforce` reports
// which route ran.
bool composition_vanishes_checked(const CoefficientMatrix& lambda, const LinearSystem& system,
                                  std::span<const Polynomial> polys,
                                  bool* used_bruteforce = nullptr);

struct CollapseAssignment {
  std::vector<std::uint32_t> point;  // a in F_p^k
  std::uint32_t scale;               // nonzero alpha with Q(a_1 w,..) = alpha B(w,..)
};

// Given coefficients of Q = sum_u c_u B(x_u) over U^d, finds the first
// point a (in index order) where the collapse polynomial g(a) = sum c_u a^u
// is nonzero. Empty only when every coefficient is zero.
std::optional<CollapseAssignment> collapse_assignment(std::uint32_t p, std::uint32_t k,
                                                      std::uint32_t d,
                                                      std::span<const std::uint32_t> coeffs);

}  // namespace hofa
