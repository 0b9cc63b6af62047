#pragma once

// Reduced multivariate polynomials over F_p: every exponent is < p (reduced
// through x^p = x as functions on F_p), so distinct stored forms are distinct
// functions. Terms are kept in a fixed graded order (total degree first,
// then lexicographic with variable 1 most significant), which is also the
// normative order for serialization and enumeration.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hofa/fp.hpp"

namespace hofa {

using Monomial = std::vector<std::uint8_t>;

struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Rng;

class Polynomial {
 public:
  using TermMap = std::map<Monomial, std::uint32_t, MonomialOrder>;

  Polynomial(std::uint32_t p, std::uint32_t n);  // the zero polynomial

  static Polynomial monomial(std::uint32_t p, std::uint32_t n,
                             std::span<const std::uint32_t> exponents, std::uint32_t coeff);
  static Polynomial constant(std::uint32_t p, std::uint32_t n, std::uint32_t c);
  static Polynomial variable(std::uint32_t p, std::uint32_t n, std::uint32_t index);

  // Seeded random polynomials (uniform coefficients over the monomial basis).
  static Polynomial random(std::uint32_t p, std::uint32_t n, std::uint32_t d, Rng& rng);
  static Polynomial random_homogeneous(std::uint32_t p, std::uint32_t n, std::uint32_t degree,
                                       Rng& rng);  // nonzero, degree exact

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  bool is_homogeneous() const noexcept;

  // Degree of the zero polynomial is -1.
  int degree() const noexcept;

  // Adds c * x^exponents, reducing exponents and dropping cancelled terms.
  void add_term(std::span<const std::uint32_t> exponents, std::uint32_t coeff);

  std::uint32_t eval_raw(std::span<const std::uint32_t> coords) const;
  FpScalar eval(const FpVector& x) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial scaled(std::uint32_t c) const;
  bool operator==(const Polynomial&) const = default;

  // Delta_y P with Delta_y P(x) = P(x+y) - P(x).
  Polynomial additive_derivative(const FpVector& y) const;

  // The part of total degree exactly l.
  Polynomial homogeneous_part(std::uint32_t l) const;

  // Coefficient row over a fixed monomial basis (for rank computations).
  std::vector<std::uint32_t> coefficients_on(const std::vector<Monomial>& basis) const;

 private:
  std::uint32_t p_;
  std::uint32_t n_;
  TermMap terms_;
};

Polynomial lincomb(std::span<const std::uint32_t> coeffs, std::span<const Polynomial> polys);

// An arbitrary function F_p^n -> F_p stored densely in idx_encode order.
struct FunctionTable {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::vector<std::uint32_t> values;
};

FunctionTable table_of(const Polynomial& poly);

// True iff every (d+1)-fold additive derivative of the table vanishes.
bool table_degree_le(const FunctionTable& table, std::uint32_t d);

// All reduced monomials with total degree <= d, in the canonical order.
std::vector<Monomial> monomial_basis(std::uint32_t p, std::uint32_t n, std::uint32_t d);

// Number of polynomials of degree <= d, i.e. p^|basis|, as a double
// (may exceed 64 bits).
double polynomial_count(std::uint32_t p, std::uint32_t n, std::uint32_t d);

// Streams every reduced polynomial of degree <= d exactly once, ordered
// lexicographically by coefficient vector over the monomial basis.
class PolynomialEnumerator {
 public:
  static constexpr std::uint64_t kDefaultBudget = std::uint64_t(1) << 24;

  PolynomialEnumerator(std::uint32_t p, std::uint32_t n, std::uint32_t d,
                       std::uint64_t budget = kDefaultBudget);

  const std::vector<Monomial>& basis() const noexcept { return basis_; }
  std::uint64_t count() const noexcept { return count_; }

  // Writes the next polynomial; returns false when exhausted.
  bool next(Polynomial& out);
  void reset();

 private:
  std::uint32_t p_, n_, d_;
  std::vector<Monomial> basis_;
  std::uint64_t count_ = 0;
  std::vector<std::uint32_t> coeffs_;
  bool done_ = false;
  bool started_ = false;
};

}  // namespace hofa
