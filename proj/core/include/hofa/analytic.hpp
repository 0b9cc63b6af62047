#pragma once

// Dense complex-valued functions on F_p^n and the analytic toolbox around
// them: bias, inner products, Fourier transforms, multiplicative
// derivatives, Gowers uniformity norms, and linear-form averages computed
// both by direct enumeration and through the Fourier kernel formula.
//
// Every big average runs through the fixed-chunk pairwise reduction in
// reduction.hpp, so results are bit-reproducible across thread counts.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hofa/fp.hpp"
#include "hofa/linear_system.hpp"
#include "hofa/polynomial.hpp"

namespace hofa {

using cplx = std::complex<double>;

// The p-th roots of unity; e(a) * e(b) stays one table lookup away from
// e(a+b), avoiding trig drift in long products.
class RootTable {
 public:
  explicit RootTable(std::uint32_t p);
  cplx operator()(std::uint32_t m) const { return roots_[m % p_]; }

 private:
  std::uint32_t p_;
  std::vector<cplx> roots_;
};

class DenseFunction {
 public:
  DenseFunction(std::uint32_t p, std::uint32_t n, std::vector<cplx> values);

  static DenseFunction constant(std::uint32_t p, std::uint32_t n, cplx value);
  // e_p(P(x)) for a polynomial P.
  static DenseFunction phase(const Polynomial& poly);
  static DenseFunction indicator(std::uint32_t p, std::uint32_t n,
                                 std::span<const std::uint64_t> points);
  static DenseFunction random_unimodular(std::uint32_t p, std::uint32_t n, std::uint64_t seed);
  static DenseFunction random_disk(std::uint32_t p, std::uint32_t n, std::uint64_t seed);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return values_.size(); }
  const std::vector<cplx>& values() const noexcept { return values_; }
  cplx operator[](std::uint64_t i) const { return values_[i]; }

  double sup_norm() const noexcept { return sup_norm_; }
  // Whether the function maps into the (slightly padded) unit disk.
  bool bounded() const noexcept { return sup_norm_ <= 1.0 + 1e-9; }

 private:
  std::uint32_t p_, n_;
  std::vector<cplx> values_;
  double sup_norm_ = 0.0;
};

DenseFunction pointwise_product(const DenseFunction& f, const DenseFunction& g);
DenseFunction conjugate(const DenseFunction& f);
DenseFunction operator+(const DenseFunction& f, const DenseFunction& g);
DenseFunction operator-(const DenseFunction& f, const DenseFunction& g);
DenseFunction scaled(const DenseFunction& f, cplx c);
DenseFunction shifted(const DenseFunction& f, cplx c);  // f + constant

class Spectrum {
 public:
  Spectrum(std::uint32_t p, std::uint32_t n, std::vector<cplx> coeffs);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return coeffs_.size(); }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  cplx operator[](std::uint64_t i) const { return coeffs_[i]; }

 private:
  std::uint32_t p_, n_;
  std::vector<cplx> coeffs_;
};

inline constexpr std::uint64_t kDefaultPointBudget = std::uint64_t(1) << 28;

double bias(const DenseFunction& f);
cplx mean(const DenseFunction& f);
cplx inner_product(const DenseFunction& f, const DenseFunction& g);
double l2_norm_sq(const DenseFunction& f);

// f(x + y) * conj(f(x)).
DenseFunction mult_derivative(const DenseFunction& f, const FpVector& y);
DenseFunction mult_derivative(const DenseFunction& f, std::uint64_t y_index);

enum class FourierMethod { direct, radix };

Spectrum fourier(const DenseFunction& f, FourierMethod method = FourierMethod::direct);
DenseFunction inverse_fourier(const Spectrum& spectrum,
                              FourierMethod method = FourierMethod::direct);

enum class GowersMethod { automatic, direct, recursive };

// The k-th Gowers uniformity norm. The direct path enumerates the full
// (k+1)-dimensional cube and is budget-guarded; the recursive path averages
// norms of multiplicative derivatives. They agree to floating-point noise.
double gowers_norm(const DenseFunction& f, std::uint32_t k,
                   GowersMethod method = GowersMethod::automatic,
                   std::uint64_t budget = kDefaultPointBudget);

// E prod_{S subset [k]} conj^{k-|S|} family[S](X + sum_{i in S} Y_i), the
// family indexed by subset bitmask; bounded by the product of U^k norms.
cplx gowers_inner_product(std::span<const DenseFunction> family,
                          std::uint64_t budget = kDefaultPointBudget);

// E prod_i fs[i](L_i(X)) over X in (F_p^n)^k, by direct enumeration.
cplx t_average_naive(const LinearSystem& system, std::span<const DenseFunction> fs,
                     std::uint64_t budget = kDefaultPointBudget);
cplx t_average_naive(const LinearSystem& system, const DenseFunction& f,
                     std::uint64_t budget = kDefaultPointBudget);

// Same average through the Fourier kernel: the sum of prod_i fhat(alpha_i)
// over all tuples with sum_i lambda_{i,j} alpha_i = 0 for every j.
cplx t_average_fourier(const LinearSystem& system, const DenseFunction& f,
                       std::uint64_t budget = kDefaultPointBudget);

}  // namespace hofa
