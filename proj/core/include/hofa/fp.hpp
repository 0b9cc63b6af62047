#pragma once

// Arithmetic in the prime field F_p and in F_p^n, plus the little-endian
// bijection between F_p^n and dense array indices in [0, p^n).
// Coordinate 1 is least significant: index = sum_i v(i) * p^(i-1).

#include <cstdint>
#include <span>
#include <vector>

#include "hofa/errors.hpp"

namespace hofa {

bool is_prime(std::uint32_t p) noexcept;

// Throws ValidationError unless p is prime (trial division; p is small here).
void require_prime(std::uint32_t p);

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t exp, std::uint32_t p) noexcept;
std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p);

// base^exp as a checked 64-bit value; throws ValidationError on overflow.
std::uint64_t checked_pow(std::uint32_t base, std::uint32_t exp);

class FpScalar {
 public:
  FpScalar(std::uint64_t value, std::uint32_t p);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t modulus() const noexcept { return p_; }

  FpScalar operator+(const FpScalar& rhs) const;
  FpScalar operator-(const FpScalar& rhs) const;
  FpScalar operator*(const FpScalar& rhs) const;
  FpScalar operator-() const;
  FpScalar inverse() const;
  bool operator==(const FpScalar&) const noexcept = default;

 private:
  std::uint32_t value_;
  std::uint32_t p_;
};

class FpVector {
 public:
  FpVector(std::uint32_t p, std::vector<std::uint32_t> coords);
  static FpVector zero(std::uint32_t p, std::uint32_t n);

  std::uint32_t modulus() const noexcept { return p_; }
  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(coords_.size()); }
  std::uint32_t operator[](std::uint32_t i) const { return coords_[i]; }
  const std::vector<std::uint32_t>& coords() const noexcept { return coords_; }

  FpVector operator+(const FpVector& rhs) const;
  FpVector scaled(std::uint32_t c) const;
  bool operator==(const FpVector&) const noexcept = default;

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> coords_;
};

FpScalar dot(const FpVector& u, const FpVector& v);

std::uint64_t idx_encode(const FpVector& v);
FpVector idx_decode(std::uint64_t index, std::uint32_t p, std::uint32_t n);

// Cached geometry for index arithmetic on F_p^n. Small groups get a full
// addition table; larger ones fall back to digit arithmetic.
class GroupIndex {
 public:
  GroupIndex(std::uint32_t p, std::uint32_t n);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    if (!add_table_.empty()) return add_table_[a * size_ + b];
    return add_digits(a, b);
  }
  std::uint64_t negate(std::uint64_t a) const;
  std::uint64_t scale(std::uint32_t c, std::uint64_t a) const;

  // Index of sum_t coeffs[t] * points[t] in F_p^n.
  std::uint64_t combine(std::span<const std::uint32_t> coeffs,
                        std::span<const std::uint64_t> points) const;

  std::uint32_t digit(std::uint64_t a, std::uint32_t i) const {
    return static_cast<std::uint32_t>((a / pow_[i]) % p_);
  }

  // sum_i a(i) * b(i) mod p.
  std::uint32_t dot_digits(std::uint64_t a, std::uint64_t b) const;

 private:
  std::uint64_t add_digits(std::uint64_t a, std::uint64_t b) const;

  std::uint32_t p_ = 0;
  std::uint32_t n_ = 0;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> pow_;
  std::vector<std::uint64_t> add_table_;  // built when size_ is small
};

}  // namespace hofa
