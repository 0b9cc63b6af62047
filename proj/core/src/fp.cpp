#include "hofa/fp.hpp"

#include <limits>

namespace hofa {

bool is_prime(std::uint32_t p) noexcept {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

void require_prime(std::uint32_t p) {
  if (!is_prime(p)) {
    throw ValidationError("modulus " + std::to_string(p) + " is not prime");
  }
}

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t exp, std::uint32_t p) noexcept {
  std::uint64_t acc = 1;
  std::uint64_t b = base % p;
  while (exp > 0) {
    if (exp & 1) acc = acc * b % p;
    b = b * b % p;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw ValidationError("zero has no inverse mod " + std::to_string(p));
  return mod_pow(a, p - 2, p);  // Fermat; p prime
}

std::uint64_t checked_pow(std::uint32_t base, std::uint32_t exp) {
  std::uint64_t acc = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && acc > std::numeric_limits<std::uint64_t>::max() / base) {
      throw ValidationError("power overflows 64 bits: " + std::to_string(base) + "^" +
                            std::to_string(exp));
    }
    acc *= base;
  }
  return acc;
}

FpScalar::FpScalar(std::uint64_t value, std::uint32_t p) : p_(p) {
  require_prime(p);
  value_ = static_cast<std::uint32_t>(value % p);
}

namespace {
void require_same_modulus(std::uint32_t a, std::uint32_t b) {
  if (a != b) {
    throw ValidationError("modulus mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}
}  // namespace

FpScalar FpScalar::operator+(const FpScalar& rhs) const {
  require_same_modulus(p_, rhs.p_);
  return FpScalar(static_cast<std::uint64_t>(value_) + rhs.value_, p_);
}

FpScalar FpScalar::operator-(const FpScalar& rhs) const {
  require_same_modulus(p_, rhs.p_);
  return FpScalar(static_cast<std::uint64_t>(value_) + p_ - rhs.value_, p_);
}

FpScalar FpScalar::operator*(const FpScalar& rhs) const {
  require_same_modulus(p_, rhs.p_);
  return FpScalar(static_cast<std::uint64_t>(value_) * rhs.value_, p_);
}

FpScalar FpScalar::operator-() const { return FpScalar(static_cast<std::uint64_t>(p_) - value_, p_); }

FpScalar FpScalar::inverse() const { return FpScalar(mod_inverse(value_, p_), p_); }

FpVector::FpVector(std::uint32_t p, std::vector<std::uint32_t> coords)
    : p_(p), coords_(std::move(coords)) {
  require_prime(p);
  for (std::uint32_t c : coords_) {
    if (c >= p) throw ValidationError("coordinate " + std::to_string(c) + " not reduced mod p");
  }
}

FpVector FpVector::zero(std::uint32_t p, std::uint32_t n) {
  return FpVector(p, std::vector<std::uint32_t>(n, 0));
}

FpVector FpVector::operator+(const FpVector& rhs) const {
  require_same_modulus(p_, rhs.p_);
  if (dim() != rhs.dim()) throw ValidationError("dimension mismatch in vector add");
  std::vector<std::uint32_t> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = (coords_[i] + rhs.coords_[i]) % p_;
  return FpVector(p_, std::move(out));
}

FpVector FpVector::scaled(std::uint32_t c) const {
  std::vector<std::uint32_t> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(coords_[i]) * (c % p_) % p_);
  }
  return FpVector(p_, std::move(out));
}

FpScalar dot(const FpVector& u, const FpVector& v) {
  require_same_modulus(u.modulus(), v.modulus());
  if (u.dim() != v.dim()) throw ValidationError("dimension mismatch in dot product");
  std::uint64_t acc = 0;
  for (std::uint32_t i = 0; i < u.dim(); ++i) {
    acc += static_cast<std::uint64_t>(u[i]) * v[i];
  }
  return FpScalar(acc, u.modulus());
}

std::uint64_t idx_encode(const FpVector& v) {
  std::uint64_t idx = 0;
  std::uint64_t mul = 1;
  for (std::uint32_t i = 0; i < v.dim(); ++i) {
    idx += mul * v[i];
    mul *= v.modulus();
  }
  return idx;
}

FpVector idx_decode(std::uint64_t index, std::uint32_t p, std::uint32_t n) {
  require_prime(p);
  std::uint64_t size = checked_pow(p, n);
  if (index >= size) {
    throw ValidationError("index " + std::to_string(index) + " out of range [0, p^n)");
  }
  std::vector<std::uint32_t> coords(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    coords[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return FpVector(p, std::move(coords));
}

namespace {
constexpr std::uint64_t kAddTableLimit = 1024;
}

GroupIndex::GroupIndex(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
  require_prime(p);
  size_ = checked_pow(p, n);
  pow_.resize(n + 1);
  pow_[0] = 1;
  for (std::uint32_t i = 0; i < n; ++i) pow_[i + 1] = pow_[i] * p;
  if (size_ <= kAddTableLimit) {
    add_table_.resize(size_ * size_);
    for (std::uint64_t a = 0; a < size_; ++a) {
      for (std::uint64_t b = 0; b < size_; ++b) {
        add_table_[a * size_ + b] = add_digits(a, b);
      }
    }
  }
}

std::uint64_t GroupIndex::add_digits(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t out = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::uint64_t d = (a / pow_[i] + b / pow_[i]) % p_;
    out += d * pow_[i];
  }
  return out;
}

std::uint64_t GroupIndex::negate(std::uint64_t a) const {
  std::uint64_t out = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::uint64_t d = (p_ - (a / pow_[i]) % p_) % p_;
    out += d * pow_[i];
  }
  return out;
}

std::uint64_t GroupIndex::scale(std::uint32_t c, std::uint64_t a) const {
  c %= p_;
  std::uint64_t out = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::uint64_t d = (a / pow_[i]) % p_ * c % p_;
    out += d * pow_[i];
  }
  return out;
}

std::uint64_t GroupIndex::combine(std::span<const std::uint32_t> coeffs,
                                  std::span<const std::uint64_t> points) const {
  if (coeffs.size() != points.size()) throw ValidationError("combine: length mismatch");
  std::uint64_t out = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::uint64_t d = 0;
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      d += static_cast<std::uint64_t>(coeffs[t] % p_) * ((points[t] / pow_[i]) % p_);
    }
    out += d % p_ * pow_[i];
  }
  return out;
}

std::uint32_t GroupIndex::dot_digits(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t acc = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    acc += (a / pow_[i]) % p_ * ((b / pow_[i]) % p_);
  }
  return static_cast<std::uint32_t>(acc % p_);
}

}  // namespace hofa
