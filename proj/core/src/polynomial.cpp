#include "hofa/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hofa/rng.hpp"

namespace hofa {

namespace {

std::uint32_t total_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), 0u);
}

// x^e = x^(reduced e) as functions on F_p.
std::uint32_t reduce_exponent(std::uint32_t e, std::uint32_t p) {
  if (e == 0) return 0;
  return (e - 1) % (p - 1) + 1;
}

// Binomial coefficients mod p for arguments < p.
std::vector<std::vector<std::uint32_t>> pascal_mod(std::uint32_t p) {
  std::vector<std::vector<std::uint32_t>> c(p, std::vector<std::uint32_t>(p, 0));
  for (std::uint32_t i = 0; i < p; ++i) {
    c[i][0] = 1;
    for (std::uint32_t j = 1; j <= i; ++j) {
      c[i][j] = (c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0)) % p;
    }
  }
  return c;
}

}  // namespace

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  const std::uint32_t da = total_degree(a);
  const std::uint32_t db = total_degree(b);
  if (da != db) return da < db;
  // Variable 1 most significant, larger exponent first: x1^2 < x1 x2 < x2^2.
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

Polynomial::Polynomial(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) { require_prime(p); }

Polynomial Polynomial::monomial(std::uint32_t p, std::uint32_t n,
                                std::span<const std::uint32_t> exponents, std::uint32_t coeff) {
  Polynomial out(p, n);
  out.add_term(exponents, coeff);
  return out;
}

Polynomial Polynomial::constant(std::uint32_t p, std::uint32_t n, std::uint32_t c) {
  Polynomial out(p, n);
  std::vector<std::uint32_t> exps(n, 0);
  out.add_term(exps, c);
  return out;
}

Polynomial Polynomial::variable(std::uint32_t p, std::uint32_t n, std::uint32_t index) {
  if (index >= n) throw ValidationError("variable index out of range");
  Polynomial out(p, n);
  std::vector<std::uint32_t> exps(n, 0);
  exps[index] = 1;
  out.add_term(exps, 1);
  return out;
}

Polynomial Polynomial::random(std::uint32_t p, std::uint32_t n, std::uint32_t d, Rng& rng) {
  Polynomial out(p, n);
  for (const Monomial& m : monomial_basis(p, n, d)) {
    std::vector<std::uint32_t> exps(m.begin(), m.end());
    out.add_term(exps, rng.below(p));
  }
  return out;
}

Polynomial Polynomial::random_homogeneous(std::uint32_t p, std::uint32_t n, std::uint32_t degree,
                                          Rng& rng) {
  for (;;) {
    Polynomial out(p, n);
    for (const Monomial& m : monomial_basis(p, n, degree)) {
      if (total_degree(m) != degree) continue;
      std::vector<std::uint32_t> exps(m.begin(), m.end());
      out.add_term(exps, rng.below(p));
    }
    if (!out.is_zero()) return out;
  }
}

bool Polynomial::is_constant() const noexcept { return degree() <= 0; }

bool Polynomial::is_homogeneous() const noexcept {
  if (terms_.empty()) return true;
  const std::uint32_t d = total_degree(terms_.rbegin()->first);
  for (const auto& [m, c] : terms_) {
    if (total_degree(m) != d) return false;
  }
  return true;
}

int Polynomial::degree() const noexcept {
  if (terms_.empty()) return -1;
  // Graded order: the last term has maximal total degree.
  return static_cast<int>(total_degree(terms_.rbegin()->first));
}

void Polynomial::add_term(std::span<const std::uint32_t> exponents, std::uint32_t coeff) {
  if (exponents.size() != n_) throw ValidationError("exponent tuple has wrong arity");
  coeff %= p_;
  if (coeff == 0) return;
  Monomial m(n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    m[i] = static_cast<std::uint8_t>(reduce_exponent(exponents[i], p_));
  }
  auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
  if (!inserted) {
    it->second = (it->second + coeff) % p_;
    if (it->second == 0) terms_.erase(it);
  }
}

std::uint32_t Polynomial::eval_raw(std::span<const std::uint32_t> coords) const {
  if (coords.size() != n_) throw ValidationError("evaluation point has wrong dimension");
  std::uint64_t acc = 0;
  for (const auto& [m, c] : terms_) {
    std::uint64_t term = c;
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (m[i] != 0) term = term * mod_pow(coords[i] % p_, m[i], p_) % p_;
    }
    acc += term;
  }
  return static_cast<std::uint32_t>(acc % p_);
}

FpScalar Polynomial::eval(const FpVector& x) const {
  if (x.modulus() != p_) throw ValidationError("modulus mismatch in evaluation");
  return FpScalar(eval_raw(x.coords()), p_);
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  if (p_ != rhs.p_ || n_ != rhs.n_) throw ValidationError("polynomial shape mismatch");
  Polynomial out = *this;
  for (const auto& [m, c] : rhs.terms_) {
    std::vector<std::uint32_t> exps(m.begin(), m.end());
    out.add_term(exps, c);
  }
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  return *this + rhs.scaled(p_ - 1);
}

Polynomial Polynomial::scaled(std::uint32_t c) const {
  Polynomial out(p_, n_);
  for (const auto& [m, coeff] : terms_) {
    std::vector<std::uint32_t> exps(m.begin(), m.end());
    out.add_term(exps, static_cast<std::uint32_t>(static_cast<std::uint64_t>(coeff) * (c % p_) % p_));
  }
  return out;
}

Polynomial Polynomial::additive_derivative(const FpVector& y) const {
  if (y.modulus() != p_ || y.dim() != n_) {
    throw ValidationError("direction has wrong shape in additive derivative");
  }
  static thread_local std::uint32_t cached_p = 0;
  static thread_local std::vector<std::vector<std::uint32_t>> binom;
  if (cached_p != p_) {
    binom = pascal_mod(p_);
    cached_p = p_;
  }

  Polynomial out(p_, n_);
  std::vector<std::uint32_t> t(n_);
  for (const auto& [m, c] : terms_) {
    // Expand prod_j (x_j + y_j)^{e_j} over all sub-exponent tuples t <= e.
    std::fill(t.begin(), t.end(), 0u);
    for (;;) {
      std::uint64_t coeff = c;
      for (std::uint32_t j = 0; j < n_ && coeff != 0; ++j) {
        if (t[j] == m[j]) continue;
        coeff = coeff * binom[m[j]][t[j]] % p_;
        coeff = coeff * mod_pow(y[j], m[j] - t[j], p_) % p_;
      }
      // Skip t == e: that term is P(x) itself and cancels.
      if (coeff != 0 && !std::equal(t.begin(), t.end(), m.begin(), m.end(),
                                    [](std::uint32_t a, std::uint8_t b) { return a == b; })) {
        out.add_term(t, static_cast<std::uint32_t>(coeff));
      }
      std::uint32_t j = 0;
      while (j < n_ && t[j] == m[j]) {
        t[j] = 0;
        ++j;
      }
      if (j == n_) break;
      ++t[j];
    }
  }
  return out;
}

Polynomial Polynomial::homogeneous_part(std::uint32_t l) const {
  Polynomial out(p_, n_);
  for (const auto& [m, c] : terms_) {
    if (total_degree(m) == l) {
      std::vector<std::uint32_t> exps(m.begin(), m.end());
      out.add_term(exps, c);
    }
  }
  return out;
}

std::vector<std::uint32_t> Polynomial::coefficients_on(const std::vector<Monomial>& basis) const {
  std::vector<std::uint32_t> row(basis.size(), 0);
  std::size_t matched = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto it = terms_.find(basis[i]);
    if (it != terms_.end()) {
      row[i] = it->second;
      ++matched;
    }
  }
  if (matched != terms_.size()) {
    throw ValidationError("polynomial has terms outside the given basis");
  }
  return row;
}

Polynomial lincomb(std::span<const std::uint32_t> coeffs, std::span<const Polynomial> polys) {
  if (coeffs.size() != polys.size()) throw ValidationError("lincomb: length mismatch");
  if (polys.empty()) throw ValidationError("lincomb: empty input");
  Polynomial out(polys[0].p(), polys[0].n());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].p() != out.p() || polys[i].n() != out.n()) {
      throw ValidationError("lincomb: polynomial shape mismatch");
    }
    out = out + polys[i].scaled(coeffs[i]);
  }
  return out;
}

FunctionTable table_of(const Polynomial& poly) {
  FunctionTable table;
  table.p = poly.p();
  table.n = poly.n();
  const std::uint64_t size = checked_pow(poly.p(), poly.n());
  table.values.resize(size);
  std::vector<std::uint32_t> coords(poly.n(), 0);
  for (std::uint64_t i = 0; i < size; ++i) {
    table.values[i] = poly.eval_raw(coords);
    std::uint32_t j = 0;
    while (j < poly.n() && ++coords[j] == poly.p()) coords[j++] = 0;
  }
  return table;
}

namespace {

bool table_is_zero(const std::vector<std::uint32_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

// Derivatives commute, so direction tuples are enumerated sorted.
bool derivatives_vanish(const GroupIndex& g, const std::vector<std::uint32_t>& values,
                        std::uint32_t remaining, std::uint64_t min_dir) {
  if (table_is_zero(values)) return true;
  if (remaining == 0) return false;
  const std::uint32_t p = g.p();
  std::vector<std::uint32_t> deriv(values.size());
  for (std::uint64_t y = min_dir; y < g.size(); ++y) {
    for (std::uint64_t x = 0; x < g.size(); ++x) {
      deriv[x] = (values[g.add(x, y)] + p - values[x]) % p;
    }
    if (!derivatives_vanish(g, deriv, remaining - 1, y)) return false;
  }
  return true;
}

}  // namespace

bool table_degree_le(const FunctionTable& table, std::uint32_t d) {
  GroupIndex g(table.p, table.n);
  if (table.values.size() != g.size()) throw ValidationError("table has wrong length");
  std::vector<std::uint32_t> values(table.values);
  for (auto& v : values) v %= table.p;
  return derivatives_vanish(g, values, d + 1, 0);
}

std::vector<Monomial> monomial_basis(std::uint32_t p, std::uint32_t n, std::uint32_t d) {
  require_prime(p);
  std::vector<Monomial> basis;
  Monomial m(n, 0);
  // Odometer over exponent tuples with entries < p; keep total degree <= d.
  for (;;) {
    if (total_degree(m) <= d) basis.push_back(m);
    std::uint32_t j = 0;
    while (j < n && std::uint32_t(m[j]) + 1 == p) m[j++] = 0;
    if (j == n) break;
    ++m[j];
  }
  std::sort(basis.begin(), basis.end(), MonomialOrder{});
  return basis;
}

double polynomial_count(std::uint32_t p, std::uint32_t n, std::uint32_t d) {
  return std::pow(static_cast<double>(p),
                  static_cast<double>(monomial_basis(p, n, d).size()));
}

PolynomialEnumerator::PolynomialEnumerator(std::uint32_t p, std::uint32_t n, std::uint32_t d,
                                           std::uint64_t budget)
    : p_(p), n_(n), d_(d), basis_(monomial_basis(p, n, d)) {
  const double needed = std::pow(static_cast<double>(p), static_cast<double>(basis_.size()));
  if (needed > static_cast<double>(budget)) {
    throw BudgetError("polynomial enumeration over budget", needed, static_cast<double>(budget));
  }
  count_ = 1;
  for (std::size_t i = 0; i < basis_.size(); ++i) count_ *= p;
  coeffs_.assign(basis_.size(), 0);
}

void PolynomialEnumerator::reset() {
  coeffs_.assign(basis_.size(), 0);
  done_ = false;
  started_ = false;
}

bool PolynomialEnumerator::next(Polynomial& out) {
  if (done_) return false;
  if (started_) {
    // Lexicographic over coefficient vectors: last position cycles fastest.
    std::size_t j = coeffs_.size();
    while (j > 0 && coeffs_[j - 1] + 1 == p_) coeffs_[--j] = 0;
    if (j == 0) {
      done_ = true;
      return false;
    }
    ++coeffs_[j - 1];
  }
  started_ = true;
  out = Polynomial(p_, n_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    std::vector<std::uint32_t> exps(basis_[i].begin(), basis_[i].end());
    out.add_term(exps, coeffs_[i]);
  }
  return true;
}

}  // namespace hofa
