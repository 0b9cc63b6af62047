#include "hofa/multilinear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hofa/errors.hpp"

namespace hofa {

std::vector<MultisetIndex> enumerate_multisets(std::uint32_t k, std::uint32_t d) {
  std::vector<MultisetIndex> out;
  if (d == 0) {
    out.push_back(MultisetIndex{});
    return out;
  }
  std::vector<std::uint32_t> u(d, 0);
  for (;;) {
    out.push_back(MultisetIndex{u});
    std::int64_t j = static_cast<std::int64_t>(d) - 1;
    while (j >= 0 && u[j] == k - 1) --j;
    if (j < 0) break;
    ++u[j];
    for (std::size_t t = j + 1; t < d; ++t) u[t] = u[j];
  }
  return out;
}

std::uint32_t multiset_permutation_count(const MultisetIndex& u, std::uint32_t p) {
  const std::uint32_t d = u.size();
  if (d >= p) {
    throw ValidationError("multiset length " + std::to_string(d) +
                          " must be below the characteristic " + std::to_string(p));
  }
  // d!/prod(multiplicity!) computed exactly; d < p keeps this tiny.
  std::uint64_t numerator = 1;
  for (std::uint32_t i = 2; i <= d; ++i) numerator *= i;
  std::uint64_t denominator = 1;
  std::size_t i = 0;
  while (i < u.entries.size()) {
    std::size_t j = i;
    while (j < u.entries.size() && u.entries[j] == u.entries[i]) ++j;
    for (std::size_t mult = 2; mult <= j - i; ++mult) denominator *= mult;
    i = j;
  }
  return static_cast<std::uint32_t>(numerator / denominator % p);
}

std::uint32_t multiset_form_product(const MultisetIndex& u, const LinearForm& form) {
  std::uint64_t prod = 1;
  for (std::uint32_t var : u.entries) {
    if (var >= form.k()) throw ValidationError("multiset entry exceeds variable count");
    prod = prod * form[var] % form.p();
  }
  return static_cast<std::uint32_t>(prod);
}

SymMultilinearForm::SymMultilinearForm(std::uint32_t p, std::uint32_t n, std::uint32_t d)
    : p_(p), n_(n), d_(d) {
  require_prime(p);
  if (d == 0 || d >= p) {
    throw ValidationError("multilinear degree must satisfy 1 <= d < p");
  }
}

void SymMultilinearForm::set_entry(std::vector<std::uint32_t> sorted_vars, std::uint32_t value) {
  if (sorted_vars.size() != d_ || !std::is_sorted(sorted_vars.begin(), sorted_vars.end())) {
    throw ValidationError("tensor entry key must be a sorted tuple of length d");
  }
  value %= p_;
  if (value == 0) {
    entries_.erase(sorted_vars);
  } else {
    entries_[std::move(sorted_vars)] = value;
  }
}

std::uint32_t SymMultilinearForm::eval(std::span<const FpVector> args) const {
  if (args.size() != d_) throw ValidationError("multilinear form expects d arguments");
  for (const auto& a : args) {
    if (a.modulus() != p_ || a.dim() != n_) throw ValidationError("argument has wrong shape");
  }
  std::uint64_t acc = 0;
  std::vector<std::uint32_t> perm;
  for (const auto& [vars, value] : entries_) {
    perm = vars;
    // Sum the monomial over all distinct permutations of the tuple.
    std::uint64_t orbit = 0;
    do {
      std::uint64_t prod = 1;
      for (std::uint32_t slot = 0; slot < d_; ++slot) {
        prod = prod * args[slot][perm[slot]] % p_;
        if (prod == 0) break;
      }
      orbit += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    acc += value * (orbit % p_) % p_;
  }
  return static_cast<std::uint32_t>(acc % p_);
}

std::uint32_t SymMultilinearForm::eval_diagonal(const FpVector& x) const {
  if (x.modulus() != p_ || x.dim() != n_) throw ValidationError("argument has wrong shape");
  std::uint64_t acc = 0;
  for (const auto& [vars, value] : entries_) {
    std::uint64_t prod = multiset_permutation_count(MultisetIndex{vars}, p_);
    for (std::uint32_t var : vars) prod = prod * x[var] % p_;
    acc += value * prod % p_;
  }
  return static_cast<std::uint32_t>(acc % p_);
}

SymMultilinearForm polarize(const Polynomial& poly) {
  const std::uint32_t p = poly.p();
  const std::uint32_t n = poly.n();
  if (!poly.is_homogeneous() || poly.is_zero()) {
    throw ValidationError("polarization needs a nonzero homogeneous polynomial");
  }
  const std::uint32_t d = static_cast<std::uint32_t>(poly.degree());
  SymMultilinearForm form(p, n, d);

  std::uint32_t factorial = 1;
  for (std::uint32_t i = 2; i <= d; ++i) {
    factorial = static_cast<std::uint32_t>(static_cast<std::uint64_t>(factorial) * i % p);
  }
  const std::uint32_t inv_factorial = mod_inverse(factorial, p);

  // Tensor entry at tuple J: (1/d!) sum_{S subset [d]} (-1)^{d-|S|} P(sum_{i in S} e_{J_i}).
  std::vector<std::uint32_t> point(n);
  for (const MultisetIndex& tuple : enumerate_multisets(n, d)) {
    std::uint64_t acc = 0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      std::fill(point.begin(), point.end(), 0u);
      for (std::uint32_t i = 0; i < d; ++i) {
        if (mask & (1u << i)) point[tuple.entries[i]] = (point[tuple.entries[i]] + 1) % p;
      }
      const std::uint32_t value = poly.eval_raw(point);
      const bool negate = ((d - std::popcount(mask)) % 2) != 0;
      acc += negate ? (p - value) % p : value;
    }
    const std::uint32_t entry =
        static_cast<std::uint32_t>(acc % p * inv_factorial % p);
    if (entry != 0) form.set_entry(tuple.entries, entry);
  }
  return form;
}

std::vector<std::uint32_t> expand_composition(const Polynomial& poly, const LinearForm& form) {
  if (poly.p() != form.p()) throw ValidationError("modulus mismatch");
  if (!poly.is_homogeneous() || poly.is_zero()) {
    throw ValidationError("composition expansion needs a nonzero homogeneous polynomial");
  }
  const std::uint32_t d = static_cast<std::uint32_t>(poly.degree());
  if (d >= poly.p()) throw ValidationError("degree must be below the characteristic");
  const std::uint32_t p = poly.p();
  std::vector<std::uint32_t> coeffs;
  for (const MultisetIndex& u : enumerate_multisets(form.k(), d)) {
    const std::uint64_t count = multiset_permutation_count(u, p);
    coeffs.push_back(static_cast<std::uint32_t>(count * multiset_form_product(u, form) % p));
  }
  return coeffs;
}

LayerCoefficients::LayerCoefficients(std::uint32_t p, std::uint32_t num_vars,
                                     std::vector<std::uint32_t> degrees)
    : degrees_(std::move(degrees)) {
  values_.resize(degrees_.size());
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    if (degrees_[i] == 0 || degrees_[i] >= p) {
      throw ValidationError("layer degrees must satisfy 1 <= d_i < p");
    }
    values_[i].resize(degrees_[i]);
    for (std::uint32_t l = 1; l <= degrees_[i]; ++l) {
      values_[i][l - 1].assign(enumerate_multisets(num_vars, l).size(), 0);
    }
  }
}

std::uint32_t& LayerCoefficients::at(std::size_t poly, std::uint32_t layer,
                                     std::size_t multiset_pos) {
  return values_.at(poly).at(layer - 1).at(multiset_pos);
}

std::uint32_t LayerCoefficients::at(std::size_t poly, std::uint32_t layer,
                                    std::size_t multiset_pos) const {
  return values_.at(poly).at(layer - 1).at(multiset_pos);
}

std::span<const std::uint32_t> LayerCoefficients::layer(std::size_t poly,
                                                        std::uint32_t layer) const {
  return values_.at(poly).at(layer - 1);
}

bool LayerCoefficients::top_layers_zero() const {
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    for (std::uint32_t v : values_[i][degrees_[i] - 1]) {
      if (v != 0) return false;
    }
  }
  return true;
}

bool LayerCoefficients::all_layers_zero() const {
  for (const auto& poly_layers : values_) {
    for (const auto& layer : poly_layers) {
      for (std::uint32_t v : layer) {
        if (v != 0) return false;
      }
    }
  }
  return true;
}

LayerCoefficients layer_coefficients(const CoefficientMatrix& lambda, const LinearSystem& system,
                                     std::span<const std::uint32_t> degrees) {
  const std::uint32_t p = system.p();
  if (lambda.size() != degrees.size()) {
    throw ValidationError("coefficient matrix row count must match the degree sequence");
  }
  for (const auto& row : lambda) {
    if (row.size() != system.m()) {
      throw ValidationError("coefficient matrix column count must match the system size");
    }
  }
  LayerCoefficients out(p, system.k(), std::vector<std::uint32_t>(degrees.begin(), degrees.end()));
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    for (std::uint32_t l = 1; l <= degrees[i]; ++l) {
      const auto multisets = enumerate_multisets(system.k(), l);
      for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
        const std::uint32_t count = multiset_permutation_count(multisets[pos], p);
        std::uint64_t acc = 0;
        for (std::uint32_t j = 0; j < system.m(); ++j) {
          acc += static_cast<std::uint64_t>(lambda[i][j] % p) *
                 multiset_form_product(multisets[pos], system.form(j));
        }
        out.at(i, l, pos) = static_cast<std::uint32_t>(acc % p * count % p);
      }
    }
  }
  return out;
}

bool composition_vanishes(const CoefficientMatrix& lambda, const LinearSystem& system,
                          std::span<const std::uint32_t> degrees, bool homogeneous_polys) {
  if (homogeneous_polys) {
    return layer_coefficients(lambda, system, degrees).top_layers_zero();
  }
  if (!homogeneity_witness(system)) {
    throw ValidationError(
        "zero test for non-homogeneous polynomials requires a homogeneous system");
  }
  // In canonical coordinates the top layer propagates down: if every top
  // coefficient vanishes, every lower layer vanishes too.
  const LinearSystem canonical = canonicalize_homogeneous(system);
  LayerCoefficients layers = layer_coefficients(lambda, canonical, degrees);
  const bool top_zero = layers.top_layers_zero();
  if (top_zero && !layers.all_layers_zero()) {
    throw std::logic_error("top layer vanished but a lower layer survived");
  }
  return top_zero;
}

bool composition_vanishes_bruteforce(const CoefficientMatrix& lambda, const LinearSystem& system,
                                     std::span<const Polynomial> polys) {
  if (polys.empty()) throw ValidationError("need at least one polynomial");
  if (lambda.size() != polys.size()) {
    throw ValidationError("coefficient matrix row count must match the polynomial count");
  }
  const std::uint32_t p = system.p();
  const std::uint32_t n = polys[0].n();
  for (const auto& poly : polys) {
    if (poly.p() != p || poly.n() != n) throw ValidationError("polynomial shape mismatch");
  }
  for (const auto& row : lambda) {
    if (row.size() != system.m()) {
      throw ValidationError("coefficient matrix column count must match the system size");
    }
  }

  std::vector<FunctionTable> tables;
  for (const auto& poly : polys) tables.push_back(table_of(poly));

  GroupIndex g(p, n);
  const std::uint32_t k = system.k();
  const double needed = std::pow(static_cast<double>(g.size()), static_cast<double>(k));
  constexpr double kBruteforceBudget = double(std::uint64_t(1) << 28);
  if (needed > kBruteforceBudget) {
    throw BudgetError("brute-force zero test over budget", needed, kBruteforceBudget);
  }

  std::vector<std::uint64_t> xs(k, 0);
  for (;;) {
    std::uint64_t acc = 0;
    for (std::uint32_t j = 0; j < system.m(); ++j) {
      const std::uint64_t point = g.combine(system.form(j).coeffs(), xs);
      for (std::size_t i = 0; i < polys.size(); ++i) {
        acc += static_cast<std::uint64_t>(lambda[i][j] % p) * tables[i].values[point];
      }
    }
    if (acc % p != 0) return false;
    std::uint32_t slot = 0;
    while (slot < k && ++xs[slot] == g.size()) xs[slot++] = 0;
    if (slot == k) break;
  }
  return true;
}

bool composition_vanishes_checked(const CoefficientMatrix& lambda, const LinearSystem& system,
                                  std::span<const Polynomial> polys, bool* used_bruteforce) {
  if (used_bruteforce) *used_bruteforce = false;
  bool coefficient_route = true;
  std::uint32_t max_degree = 0;
  bool all_homogeneous = true;
  std::vector<std::uint32_t> degrees;
  for (const auto& poly : polys) {
    if (poly.degree() < 1 || poly.degree() >= static_cast<int>(system.p())) {
      coefficient_route = false;
      break;
    }
    degrees.push_back(static_cast<std::uint32_t>(poly.degree()));
    max_degree = std::max(max_degree, degrees.back());
    all_homogeneous = all_homogeneous && poly.is_homogeneous();
  }
  if (coefficient_route && !all_homogeneous && !homogeneity_witness(system)) {
    coefficient_route = false;
  }
  if (coefficient_route) {
    // The coefficient verdict is trustworthy only for linearly independent
    // collections.
    const auto basis = monomial_basis(polys[0].p(), polys[0].n(), max_degree);
    GfMatrix rows;
    for (const auto& poly : polys) rows.push_back(poly.coefficients_on(basis));
    if (gf_rank(rows, system.p()) != polys.size()) coefficient_route = false;
  }
  if (coefficient_route) {
    return composition_vanishes(lambda, system, degrees, all_homogeneous);
  }
  if (used_bruteforce) *used_bruteforce = true;
  return composition_vanishes_bruteforce(lambda, system, polys);
}

std::optional<CollapseAssignment> collapse_assignment(std::uint32_t p, std::uint32_t k,
                                                      std::uint32_t d,
                                                      std::span<const std::uint32_t> coeffs) {
  require_prime(p);
  if (d >= p) throw ValidationError("collapse needs degree below the characteristic");
  const auto multisets = enumerate_multisets(k, d);
  if (coeffs.size() != multisets.size()) {
    throw ValidationError("coefficient vector must align with the multiset basis");
  }
  if (std::all_of(coeffs.begin(), coeffs.end(), [p](std::uint32_t c) { return c % p == 0; })) {
    return std::nullopt;
  }
  const std::uint64_t count = checked_pow(p, k);
  std::vector<std::uint32_t> a(k, 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t g = 0;
    for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
      if (coeffs[pos] % p == 0) continue;
      std::uint64_t prod = coeffs[pos] % p;
      for (std::uint32_t var : multisets[pos].entries) {
        prod = prod * a[var] % p;
        if (prod == 0) break;
      }
      g += prod;
    }
    if (g % p != 0) {
      return CollapseAssignment{a, static_cast<std::uint32_t>(g % p)};
    }
    std::uint32_t slot = 0;
    while (slot < k && ++a[slot] == p) a[slot++] = 0;
  }
  // Distinct multisets are distinct reduced monomials, so a nonzero
  // combination cannot vanish at every point.
  throw std::logic_error("nonzero collapse polynomial vanished everywhere");
}

}  // namespace hofa
