#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hofa/multilinear.hpp"
#include "hofa/rng.hpp"

using namespace hofa;

namespace {

MultisetIndex ms(std::initializer_list<std::uint32_t> entries) {
  return MultisetIndex{std::vector<std::uint32_t>(entries)};
}

Polynomial monomial(std::uint32_t p, std::uint32_t n, std::vector<std::uint32_t> exps,
                    std::uint32_t c) {
  return Polynomial::monomial(p, n, exps, c);
}

// Independent homogeneous collection with the requested degrees.
std::vector<Polynomial> random_independent_collection(std::uint32_t p, std::uint32_t n,
                                                      const std::vector<std::uint32_t>& degrees,
                                                      Rng& rng) {
  std::uint32_t max_d = 1;
  for (auto d : degrees) max_d = std::max(max_d, d);
  const auto basis = monomial_basis(p, n, max_d);
  for (;;) {
    std::vector<Polynomial> polys;
    for (auto d : degrees) polys.push_back(Polynomial::random_homogeneous(p, n, d, rng));
    GfMatrix rows;
    for (const auto& poly : polys) rows.push_back(poly.coefficients_on(basis));
    if (gf_rank(rows, p) == polys.size()) return polys;
  }
}

LinearSystem random_system(std::uint32_t p, std::uint32_t k, std::uint32_t m, Rng& rng) {
  for (;;) {
    std::vector<LinearForm> forms;
    while (forms.size() < m) {
      std::vector<std::uint32_t> coeffs(k);
      for (auto& c : coeffs) c = rng.below(p);
      LinearForm candidate(p, std::move(coeffs));
      if (std::find(forms.begin(), forms.end(), candidate) == forms.end()) {
        forms.push_back(std::move(candidate));
      }
    }
    return LinearSystem(std::move(forms));
  }
}

// Random homogeneous system: every form maps some common v to 1.
LinearSystem random_homogeneous_system(std::uint32_t p, std::uint32_t k, std::uint32_t m,
                                       Rng& rng) {
  for (;;) {
    std::vector<std::uint32_t> v(k);
    for (auto& c : v) c = rng.below(p);
    if (std::all_of(v.begin(), v.end(), [](std::uint32_t c) { return c == 0; })) continue;
    std::vector<LinearForm> forms;
    int attempts = 0;
    while (forms.size() < m && attempts < 200) {
      ++attempts;
      std::vector<std::uint32_t> coeffs(k);
      for (auto& c : coeffs) c = rng.below(p);
      std::uint64_t val = 0;
      for (std::uint32_t t = 0; t < k; ++t) val += std::uint64_t(coeffs[t]) * v[t];
      const std::uint32_t image = static_cast<std::uint32_t>(val % p);
      if (image == 0) continue;
      const std::uint32_t fix = mod_inverse(image, p);
      for (auto& c : coeffs) c = static_cast<std::uint32_t>(std::uint64_t(c) * fix % p);
      LinearForm candidate(p, std::move(coeffs));
      if (std::find(forms.begin(), forms.end(), candidate) == forms.end()) {
        forms.push_back(std::move(candidate));
      }
    }
    if (forms.size() == m) return LinearSystem(std::move(forms));
  }
}

}  // namespace

TEST_CASE("multiset permutation counts") {
  CHECK(multiset_permutation_count(ms({0, 1, 1}), 5) == 3);  // 3!/2! = 3
  CHECK(multiset_permutation_count(ms({0, 0}), 5) == 1);
  CHECK(multiset_permutation_count(ms({0, 1}), 5) == 2);
  CHECK_THROWS_AS(multiset_permutation_count(ms({0, 0, 0}), 3), ValidationError);
}

TEST_CASE("multiset enumeration") {
  const auto u2 = enumerate_multisets(2, 2);
  REQUIRE(u2.size() == 3);
  CHECK(u2[0] == ms({0, 0}));
  CHECK(u2[1] == ms({0, 1}));
  CHECK(u2[2] == ms({1, 1}));
  CHECK(enumerate_multisets(3, 2).size() == 6);
  CHECK(enumerate_multisets(2, 3).size() == 4);
}

TEST_CASE("polarization of a cube monomial") {
  const SymMultilinearForm b = polarize(monomial(5, 1, {3}, 1));
  REQUIRE(b.entries().size() == 1);
  CHECK(b.entries().begin()->first == std::vector<std::uint32_t>{0, 0, 0});
  CHECK(b.entries().begin()->second == 1);
}

TEST_CASE("polarization splits 6 x1 x2^2 into weight-2 orbit entries") {
  const SymMultilinearForm b = polarize(monomial(7, 2, {1, 2}, 6));
  REQUIRE(b.entries().size() == 1);
  const auto& [vars, value] = *b.entries().begin();
  CHECK(vars == std::vector<std::uint32_t>{0, 1, 1});
  CHECK(value == 2);
  // B(x,x,x) = 6 x1 x2^2 at every point
  for (std::uint64_t i = 0; i < 49; ++i) {
    const FpVector x = idx_decode(i, 7, 2);
    CHECK(b.eval_diagonal(x) == monomial(7, 2, {1, 2}, 6).eval(x).value());
  }
  // and the printed expansion: entries evaluate like
  // 2 [y1 z2 w2 + z1 y2 w2 + w1 y2 z2]
  const FpVector y(7, {1, 0}), z(7, {0, 1}), w(7, {0, 1});
  std::vector<FpVector> args{y, z, w};
  CHECK(b.eval(args) == 2);
}

TEST_CASE("linear polynomials polarize to themselves") {
  Polynomial lin(5, 2);
  lin.add_term(std::vector<std::uint32_t>{1, 0}, 2);
  lin.add_term(std::vector<std::uint32_t>{0, 1}, 3);
  const SymMultilinearForm b = polarize(lin);
  for (std::uint64_t i = 0; i < 25; ++i) {
    const FpVector x = idx_decode(i, 5, 2);
    std::vector<FpVector> args{x};
    CHECK(b.eval(args) == lin.eval(x).value());
  }
}

TEST_CASE("polarization rejects bad inputs") {
  Polynomial mixed(5, 1);
  mixed.add_term(std::vector<std::uint32_t>{2}, 1);
  mixed.add_term(std::vector<std::uint32_t>{1}, 1);
  CHECK_THROWS_AS(polarize(mixed), ValidationError);
  CHECK_THROWS_AS(polarize(monomial(3, 1, {2}, 1) + monomial(3, 1, {2}, 2)),
                  ValidationError);  // zero polynomial
  CHECK_THROWS_AS(polarize(Polynomial::monomial(3, 2, std::vector<std::uint32_t>{2, 1}, 1)),
                  ValidationError);  // degree 3 >= p = 3
}

TEST_CASE("diagonal identity, exhaustive at small sizes") {
  Rng rng(3);
  // every homogeneous polynomial of degree <= 3 over F_5^1
  for (std::uint32_t d = 1; d <= 3; ++d) {
    for (std::uint32_t c = 1; c < 5; ++c) {
      const Polynomial poly = monomial(5, 1, {d}, c);
      const SymMultilinearForm b = polarize(poly);
      for (std::uint64_t i = 0; i < 5; ++i) {
        const FpVector x = idx_decode(i, 5, 1);
        CHECK(b.eval_diagonal(x) == poly.eval(x).value());
      }
    }
  }
  // random homogeneous polynomials over F_7^2 up to degree 3
  for (int trial = 0; trial < 25; ++trial) {
    const std::uint32_t d = 1 + rng.below(3);
    const Polynomial poly = Polynomial::random_homogeneous(7, 2, d, rng);
    const SymMultilinearForm b = polarize(poly);
    for (std::uint64_t i = 0; i < 49; ++i) {
      const FpVector x = idx_decode(i, 7, 2);
      CHECK(b.eval_diagonal(x) == poly.eval(x).value());
    }
  }
}

TEST_CASE("multilinearity and symmetry of the polarized form") {
  Rng rng(8);
  const Polynomial poly = Polynomial::random_homogeneous(7, 2, 3, rng);
  const SymMultilinearForm b = polarize(poly);
  const FpVector u = idx_decode(5, 7, 2), v = idx_decode(11, 7, 2), w = idx_decode(23, 7, 2);
  // symmetry
  std::vector<FpVector> a1{u, v, w}, a2{w, u, v}, a3{v, w, u};
  CHECK(b.eval(a1) == b.eval(a2));
  CHECK(b.eval(a1) == b.eval(a3));
  // linearity in the first slot
  for (std::uint32_t c = 0; c < 7; ++c) {
    std::vector<FpVector> scaled_args{u.scaled(c), v, w};
    CHECK(b.eval(scaled_args) == (static_cast<std::uint64_t>(c) * b.eval(a1)) % 7);
  }
  std::vector<FpVector> sum_args{u + v, v, w};
  std::vector<FpVector> left{u, v, w}, right{v, v, w};
  CHECK(b.eval(sum_args) == (b.eval(left) + b.eval(right)) % 7);
}

TEST_CASE("composition expansion: coefficient of B(x1,x2,x2) is 3 j^2") {
  for (std::uint32_t j = 0; j < 5; ++j) {
    const Polynomial cube = monomial(5, 1, {3}, 1);
    const LinearForm form(5, {1, j});
    const auto coeffs = expand_composition(cube, form);
    const auto multisets = enumerate_multisets(2, 3);
    bool found = false;
    for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
      if (multisets[pos] == ms({0, 1, 1})) {
        CHECK(coeffs[pos] == (3 * j * j) % 5);
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("composition expansion edge cases") {
  const Polynomial cube = monomial(5, 2, {2, 1}, 1);
  const LinearForm single(5, {1});
  const auto coeffs = expand_composition(cube, single);
  REQUIRE(coeffs.size() == 1);  // only u = (0,0,0)
  CHECK(coeffs[0] == 1);

  const LinearForm zero(5, {0, 0});
  for (std::uint32_t c : expand_composition(cube, zero)) CHECK(c == 0);
}

TEST_CASE("composition expansion reproduces P(L(x)) pointwise") {
  Rng rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const std::uint32_t p = 5;
    const std::uint32_t n = 1 + rng.below(2);
    const std::uint32_t d = 1 + rng.below(3);
    const std::uint32_t k = 1 + rng.below(2);
    const Polynomial poly = Polynomial::random_homogeneous(p, n, d, rng);
    std::vector<std::uint32_t> lambda(k);
    for (auto& c : lambda) c = rng.below(p);
    const LinearForm form(p, lambda);

    const SymMultilinearForm b = polarize(poly);
    const auto coeffs = expand_composition(poly, form);
    const auto multisets = enumerate_multisets(k, d);

    const std::uint64_t size = checked_pow(p, n);
    std::uint64_t total = 1;
    for (std::uint32_t t = 0; t < k; ++t) total *= size;
    for (std::uint64_t flat = 0; flat < total; ++flat) {
      std::uint64_t rest = flat;
      std::vector<FpVector> xs;
      for (std::uint32_t t = 0; t < k; ++t) {
        xs.push_back(idx_decode(rest % size, p, n));
        rest /= size;
      }
      // L(x)
      FpVector lx = FpVector::zero(p, n);
      for (std::uint32_t t = 0; t < k; ++t) lx = lx + xs[t].scaled(form[t]);
      std::uint64_t rhs = 0;
      for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
        if (coeffs[pos] == 0) continue;
        std::vector<FpVector> args;
        for (std::uint32_t var : multisets[pos].entries) args.push_back(xs[var]);
        rhs += std::uint64_t(coeffs[pos]) * b.eval(args);
      }
      CHECK(poly.eval(lx).value() == rhs % p);
    }
  }
}

TEST_CASE("layer coefficients: the degree-3 example over four forms") {
  // forms x1 + j x2 for j = 1..4; second polynomial of degree 3, all lambda 1:
  // the (0,1,1) entry of its top layer is 3 * (1 + 4 + 9 + 16) = 6 mod 7.
  std::vector<LinearForm> forms;
  for (std::uint32_t j = 1; j <= 4; ++j) forms.emplace_back(7, std::vector<std::uint32_t>{1, j});
  const LinearSystem system{std::move(forms)};
  CoefficientMatrix lambda{{1, 1, 1, 1}, {1, 1, 1, 1}};
  std::vector<std::uint32_t> degrees{1, 3};
  const LayerCoefficients layers = layer_coefficients(lambda, system, degrees);

  const auto multisets = enumerate_multisets(2, 3);
  for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
    if (multisets[pos] == ms({0, 1, 1})) {
      CHECK(layers.at(1, 3, pos) == 6);
    }
  }
}

TEST_CASE("layer coefficients: the quadratic telescope") {
  // forms x1, x2, x1+x2; one quadratic polynomial with lambda = (1, 1, -1):
  // the mixed entry of layer 2 equals -2.
  const LinearSystem system{{LinearForm(5, {1, 0}), LinearForm(5, {0, 1}),
                             LinearForm(5, {1, 1})}};
  CoefficientMatrix lambda{{1, 1, 4}};
  std::vector<std::uint32_t> degrees{2};
  const LayerCoefficients layers = layer_coefficients(lambda, system, degrees);
  const auto multisets = enumerate_multisets(2, 2);
  for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
    if (multisets[pos] == ms({0, 1})) CHECK(layers.at(0, 2, pos) == 3);  // -2 mod 5
  }

  CoefficientMatrix zero{{0, 0, 0}};
  const LayerCoefficients zero_layers = layer_coefficients(zero, system, degrees);
  CHECK(zero_layers.all_layers_zero());
}

TEST_CASE("zero test: telescopes") {
  const LinearSystem telescope{{LinearForm(5, {1, 0}), LinearForm(5, {0, 1}),
                                LinearForm(5, {1, 1})}};
  CoefficientMatrix lambda{{1, 1, 4}};  // P(x) + P(y) - P(x+y)

  std::vector<std::uint32_t> deg1{1};
  CHECK(composition_vanishes(lambda, telescope, deg1, true));

  std::vector<std::uint32_t> deg2{2};
  CHECK_FALSE(composition_vanishes(lambda, telescope, deg2, true));

  const Polynomial lin = Polynomial::variable(5, 2, 0);
  std::vector<Polynomial> lin_collection{lin};
  CHECK(composition_vanishes_bruteforce(lambda, telescope, lin_collection));

  const Polynomial quad = monomial(5, 2, {2, 0}, 1);
  std::vector<Polynomial> quad_collection{quad};
  CHECK_FALSE(composition_vanishes_bruteforce(lambda, telescope, quad_collection));
}

TEST_CASE("zero test agrees with brute force on random homogeneous instances") {
  Rng rng(2024);
  int checked = 0;
  while (checked < 60) {
    const std::uint32_t p = 5;
    const std::uint32_t num_polys = 1 + rng.below(3);
    const std::uint32_t k = 1 + rng.below(2);
    const std::uint32_t m = 1 + rng.below(3);
    std::vector<std::uint32_t> degrees;
    for (std::uint32_t i = 0; i < num_polys; ++i) degrees.push_back(1 + rng.below(3));

    const auto polys = random_independent_collection(p, 2, degrees, rng);
    const LinearSystem system = random_system(p, k, m, rng);
    CoefficientMatrix lambda(num_polys, std::vector<std::uint32_t>(m));
    for (auto& row : lambda) {
      for (auto& c : row) c = rng.below(p);
    }
    const bool by_coeffs = composition_vanishes(lambda, system, degrees, true);
    const bool by_brute = composition_vanishes_bruteforce(lambda, system, polys);
    CHECK(by_coeffs == by_brute);
    ++checked;
  }
}

TEST_CASE("zero test for non-homogeneous polynomials over homogeneous systems") {
  Rng rng(77);
  int checked = 0;
  while (checked < 40) {
    const std::uint32_t p = 5;
    const std::uint32_t num_polys = 1 + rng.below(2);
    const std::uint32_t m = 2 + rng.below(2);
    const LinearSystem system = random_homogeneous_system(p, 2, m, rng);

    // polynomials with independent top parts plus arbitrary lower parts
    std::vector<std::uint32_t> degrees;
    for (std::uint32_t i = 0; i < num_polys; ++i) degrees.push_back(2 + rng.below(2));
    auto tops = random_independent_collection(p, 2, degrees, rng);
    std::vector<Polynomial> polys;
    for (std::uint32_t i = 0; i < num_polys; ++i) {
      Polynomial lower = Polynomial::random(p, 2, degrees[i] - 1, rng);
      polys.push_back(tops[i] + lower);
    }
    CoefficientMatrix lambda(num_polys, std::vector<std::uint32_t>(m));
    for (auto& row : lambda) {
      for (auto& c : row) c = rng.below(p);
    }
    const bool by_coeffs = composition_vanishes(lambda, system, degrees, false);
    const bool by_brute = composition_vanishes_bruteforce(lambda, system, polys);
    CHECK(by_coeffs == by_brute);
    ++checked;
  }
}

TEST_CASE("non-homogeneous polynomials over a non-homogeneous system are rejected") {
  const LinearSystem bad{{LinearForm(5, {1, 0}), LinearForm(5, {2, 1})}};
  REQUIRE_FALSE(homogeneity_witness(bad).has_value());
  CoefficientMatrix lambda{{1, 1}};
  std::vector<std::uint32_t> degrees{2};
  CHECK_THROWS_AS(composition_vanishes(lambda, bad, degrees, false), ValidationError);
}

TEST_CASE("checked zero test routes dependent collections to brute force") {
  const LinearSystem telescope{{LinearForm(5, {1, 0}), LinearForm(5, {0, 1}),
                                LinearForm(5, {1, 1})}};
  const Polynomial q = monomial(5, 2, {2, 0}, 1);
  std::vector<Polynomial> dependent{q, q.scaled(2)};
  CoefficientMatrix lambda{{1, 1, 4}, {0, 0, 0}};
  bool used_bruteforce = false;
  composition_vanishes_checked(lambda, telescope, dependent, &used_bruteforce);
  CHECK(used_bruteforce);

  std::vector<Polynomial> independent{q};
  CoefficientMatrix lambda1{{1, 1, 4}};
  CHECK_FALSE(composition_vanishes_checked(lambda1, telescope, independent, &used_bruteforce));
  CHECK_FALSE(used_bruteforce);
}

TEST_CASE("collapse assignments") {
  // Q = B(x1, x2): first nonzero value of g(a) = a1 a2 sits at a = (1,1).
  const auto multisets = enumerate_multisets(2, 2);
  std::vector<std::uint32_t> coeffs(multisets.size(), 0);
  for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
    if (multisets[pos] == ms({0, 1})) coeffs[pos] = 1;
  }
  auto hit = collapse_assignment(5, 2, 2, coeffs);
  REQUIRE(hit.has_value());
  CHECK(hit->point == std::vector<std::uint32_t>{1, 1});
  CHECK(hit->scale == 1);

  // Q = B(x1,x1) - B(x2,x2): a = (1,0) works already.
  std::vector<std::uint32_t> diff(multisets.size(), 0);
  for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
    if (multisets[pos] == ms({0, 0})) diff[pos] = 1;
    if (multisets[pos] == ms({1, 1})) diff[pos] = 4;
  }
  auto hit2 = collapse_assignment(5, 2, 2, diff);
  REQUIRE(hit2.has_value());
  CHECK(hit2->point == std::vector<std::uint32_t>{1, 0});
  CHECK(hit2->scale == 1);

  std::vector<std::uint32_t> zeros(multisets.size(), 0);
  CHECK_FALSE(collapse_assignment(5, 2, 2, zeros).has_value());
}

TEST_CASE("collapse assignment satisfies the collapse identity") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t p = 5, n = 2;
    const std::uint32_t d = 1 + rng.below(2);
    const std::uint32_t k = 2;
    const Polynomial poly = Polynomial::random_homogeneous(p, n, d, rng);
    const SymMultilinearForm b = polarize(poly);
    const auto multisets = enumerate_multisets(k, d);
    std::vector<std::uint32_t> coeffs(multisets.size());
    for (auto& c : coeffs) c = rng.below(p);
    const auto hit = collapse_assignment(p, k, d, coeffs);
    if (!hit) continue;
    // Q(a_1 w, ..., a_k w) = alpha B(w, ..., w) for every w
    for (std::uint64_t wi = 0; wi < checked_pow(p, n); ++wi) {
      const FpVector w = idx_decode(wi, p, n);
      std::uint64_t lhs = 0;
      for (std::size_t pos = 0; pos < multisets.size(); ++pos) {
        if (coeffs[pos] == 0) continue;
        std::vector<FpVector> args;
        for (std::uint32_t var : multisets[pos].entries) {
          args.push_back(w.scaled(hit->point[var]));
        }
        lhs += std::uint64_t(coeffs[pos]) * b.eval(args);
      }
      const std::uint64_t rhs =
          std::uint64_t(hit->scale) * b.eval_diagonal(w) % p;
      CHECK(lhs % p == rhs);
    }
  }
}
