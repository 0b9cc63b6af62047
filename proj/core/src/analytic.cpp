#include "hofa/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hofa/errors.hpp"
#include "hofa/reduction.hpp"
#include "hofa/rng.hpp"

namespace hofa {

namespace {
constexpr double kTau = 6.283185307179586476925286766559;

void require_same_shape(const DenseFunction& f, const DenseFunction& g) {
  if (f.p() != g.p() || f.n() != g.n()) {
    throw ValidationError("functions live on different groups");
  }
}

void check_budget(double needed, std::uint64_t budget, const char* what) {
  if (needed > static_cast<double>(budget)) {
    throw BudgetError(what, needed, static_cast<double>(budget));
  }
}
}  // namespace

RootTable::RootTable(std::uint32_t p) : p_(p) {
  require_prime(p);
  roots_.resize(p);
  for (std::uint32_t m = 0; m < p; ++m) {
    const double theta = kTau * m / p;
    roots_[m] = {std::cos(theta), std::sin(theta)};
  }
}

DenseFunction::DenseFunction(std::uint32_t p, std::uint32_t n, std::vector<cplx> values)
    : p_(p), n_(n), values_(std::move(values)) {
  require_prime(p);
  if (values_.size() != checked_pow(p, n)) {
    throw ValidationError("value table must have length p^n");
  }
  for (const cplx& v : values_) sup_norm_ = std::max(sup_norm_, std::abs(v));
}

DenseFunction DenseFunction::constant(std::uint32_t p, std::uint32_t n, cplx value) {
  return DenseFunction(p, n, std::vector<cplx>(checked_pow(p, n), value));
}

DenseFunction DenseFunction::phase(const Polynomial& poly) {
  const FunctionTable table = table_of(poly);
  RootTable roots(poly.p());
  std::vector<cplx> values(table.values.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = roots(table.values[i]);
  return DenseFunction(poly.p(), poly.n(), std::move(values));
}

DenseFunction DenseFunction::indicator(std::uint32_t p, std::uint32_t n,
                                       std::span<const std::uint64_t> points) {
  std::vector<cplx> values(checked_pow(p, n), cplx{0.0, 0.0});
  for (std::uint64_t i : points) {
    if (i >= values.size()) throw ValidationError("indicator point out of range");
    values[i] = cplx{1.0, 0.0};
  }
  return DenseFunction(p, n, std::move(values));
}

DenseFunction DenseFunction::random_unimodular(std::uint32_t p, std::uint32_t n,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> values(checked_pow(p, n));
  for (auto& v : values) v = rng.unimodular();
  return DenseFunction(p, n, std::move(values));
}

DenseFunction DenseFunction::random_disk(std::uint32_t p, std::uint32_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> values(checked_pow(p, n));
  for (auto& v : values) v = rng.in_disk();
  return DenseFunction(p, n, std::move(values));
}

DenseFunction pointwise_product(const DenseFunction& f, const DenseFunction& g) {
  require_same_shape(f, g);
  std::vector<cplx> values(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) values[i] = f[i] * g[i];
  return DenseFunction(f.p(), f.n(), std::move(values));
}

DenseFunction conjugate(const DenseFunction& f) {
  std::vector<cplx> values(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) values[i] = std::conj(f[i]);
  return DenseFunction(f.p(), f.n(), std::move(values));
}

DenseFunction operator+(const DenseFunction& f, const DenseFunction& g) {
  require_same_shape(f, g);
  std::vector<cplx> values(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) values[i] = f[i] + g[i];
  return DenseFunction(f.p(), f.n(), std::move(values));
}

DenseFunction operator-(const DenseFunction& f, const DenseFunction& g) {
  require_same_shape(f, g);
  std::vector<cplx> values(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) values[i] = f[i] - g[i];
  return DenseFunction(f.p(), f.n(), std::move(values));
}

DenseFunction scaled(const DenseFunction& f, cplx c) {
  std::vector<cplx> values(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) values[i] = f[i] * c;
  return DenseFunction(f.p(), f.n(), std::move(values));
}

DenseFunction shifted(const DenseFunction& f, cplx c) {
  std::vector<cplx> values(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) values[i] = f[i] + c;
  return DenseFunction(f.p(), f.n(), std::move(values));
}

Spectrum::Spectrum(std::uint32_t p, std::uint32_t n, std::vector<cplx> coeffs)
    : p_(p), n_(n), coeffs_(std::move(coeffs)) {
  require_prime(p);
  if (coeffs_.size() != checked_pow(p, n)) {
    throw ValidationError("spectrum must have length p^n");
  }
}

cplx mean(const DenseFunction& f) {
  return pairwise_mean(f.size(), [&](std::uint64_t i) { return f[i]; });
}

double bias(const DenseFunction& f) { return std::abs(mean(f)); }

cplx inner_product(const DenseFunction& f, const DenseFunction& g) {
  require_same_shape(f, g);
  return pairwise_mean(f.size(), [&](std::uint64_t i) { return f[i] * std::conj(g[i]); });
}

double l2_norm_sq(const DenseFunction& f) {
  return pairwise_mean(f.size(), [&](std::uint64_t i) { return cplx{std::norm(f[i]), 0.0}; })
      .real();
}

DenseFunction mult_derivative(const DenseFunction& f, std::uint64_t y_index) {
  GroupIndex g(f.p(), f.n());
  if (y_index >= g.size()) throw ValidationError("direction index out of range");
  std::vector<cplx> values(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    values[x] = f[g.add(x, y_index)] * std::conj(f[x]);
  }
  return DenseFunction(f.p(), f.n(), std::move(values));
}

DenseFunction mult_derivative(const DenseFunction& f, const FpVector& y) {
  if (y.modulus() != f.p() || y.dim() != f.n()) {
    throw ValidationError("direction has wrong shape");
  }
  return mult_derivative(f, idx_encode(y));
}

Spectrum fourier(const DenseFunction& f, FourierMethod method) {
  const std::uint32_t p = f.p();
  GroupIndex g(p, f.n());
  RootTable roots(p);
  if (method == FourierMethod::direct) {
    std::vector<cplx> coeffs(f.size());
    for (std::uint64_t alpha = 0; alpha < f.size(); ++alpha) {
      coeffs[alpha] = pairwise_mean(f.size(), [&](std::uint64_t x) {
        return f[x] * roots((p - g.dot_digits(alpha, x) % p) % p);
      });
    }
    return Spectrum(p, f.n(), std::move(coeffs));
  }
  // Radix-p: one p-point transform along each coordinate axis.
  std::vector<cplx> work(f.values());
  std::vector<cplx> slice(p);
  for (std::uint32_t axis = 0; axis < f.n(); ++axis) {
    const std::uint64_t stride = checked_pow(p, axis);
    for (std::uint64_t base = 0; base < f.size(); ++base) {
      if ((base / stride) % p != 0) continue;
      for (std::uint32_t t = 0; t < p; ++t) slice[t] = work[base + t * stride];
      for (std::uint32_t a = 0; a < p; ++a) {
        cplx acc{0.0, 0.0};
        for (std::uint32_t t = 0; t < p; ++t) {
          acc += slice[t] * roots((p - static_cast<std::uint64_t>(a) * t % p) % p);
        }
        work[base + a * stride] = acc;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(f.size());
  for (auto& c : work) c *= scale;
  return Spectrum(p, f.n(), std::move(work));
}

DenseFunction inverse_fourier(const Spectrum& spectrum, FourierMethod method) {
  const std::uint32_t p = spectrum.p();
  GroupIndex g(p, spectrum.n());
  RootTable roots(p);
  if (method == FourierMethod::direct) {
    std::vector<cplx> values(spectrum.size());
    for (std::uint64_t x = 0; x < spectrum.size(); ++x) {
      values[x] = pairwise_sum(spectrum.size(), [&](std::uint64_t alpha) {
        return spectrum[alpha] * roots(g.dot_digits(alpha, x));
      });
    }
    return DenseFunction(p, spectrum.n(), std::move(values));
  }
  std::vector<cplx> work(spectrum.coeffs());
  std::vector<cplx> slice(p);
  for (std::uint32_t axis = 0; axis < spectrum.n(); ++axis) {
    const std::uint64_t stride = checked_pow(p, axis);
    for (std::uint64_t base = 0; base < spectrum.size(); ++base) {
      if ((base / stride) % p != 0) continue;
      for (std::uint32_t t = 0; t < p; ++t) slice[t] = work[base + t * stride];
      for (std::uint32_t a = 0; a < p; ++a) {
        cplx acc{0.0, 0.0};
        for (std::uint32_t t = 0; t < p; ++t) {
          acc += slice[t] * roots(static_cast<std::uint64_t>(a) * t % p);
        }
        work[base + a * stride] = acc;
      }
    }
  }
  return DenseFunction(p, spectrum.n(), std::move(work));
}

namespace {

// Shared engine for the Gowers inner product and the direct-norm path:
// averages prod_S conj^{k-|S|} family[S](x + sum_{i in S} y_i) over the
// whole cube. Deterministic via the pairwise reduction.
cplx gowers_cube_average(std::span<const DenseFunction> family, std::uint32_t k,
                         std::uint64_t budget) {
  if (k > 10) throw ValidationError("Gowers cube order capped at k = 10");
  const DenseFunction& f0 = family[0];
  GroupIndex g(f0.p(), f0.n());
  const double needed =
      std::pow(static_cast<double>(g.size()), static_cast<double>(k) + 1.0);
  check_budget(needed, budget, "Gowers cube enumeration over budget");

  const std::uint64_t size = g.size();
  std::uint64_t total = size;
  for (std::uint32_t i = 0; i < k; ++i) total *= size;

  const std::uint32_t masks = 1u << k;
  return pairwise_mean(total, [&](std::uint64_t flat) {
    const std::uint64_t x = flat % size;
    std::uint64_t rest = flat / size;
    // Subset-sum shifts built lowest-set-bit first.
    std::uint64_t shift[1024];
    shift[0] = 0;
    std::uint64_t y[16];
    for (std::uint32_t j = 0; j < k; ++j) {
      y[j] = rest % size;
      rest /= size;
    }
    for (std::uint32_t mask = 1; mask < masks; ++mask) {
      const std::uint32_t low = static_cast<std::uint32_t>(std::countr_zero(mask));
      shift[mask] = g.add(shift[mask & (mask - 1)], y[low]);
    }
    cplx prod{1.0, 0.0};
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      const cplx v = family[mask][g.add(x, shift[mask])];
      prod *= ((k - std::popcount(mask)) % 2 != 0) ? std::conj(v) : v;
    }
    return prod;
  });
}

double gowers_pow_recursive(const DenseFunction& f, std::uint32_t k) {
  if (k == 1) {
    const double b = bias(f);
    return b * b;
  }
  GroupIndex g(f.p(), f.n());
  const cplx avg = pairwise_mean(
      g.size(),
      [&](std::uint64_t y) {
        return cplx{gowers_pow_recursive(mult_derivative(f, y), k - 1), 0.0};
      },
      1);  // serial outer level; inner averages already parallelize
  return avg.real();
}

}  // namespace

double gowers_norm(const DenseFunction& f, std::uint32_t k, GowersMethod method,
                   std::uint64_t budget) {
  if (k == 0 || k >= 31) throw ValidationError("Gowers norm order out of range");
  if (method == GowersMethod::automatic) {
    GroupIndex g(f.p(), f.n());
    const double needed =
        std::pow(static_cast<double>(g.size()), static_cast<double>(k) + 1.0);
    method = needed <= static_cast<double>(budget) ? GowersMethod::direct
                                                   : GowersMethod::recursive;
  }
  double power;
  if (method == GowersMethod::direct) {
    std::vector<DenseFunction> family(1u << k, f);
    power = gowers_cube_average(family, k, budget).real();
  } else {
    power = gowers_pow_recursive(f, k);
  }
  power = std::max(power, 0.0);
  return std::pow(power, 1.0 / static_cast<double>(std::uint64_t(1) << k));
}

cplx gowers_inner_product(std::span<const DenseFunction> family, std::uint64_t budget) {
  if (family.empty() || !std::has_single_bit(family.size())) {
    throw ValidationError("family must contain 2^k functions indexed by subset");
  }
  const std::uint32_t k = static_cast<std::uint32_t>(std::countr_zero(family.size()));
  if (k == 0) throw ValidationError("family needs k >= 1");
  for (const auto& fn : family) require_same_shape(fn, family[0]);
  return gowers_cube_average(family, k, budget);
}

cplx t_average_naive(const LinearSystem& system, std::span<const DenseFunction> fs,
                     std::uint64_t budget) {
  if (fs.size() != system.m()) throw ValidationError("need one function per form");
  for (const auto& fn : fs) {
    require_same_shape(fn, fs[0]);
    if (fn.p() != system.p()) throw ValidationError("function modulus differs from system");
  }
  GroupIndex g(fs[0].p(), fs[0].n());
  const std::uint32_t k = system.k();
  if (k > 32) throw ValidationError("variable count capped at 32");
  const double needed = std::pow(static_cast<double>(g.size()), static_cast<double>(k));
  check_budget(needed, budget, "naive linear-form average over budget");

  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < k; ++i) total *= g.size();

  return pairwise_mean(total, [&](std::uint64_t flat) {
    std::uint64_t xs[32];
    for (std::uint32_t t = 0; t < k; ++t) {
      xs[t] = flat % g.size();
      flat /= g.size();
    }
    cplx prod{1.0, 0.0};
    for (std::uint32_t j = 0; j < system.m(); ++j) {
      prod *= fs[j][g.combine(system.form(j).coeffs(),
                              std::span<const std::uint64_t>(xs, k))];
    }
    return prod;
  });
}

cplx t_average_naive(const LinearSystem& system, const DenseFunction& f, std::uint64_t budget) {
  std::vector<DenseFunction> fs(system.m(), f);
  return t_average_naive(system, fs, budget);
}

cplx t_average_fourier(const LinearSystem& system, const DenseFunction& f,
                       std::uint64_t budget) {
  if (f.p() != system.p()) throw ValidationError("function modulus differs from system");
  const std::uint32_t p = system.p();
  const std::uint32_t m = system.m();
  const std::uint32_t n = f.n();
  if (m > 32 || n > 32) throw ValidationError("system size or dimension capped at 32");

  // Per-coordinate kernel: beta in F_p^m with sum_i lambda_{i,j} beta_i = 0
  // for every variable j.
  GfMatrix a(system.k(), GfRow(m));
  for (std::uint32_t j = 0; j < system.k(); ++j) {
    for (std::uint32_t i = 0; i < m; ++i) a[j][i] = system.form(i)[j];
  }
  const GfMatrix basis = gf_nullspace(a, p);
  const std::uint64_t kernel_size = checked_pow(p, static_cast<std::uint32_t>(basis.size()));

  const double needed =
      std::pow(static_cast<double>(kernel_size), static_cast<double>(n));
  check_budget(needed, budget, "Fourier kernel enumeration over budget");

  // Materialize the kernel once.
  std::vector<std::vector<std::uint32_t>> kernel;
  kernel.reserve(kernel_size);
  std::vector<std::uint32_t> combo(basis.size(), 0);
  for (std::uint64_t c = 0; c < kernel_size; ++c) {
    std::vector<std::uint32_t> beta(m, 0);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      for (std::uint32_t i = 0; i < m; ++i) {
        beta[i] = static_cast<std::uint32_t>(
            (beta[i] + static_cast<std::uint64_t>(combo[b]) * basis[b][i]) % p);
      }
    }
    kernel.push_back(std::move(beta));
    std::size_t slot = 0;
    while (slot < combo.size() && ++combo[slot] == p) combo[slot++] = 0;
  }

  const Spectrum spec = fourier(f);
  std::vector<std::uint64_t> pow_p(n + 1);
  pow_p[0] = 1;
  for (std::uint32_t i = 0; i < n; ++i) pow_p[i + 1] = pow_p[i] * p;

  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n; ++i) total *= kernel_size;

  return pairwise_sum(total, [&](std::uint64_t flat) {
    // One kernel element per coordinate slot assembles each alpha_i.
    std::uint64_t alpha[32] = {};
    for (std::uint32_t t = 0; t < n; ++t) {
      const auto& beta = kernel[flat % kernel_size];
      flat /= kernel_size;
      for (std::uint32_t i = 0; i < m; ++i) alpha[i] += beta[i] * pow_p[t];
    }
    cplx prod{1.0, 0.0};
    for (std::uint32_t i = 0; i < m; ++i) prod *= spec[alpha[i]];
    return prod;
  });
}

}  // namespace hofa
