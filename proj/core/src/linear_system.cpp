#include "hofa/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hofa/errors.hpp"

namespace hofa {

LinearForm::LinearForm(std::uint32_t p, std::vector<std::uint32_t> coeffs)
    : p_(p), coeffs_(std::move(coeffs)) {
  require_prime(p);
  if (coeffs_.empty()) throw ValidationError("linear form needs at least one variable");
  for (auto& c : coeffs_) c %= p;
}

bool LinearForm::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::uint32_t c) { return c == 0; });
}

LinearSystem::LinearSystem(std::vector<LinearForm> forms) : forms_(std::move(forms)) {
  if (forms_.empty()) throw ValidationError("system needs at least one form");
  for (const auto& f : forms_) {
    if (f.p() != forms_[0].p() || f.k() != forms_[0].k()) {
      throw ValidationError("forms disagree on p or variable count");
    }
  }
  for (std::size_t i = 0; i < forms_.size(); ++i) {
    for (std::size_t j = i + 1; j < forms_.size(); ++j) {
      if (forms_[i] == forms_[j]) throw ValidationError("forms must be pairwise distinct");
    }
  }
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> LinearSystem::proportional_pair() const {
  const std::uint32_t p_mod = p();
  for (std::uint32_t i = 0; i < m(); ++i) {
    if (form(i).is_zero()) return std::make_pair(i, i);
    for (std::uint32_t j = i + 1; j < m(); ++j) {
      if (form(j).is_zero()) return std::make_pair(j, j);
      // form(j) = c * form(i)?
      std::uint32_t c = 0;
      bool ok = true;
      for (std::uint32_t t = 0; t < k(); ++t) {
        const std::uint32_t a = form(i)[t];
        const std::uint32_t b = form(j)[t];
        if (a == 0) {
          if (b != 0) {
            ok = false;
            break;
          }
          continue;
        }
        const std::uint32_t ratio =
            static_cast<std::uint32_t>(static_cast<std::uint64_t>(b) * mod_inverse(a, p_mod) % p_mod);
        if (c == 0) {
          c = ratio;
        } else if (c != ratio) {
          ok = false;
          break;
        }
      }
      if (ok) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

LinearSystem arithmetic_progression(std::uint32_t p, std::uint32_t len) {
  std::vector<LinearForm> forms;
  for (std::uint32_t j = 0; j < len; ++j) {
    forms.emplace_back(p, std::vector<std::uint32_t>{1, j % p});
  }
  return LinearSystem(std::move(forms));
}

std::vector<std::uint32_t> tensor_power(const LinearForm& form, std::uint32_t d,
                                        std::uint64_t budget) {
  if (d == 0) throw ValidationError("tensor power needs d >= 1");
  const std::uint32_t k = form.k();
  double needed = std::pow(static_cast<double>(k), static_cast<double>(d));
  if (needed > static_cast<double>(budget)) {
    throw BudgetError("tensor power over budget", needed, static_cast<double>(budget));
  }
  const std::uint64_t size = checked_pow(k, d);
  const std::uint32_t p = form.p();
  std::vector<std::uint32_t> out(size);
  std::vector<std::uint32_t> digits(d, 0);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    std::uint64_t prod = 1;
    for (std::uint32_t j = 0; j < d; ++j) prod = prod * form[digits[j]] % p;
    out[idx] = static_cast<std::uint32_t>(prod);
    std::uint32_t j = 0;
    while (j < d && ++digits[j] == k) digits[j++] = 0;
  }
  return out;
}

namespace {

// Sorted multi-indices (u_1 <= ... <= u_d) over variables [0, k).
void for_each_sorted_tuple(std::uint32_t k, std::uint32_t d,
                           const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> u(d, 0);
  for (;;) {
    fn(u);
    std::int64_t j = static_cast<std::int64_t>(d) - 1;
    while (j >= 0 && u[j] == k - 1) --j;
    if (j < 0) break;
    ++u[j];
    for (std::size_t t = j + 1; t < d; ++t) u[t] = u[j];
  }
}

}  // namespace

std::vector<std::uint32_t> tensor_power_compressed(const LinearForm& form, std::uint32_t d) {
  if (d == 0) throw ValidationError("tensor power needs d >= 1");
  const std::uint32_t p = form.p();
  std::vector<std::uint32_t> out;
  for_each_sorted_tuple(form.k(), d, [&](const std::vector<std::uint32_t>& u) {
    std::uint64_t prod = 1;
    for (std::uint32_t j : u) prod = prod * form[j] % p;
    out.push_back(static_cast<std::uint32_t>(prod));
  });
  return out;
}

TrueComplexityResult true_complexity(const LinearSystem& system, std::uint32_t d_max) {
  if (auto pair = system.proportional_pair()) {
    throw ScalarMultipleError(
        "forms " + std::to_string(pair->first) + " and " + std::to_string(pair->second) +
        " are scalar multiples; tensor powers never become independent");
  }
  TrueComplexityResult result;
  for (std::uint32_t d = 0; d <= d_max; ++d) {
    GfMatrix rows;
    for (const LinearForm& f : system.forms()) rows.push_back(tensor_power_compressed(f, d + 1));
    const std::size_t rank = gf_rank(rows, system.p());
    result.rank_trace.emplace_back(d, rank);
    if (rank == system.m()) {
      result.d = d;
      return result;
    }
  }
  throw BudgetError("no qualifying degree for true complexity", d_max + 1, d_max);
}

namespace {

// Can the other forms be split into at most `parts` groups, none of whose
// spans contain target? Backtracking with incremental per-group bases.
bool partition_feasible(const LinearSystem& system, const std::vector<std::uint32_t>& others,
                        const GfRow& target, std::uint32_t parts,
                        std::vector<std::vector<std::uint32_t>>& witness) {
  const std::uint32_t p = system.p();
  std::vector<GfMatrix> groups(parts);
  std::vector<std::vector<std::uint32_t>> members(parts);

  std::function<bool(std::size_t, std::uint32_t)> place = [&](std::size_t pos,
                                                              std::uint32_t used) -> bool {
    if (pos == others.size()) {
      witness.clear();
      for (std::uint32_t g = 0; g < used; ++g) witness.push_back(members[g]);
      return true;
    }
    const GfRow& row = system.form(others[pos]).coeffs();
    // Trying only one fresh group breaks the symmetry between empty groups.
    const std::uint32_t tryable = std::min<std::uint32_t>(parts, used + 1);
    for (std::uint32_t g = 0; g < tryable; ++g) {
      GfMatrix extended = groups[g];
      extended.push_back(row);
      if (gf_in_span(target, extended, p).has_value()) continue;
      groups[g] = std::move(extended);
      members[g].push_back(others[pos]);
      if (place(pos + 1, std::max(used, g + 1))) return true;
      members[g].pop_back();
      groups[g].pop_back();
    }
    return false;
  };
  return place(0, 0);
}

}  // namespace

CsComplexityResult cs_complexity(const LinearSystem& system, std::uint32_t exact_limit) {
  if (auto pair = system.proportional_pair()) {
    throw ScalarMultipleError("forms " + std::to_string(pair->first) + " and " +
                              std::to_string(pair->second) +
                              " are scalar multiples; no finite partition complexity");
  }
  const std::uint32_t p = system.p();
  CsComplexityResult result;
  result.witness_partitions.resize(system.m());

  std::uint32_t s = 0;
  for (std::uint32_t i = 0; i < system.m(); ++i) {
    std::vector<std::uint32_t> others;
    for (std::uint32_t j = 0; j < system.m(); ++j) {
      if (j != i) others.push_back(j);
    }
    const GfRow& target = system.form(i).coeffs();

    // Greedy first-fit upper bound.
    std::vector<GfMatrix> groups;
    std::vector<std::vector<std::uint32_t>> greedy;
    for (std::uint32_t idx : others) {
      bool placed = false;
      for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
        GfMatrix extended = groups[g];
        extended.push_back(system.form(idx).coeffs());
        if (!gf_in_span(target, extended, p).has_value()) {
          groups[g] = std::move(extended);
          greedy[g].push_back(idx);
          placed = true;
        }
      }
      if (!placed) {
        groups.push_back({system.form(idx).coeffs()});
        greedy.push_back({idx});
      }
    }
    std::uint32_t best = static_cast<std::uint32_t>(groups.size());
    std::vector<std::vector<std::uint32_t>> witness = greedy;

    if (system.m() <= exact_limit) {
      for (std::uint32_t parts = others.empty() ? 0 : 1; parts < best; ++parts) {
        std::vector<std::vector<std::uint32_t>> exact;
        if (partition_feasible(system, others, target, parts, exact)) {
          best = parts;
          witness = std::move(exact);
          break;
        }
      }
    } else {
      result.upper_bound_only = true;
    }
    result.witness_partitions[i] = std::move(witness);
    s = std::max(s, best == 0 ? 0 : best - 1);
  }
  result.s = s;
  return result;
}

std::optional<FpVector> homogeneity_witness(const LinearSystem& system) {
  GfMatrix rows;
  for (const LinearForm& f : system.forms()) rows.push_back(f.coeffs());
  GfRow ones(system.m(), 1);
  auto v = gf_solve(rows, ones, system.p());
  if (!v) return std::nullopt;
  return FpVector(system.p(), *v);
}

LinearSystem canonicalize_homogeneous(const LinearSystem& system) {
  auto witness = homogeneity_witness(system);
  if (!witness) throw ValidationError("cannot canonicalize a non-homogeneous system");
  const std::uint32_t p = system.p();
  const std::uint32_t k = system.k();

  // Build invertible T with first column = witness; remaining columns
  // complete it to a basis (greedily from the standard basis).
  GfMatrix columns{witness->coords()};
  for (std::uint32_t j = 0; j < k && columns.size() < k; ++j) {
    GfRow e(k, 0);
    e[j] = 1;
    GfMatrix candidate = columns;
    candidate.push_back(e);
    if (gf_rank(candidate, p) == candidate.size()) columns.push_back(e);
  }

  std::vector<LinearForm> out;
  for (const LinearForm& f : system.forms()) {
    GfRow coeffs(k);
    for (std::uint32_t j = 0; j < k; ++j) {
      std::uint64_t acc = 0;
      for (std::uint32_t t = 0; t < k; ++t) {
        acc += static_cast<std::uint64_t>(columns[j][t]) * f[t];
      }
      coeffs[j] = static_cast<std::uint32_t>(acc % p);
    }
    out.emplace_back(p, std::move(coeffs));
  }
  return LinearSystem(std::move(out));
}

namespace {

// Canonical bytes of the relation space {c : sum_i c_i L_i = 0}.
std::string relation_space_key(const std::vector<const LinearForm*>& forms, std::uint32_t p,
                               std::uint32_t k) {
  GfMatrix a(k, GfRow(forms.size()));
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::uint32_t t = 0; t < k; ++t) a[t][i] = (*forms[i])[t];
  }
  GfMatrix basis = gf_row_space_canonical(gf_nullspace(a, p), p);
  std::string key;
  key.reserve(basis.size() * forms.size());
  for (const auto& row : basis) {
    for (std::uint32_t x : row) key.push_back(static_cast<char>('0' + x));
    key.push_back('|');
  }
  return key;
}

}  // namespace

std::optional<std::vector<std::uint32_t>> systems_isomorphic(const LinearSystem& a,
                                                             const LinearSystem& b,
                                                             std::uint32_t perm_limit) {
  if (a.p() != b.p()) throw ValidationError("systems live over different fields");
  if (a.m() != b.m()) throw ValidationError("systems have different sizes");
  if (a.m() > perm_limit) {
    throw BudgetError("isomorphism search over budget", a.m(), perm_limit);
  }
  std::vector<const LinearForm*> fa;
  for (const auto& f : a.forms()) fa.push_back(&f);
  const std::string key_a = relation_space_key(fa, a.p(), a.k());

  std::vector<std::uint32_t> perm(b.m());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<const LinearForm*> fb;
    for (std::uint32_t i : perm) fb.push_back(&b.form(i));
    if (relation_space_key(fb, b.p(), b.k()) == key_a) {
      return perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::string isomorphism_key(const LinearSystem& system, std::uint32_t perm_limit) {
  if (system.m() > perm_limit) {
    throw BudgetError("isomorphism key over budget", system.m(), perm_limit);
  }
  std::vector<std::uint32_t> perm(system.m());
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::vector<const LinearForm*> forms;
    for (std::uint32_t i : perm) forms.push_back(&system.form(i));
    std::string key = relation_space_key(forms, system.p(), system.k());
    if (best.empty() || key < best) best = std::move(key);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::to_string(system.m()) + ";" + best;
}

ComplexityReport analyze(const LinearSystem& system) {
  ComplexityReport report;
  auto cs = cs_complexity(system);
  auto td = true_complexity(system);
  report.cs = cs.s;
  report.true_d = td.d;
  report.witness_partitions = std::move(cs.witness_partitions);
  report.rank_trace = std::move(td.rank_trace);
  report.cs_upper_bound_only = cs.upper_bound_only;
  report.true_d_is_zero = (td.d == 0);
  report.true_d_min1 = std::max<std::uint32_t>(td.d, 1);
  report.cs_exceeds_p = (cs.s > system.p());
  if (report.true_d > report.cs) {
    throw std::logic_error("true complexity exceeded Cauchy-Schwarz complexity");
  }
  if (auto w = homogeneity_witness(system)) report.homogeneous_witness = w->coords();
  return report;
}

}  // namespace hofa
