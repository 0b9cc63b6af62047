#include "hofa/factors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hofa/errors.hpp"
#include "hofa/reduction.hpp"

namespace hofa {

PolynomialFactor::PolynomialFactor(std::uint32_t p, std::uint32_t n,
                                   std::vector<Polynomial> polys)
    : p_(p), n_(n), polys_(std::move(polys)) {
  require_prime(p);
  for (const auto& poly : polys_) {
    if (poly.p() != p || poly.n() != n) throw ValidationError("factor polynomial shape mismatch");
  }
  checked_pow(p, static_cast<std::uint32_t>(polys_.size()));  // key must fit 64 bits

  const std::uint64_t size = checked_pow(p, n);
  std::vector<FunctionTable> tables;
  tables.reserve(polys_.size());
  for (const auto& poly : polys_) tables.push_back(table_of(poly));

  atom_keys_.resize(size);
  atom_index_.resize(size);
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  for (std::uint64_t x = 0; x < size; ++x) {
    std::uint64_t key = 0;
    std::uint64_t mul = 1;
    for (const auto& table : tables) {
      key += mul * table.values[x];
      mul *= p;
    }
    atom_keys_[x] = key;
    auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size()));
    atom_index_[x] = it->second;
  }
  num_atoms_ = ids.size();
}

PolynomialFactor PolynomialFactor::trivial(std::uint32_t p, std::uint32_t n) {
  return PolynomialFactor(p, n, {});
}

int PolynomialFactor::degree() const noexcept {
  int d = -1;
  for (const auto& poly : polys_) d = std::max(d, poly.degree());
  return d;
}

bool PolynomialFactor::refines(const PolynomialFactor& coarser) const {
  if (p_ != coarser.p_ || n_ != coarser.n_) return false;
  std::unordered_map<std::uint32_t, std::uint64_t> image;
  for (std::uint64_t x = 0; x < atom_keys_.size(); ++x) {
    auto [it, inserted] = image.try_emplace(atom_index_[x], coarser.atom_keys_[x]);
    if (!inserted && it->second != coarser.atom_keys_[x]) return false;
  }
  return true;
}

DenseFunction conditional_expectation(const DenseFunction& f, const PolynomialFactor& factor) {
  if (f.p() != factor.p() || f.n() != factor.n()) {
    throw ValidationError("function and factor live on different groups");
  }
  std::vector<cplx> sums(factor.num_atoms(), cplx{0.0, 0.0});
  std::vector<std::uint64_t> counts(factor.num_atoms(), 0);
  const auto& atom = factor.atom_index();
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    sums[atom[x]] += f[x];
    ++counts[atom[x]];
  }
  std::vector<cplx> values(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    values[x] = sums[atom[x]] / static_cast<double>(counts[atom[x]]);
  }
  return DenseFunction(f.p(), f.n(), std::move(values));
}

std::pair<cplx, cplx> project_check(const DenseFunction& f, const DenseFunction& g,
                                    const PolynomialFactor& factor) {
  if (g.p() != factor.p() || g.n() != factor.n()) {
    throw ValidationError("function and factor live on different groups");
  }
  // Measurability: constant on every atom.
  std::unordered_map<std::uint32_t, cplx> rep;
  for (std::uint64_t x = 0; x < g.size(); ++x) {
    auto [it, inserted] = rep.try_emplace(factor.atom_index()[x], g[x]);
    if (!inserted && std::abs(it->second - g[x]) > 1e-9) {
      throw ValidationError("g is not measurable with respect to the factor");
    }
  }
  return {inner_product(f, g), inner_product(conditional_expectation(f, factor), g)};
}

namespace {

double phase_bias(const FunctionTable& table) {
  RootTable roots(table.p);
  const cplx sum = pairwise_sum(table.values.size(),
                                [&](std::uint64_t i) { return roots(table.values[i]); });
  return std::abs(sum) / static_cast<double>(table.values.size());
}

bool table_is_constant(const std::vector<std::uint32_t>& values) {
  return std::all_of(values.begin(), values.end(),
                     [&](std::uint32_t v) { return v == values[0]; });
}

}  // namespace

bool verify_witness(const RankCertificate& cert, std::span<const Polynomial> polys) {
  if (!cert.witness) return false;
  const auto& witness = *cert.witness;
  if (witness.alpha.size() != polys.size()) return false;
  const std::uint32_t p = polys[0].p();

  std::vector<std::uint32_t> combo_values;
  {
    std::vector<Polynomial> all(polys.begin(), polys.end());
    Polynomial combo = lincomb(witness.alpha, all);
    combo_values = table_of(combo).values;
  }
  std::vector<FunctionTable> q_tables;
  for (const auto& q : witness.qs) q_tables.push_back(table_of(q));

  for (std::uint64_t x = 0; x < combo_values.size(); ++x) {
    std::uint64_t key = 0;
    std::uint64_t mul = 1;
    for (const auto& table : q_tables) {
      key += mul * table.values[x];
      mul *= p;
    }
    auto it = witness.gamma.find(key);
    if (it == witness.gamma.end() || it->second != combo_values[x]) return false;
  }
  return true;
}

RankCertificate rank_gt(std::span<const Polynomial> polys, std::uint32_t r,
                        const RankBudget& budget) {
  if (polys.empty()) throw ValidationError("rank test needs at least one polynomial");
  const std::uint32_t p = polys[0].p();
  const std::uint32_t n = polys[0].n();
  for (const auto& poly : polys) {
    if (poly.p() != p || poly.n() != n) throw ValidationError("polynomial shape mismatch");
  }
  const std::uint32_t t = static_cast<std::uint32_t>(polys.size());
  const std::uint64_t num_alpha = checked_pow(p, t);
  const std::uint64_t size = checked_pow(p, n);

  std::vector<FunctionTable> tables;
  for (const auto& poly : polys) tables.push_back(table_of(poly));

  // Candidate Q lists per degree bound, built lazily.
  std::vector<std::vector<Polynomial>> candidates_by_degree;
  std::vector<std::vector<std::vector<std::uint32_t>>> candidate_tables_by_degree;
  auto candidates_for = [&](std::uint32_t dq) -> std::size_t {
    if (candidates_by_degree.size() <= dq) {
      candidates_by_degree.resize(dq + 1);
      candidate_tables_by_degree.resize(dq + 1);
    }
    if (candidates_by_degree[dq].empty()) {
      PolynomialEnumerator it(p, n, dq, budget.enum_budget);
      Polynomial q(p, n);
      while (it.next(q)) {
        candidates_by_degree[dq].push_back(q);
        candidate_tables_by_degree[dq].push_back(table_of(q).values);
      }
    }
    return candidates_by_degree[dq].size();
  };

  // Feasibility pre-check: the largest tuple space we might enumerate.
  {
    int max_d = 0;
    for (const auto& poly : polys) max_d = std::max(max_d, poly.degree());
    if (max_d >= 1) {
      const double base = polynomial_count(p, n, static_cast<std::uint32_t>(max_d - 1));
      const double tuples = std::pow(base, static_cast<double>(r));
      if (tuples > static_cast<double>(budget.max_tuples)) {
        RankCertificate cert;
        cert.r = r;
        if (!budget.allow_bias_fallback) {
          throw BudgetError("exhaustive rank search over budget", tuples,
                            static_cast<double>(budget.max_tuples));
        }
        cert.kind = RankCertificate::Kind::bias_bound;
        cert.configured_bound = budget.bias_rank_bound;
        double max_bias = 0.0;
        for (std::uint64_t a = 1; a < num_alpha; ++a) {
          FunctionTable combo{p, n, std::vector<std::uint32_t>(size, 0)};
          std::uint64_t rest = a;
          for (std::uint32_t j = 0; j < t; ++j) {
            const std::uint32_t c = static_cast<std::uint32_t>(rest % p);
            rest /= p;
            if (c == 0) continue;
            for (std::uint64_t x = 0; x < size; ++x) {
              combo.values[x] =
                  static_cast<std::uint32_t>((combo.values[x] +
                                              static_cast<std::uint64_t>(c) * tables[j].values[x]) %
                                             p);
            }
          }
          max_bias = std::max(max_bias, phase_bias(combo));
        }
        cert.measured_bias = max_bias;
        return cert;
      }
    }
  }

  for (std::uint64_t a = 1; a < num_alpha; ++a) {
    std::vector<std::uint32_t> alpha(t);
    {
      std::uint64_t rest = a;
      for (std::uint32_t j = 0; j < t; ++j) {
        alpha[j] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
    }
    int d = -1;
    for (std::uint32_t j = 0; j < t; ++j) {
      if (alpha[j] != 0) d = std::max(d, polys[j].degree());
    }
    std::vector<std::uint32_t> combo(size, 0);
    for (std::uint64_t x = 0; x < size; ++x) {
      std::uint64_t acc = 0;
      for (std::uint32_t j = 0; j < t; ++j) {
        acc += static_cast<std::uint64_t>(alpha[j]) * tables[j].values[x];
      }
      combo[x] = static_cast<std::uint32_t>(acc % p);
    }

    if (table_is_constant(combo)) {
      RankCertificate cert;
      cert.kind = RankCertificate::Kind::exhaustive;
      cert.r = r;
      cert.rank_exceeds = false;
      RankCertificate::Witness witness;
      witness.alpha = alpha;
      witness.gamma.emplace(0, combo[0]);
      cert.witness = std::move(witness);
      return cert;
    }
    if (d <= 0) continue;  // unreachable: a nonconstant combination has degree >= 1

    const std::uint32_t dq = static_cast<std::uint32_t>(d - 1);
    const std::size_t num_candidates = candidates_for(dq);
    if (r == 0) continue;  // nonconstant combination is never a function of nothing

    // Ordered r-tuples of candidates; first witness in enumeration order.
    std::vector<std::size_t> pick(r, 0);
    std::unordered_map<std::uint64_t, std::uint32_t> gamma;
    for (;;) {
      gamma.clear();
      bool consistent = true;
      for (std::uint64_t x = 0; x < size && consistent; ++x) {
        std::uint64_t key = 0;
        std::uint64_t mul = 1;
        for (std::uint32_t slot = 0; slot < r; ++slot) {
          key += mul * candidate_tables_by_degree[dq][pick[slot]][x];
          mul *= p;
        }
        auto [it, inserted] = gamma.try_emplace(key, combo[x]);
        consistent = inserted || it->second == combo[x];
      }
      if (consistent) {
        RankCertificate cert;
        cert.kind = RankCertificate::Kind::exhaustive;
        cert.r = r;
        cert.rank_exceeds = false;
        RankCertificate::Witness witness;
        witness.alpha = alpha;
        for (std::uint32_t slot = 0; slot < r; ++slot) {
          witness.qs.push_back(candidates_by_degree[dq][pick[slot]]);
        }
        witness.gamma = std::move(gamma);
        cert.witness = std::move(witness);
        return cert;
      }
      std::uint32_t slot = 0;
      while (slot < r && ++pick[slot] == num_candidates) pick[slot++] = 0;
      if (slot == r) break;
    }
  }

  RankCertificate cert;
  cert.kind = RankCertificate::Kind::exhaustive;
  cert.r = r;
  cert.rank_exceeds = true;
  return cert;
}

std::uint32_t GrowthSpec::eval(std::uint32_t c) const {
  if (!sequence.empty()) {
    return sequence[std::min<std::size_t>(c, sequence.size() - 1)];
  }
  const std::int64_t v = static_cast<std::int64_t>(c) + offset;
  return v < 0 ? 0 : static_cast<std::uint32_t>(v);
}

GrowthSpec GrowthSpec::parse(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  const std::string prefix = "r(C)=C+";
  if (s.rfind(prefix, 0) != 0) {
    throw ValidationError("growth spec must look like \"r(C)=C+<int>\"");
  }
  GrowthSpec spec;
  try {
    spec.offset = std::stoll(s.substr(prefix.size()));
  } catch (const std::exception&) {
    throw ValidationError("growth spec must look like \"r(C)=C+<int>\"");
  }
  return spec;
}

std::string GrowthSpec::text() const {
  if (!sequence.empty()) return "<sequence>";
  return "r(C)=C+" + std::to_string(offset);
}

PolynomialFactor refine_to_high_rank(const PolynomialFactor& factor, const GrowthSpec& growth,
                                     const RankBudget& budget) {
  std::vector<Polynomial> polys = factor.polys();
  // Constants define no atoms; drop them and duplicates up front.
  std::vector<Polynomial> cleaned;
  for (const auto& poly : polys) {
    if (poly.is_constant()) continue;
    if (std::find(cleaned.begin(), cleaned.end(), poly) == cleaned.end()) {
      cleaned.push_back(poly);
    }
  }
  polys = std::move(cleaned);

  for (;;) {
    if (polys.empty()) {
      PolynomialFactor out(factor.p(), factor.n(), polys);
      if (!out.refines(factor)) throw std::logic_error("refinement lost information");
      return out;
    }
    const std::uint32_t c = static_cast<std::uint32_t>(polys.size());
    RankCertificate cert = rank_gt(polys, growth.eval(c), budget);
    if (cert.kind != RankCertificate::Kind::exhaustive) {
      throw BudgetError("regularization needs exhaustive rank certification",
                        static_cast<double>(budget.max_tuples) + 1,
                        static_cast<double>(budget.max_tuples));
    }
    if (cert.rank_exceeds) {
      PolynomialFactor out(factor.p(), factor.n(), polys);
      if (!out.refines(factor)) throw std::logic_error("refinement lost information");
      return out;
    }

    // Replace one maximal-degree generator of the low-rank combination by
    // the witnessing lower-degree polynomials; the degree multiset drops.
    const auto& witness = *cert.witness;
    int d = -1;
    for (std::size_t j = 0; j < polys.size(); ++j) {
      if (witness.alpha[j] != 0) d = std::max(d, polys[j].degree());
    }
    std::size_t replace = polys.size();
    for (std::size_t j = 0; j < polys.size(); ++j) {
      if (witness.alpha[j] != 0 && polys[j].degree() == d) {
        replace = j;
        break;
      }
    }
    if (replace == polys.size()) throw std::logic_error("witness without support");
    polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(replace));
    for (const auto& q : witness.qs) {
      if (q.is_constant()) continue;
      if (std::find(polys.begin(), polys.end(), q) == polys.end()) polys.push_back(q);
    }
  }
}

double DecomposeConfig::effective_delta() const { return delta > 0 ? delta : epsilon / 2; }

std::uint32_t DecomposeConfig::effective_max_steps() const {
  if (max_steps > 0) return max_steps;
  const double d2 = effective_delta() * effective_delta();
  return static_cast<std::uint32_t>(std::ceil(1.0 / d2)) + 1;
}

void DecomposeConfig::validate(std::uint32_t p) const {
  if (epsilon <= 0 || epsilon > 1) throw ValidationError("epsilon must lie in (0, 1]");
  const double de = effective_delta();
  if (de <= 0 || de > epsilon) throw ValidationError("need 0 < delta <= epsilon");
  if (d >= p) throw ValidationError("factor degree must be below the characteristic");
}

namespace {

struct CorrelationHit {
  Polynomial poly;
  double correlation = 0.0;
};

// Exhaustive search over all polynomials of degree <= d for the one whose
// phase correlates best with g. First maximizer in enumeration order.
CorrelationHit best_phase_correlation(const DenseFunction& g, std::uint32_t d,
                                      std::uint64_t enum_budget) {
  PolynomialEnumerator it(g.p(), g.n(), d, enum_budget);
  CorrelationHit best{Polynomial(g.p(), g.n()), -1.0};
  Polynomial candidate(g.p(), g.n());
  while (it.next(candidate)) {
    const double corr = std::abs(inner_product(g, DenseFunction::phase(candidate)));
    if (corr > best.correlation) {
      best.correlation = corr;
      best.poly = candidate;
    }
  }
  return best;
}

void append_unique_nonconstant(std::vector<Polynomial>& polys, const Polynomial& poly) {
  if (poly.is_constant()) return;
  if (std::find(polys.begin(), polys.end(), poly) == polys.end()) polys.push_back(poly);
}

}  // namespace

DecomposeResult decompose(const DenseFunction& f, const DecomposeConfig& cfg) {
  cfg.validate(f.p());
  const std::uint32_t max_steps = cfg.effective_max_steps();

  std::vector<Polynomial> polys;
  PolynomialFactor factor = PolynomialFactor::trivial(f.p(), f.n());
  std::vector<DecomposeStep> trace;
  std::vector<double> energy_trace;
  DecomposeStatus status = DecomposeStatus::max_steps_reached;

  for (std::uint32_t step = 0;; ++step) {
    DenseFunction structured = conditional_expectation(f, factor);
    DenseFunction residual = f - structured;
    const double norm = gowers_norm(residual, cfg.d + 1, GowersMethod::automatic,
                                    cfg.point_budget);
    if (norm <= cfg.epsilon) {
      status = DecomposeStatus::converged;
      DecomposeResult out{std::move(factor), std::move(structured), std::move(residual),
                          norm,             status,                 std::move(trace),
                          std::move(energy_trace)};
      return out;
    }
    if (step >= max_steps) {
      DecomposeResult out{std::move(factor), std::move(structured), std::move(residual),
                          norm,             status,                 std::move(trace),
                          std::move(energy_trace)};
      return out;
    }

    const double energy = l2_norm_sq(residual);
    CorrelationHit hit = best_phase_correlation(residual, cfg.d, cfg.enum_budget);
    if (hit.correlation <= 0.0) {
      throw std::logic_error("nonzero residual uncorrelated with every phase");
    }
    trace.push_back({energy, hit.correlation, 0, hit.poly});
    energy_trace.push_back(energy);
    append_unique_nonconstant(polys, hit.poly);
    factor = PolynomialFactor(f.p(), f.n(), polys);
    if (cfg.regularize) {
      factor = refine_to_high_rank(factor, cfg.growth,
                                   RankBudget{.enum_budget = cfg.enum_budget});
      polys = factor.polys();
    }
  }
}

MultiDecomposeResult decompose_multi(std::span<const DenseFunction> fs,
                                     const DecomposeConfig& cfg) {
  if (fs.empty()) throw ValidationError("need at least one function");
  for (const auto& f : fs) {
    if (f.p() != fs[0].p() || f.n() != fs[0].n()) {
      throw ValidationError("functions live on different groups");
    }
  }
  cfg.validate(fs[0].p());
  const std::uint32_t m = static_cast<std::uint32_t>(fs.size());
  const std::uint32_t max_steps =
      cfg.max_steps > 0 ? cfg.max_steps : m * (cfg.effective_max_steps() - 1) + 1;

  std::vector<Polynomial> polys;
  PolynomialFactor factor = PolynomialFactor::trivial(fs[0].p(), fs[0].n());
  std::vector<DecomposeStep> trace;
  std::optional<RankCertificate> certificate;
  DecomposeStatus status = DecomposeStatus::max_steps_reached;

  for (std::uint32_t step = 0;; ++step) {
    std::vector<DenseFunction> structured;
    std::vector<DenseFunction> residuals;
    std::vector<double> norms;
    std::size_t worst = fs.size();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      structured.push_back(conditional_expectation(fs[i], factor));
      residuals.push_back(fs[i] - structured.back());
      norms.push_back(gowers_norm(residuals.back(), cfg.d + 1, GowersMethod::automatic,
                                  cfg.point_budget));
      if (worst == fs.size() && norms.back() > cfg.epsilon) worst = i;
    }
    if (worst == fs.size()) status = DecomposeStatus::converged;
    if (worst == fs.size() || step >= max_steps) {
      return MultiDecomposeResult{std::move(factor),    std::move(structured),
                                  std::move(residuals), std::move(norms),
                                  status,               std::move(trace),
                                  std::move(certificate)};
    }

    const double energy = l2_norm_sq(residuals[worst]);
    CorrelationHit hit = best_phase_correlation(residuals[worst], cfg.d, cfg.enum_budget);
    if (hit.correlation <= 0.0) {
      throw std::logic_error("nonzero residual uncorrelated with every phase");
    }
    trace.push_back({energy, hit.correlation, worst, hit.poly});

    // The shared factor keeps homogeneous generators: split the find into
    // its homogeneous parts and add every nonconstant one.
    for (std::uint32_t l = 1; l <= static_cast<std::uint32_t>(std::max(hit.poly.degree(), 0));
         ++l) {
      Polynomial part = hit.poly.homogeneous_part(l);
      if (!part.is_zero()) append_unique_nonconstant(polys, part);
    }
    factor = PolynomialFactor(fs[0].p(), fs[0].n(), polys);
    if (cfg.regularize) {
      factor = refine_to_high_rank(factor, cfg.growth,
                                   RankBudget{.enum_budget = cfg.enum_budget});
      polys = factor.polys();
      certificate = rank_gt(polys, cfg.growth.eval(static_cast<std::uint32_t>(polys.size())),
                            RankBudget{.enum_budget = cfg.enum_budget});
    }
  }
}

}  // namespace hofa
