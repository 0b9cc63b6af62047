#include "hofa/codec.hpp"

#include <fstream>

#include "hofa/errors.hpp"

namespace hofa {

namespace {

std::uint32_t get_u32(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw ValidationError(std::string("missing or bad field \"") + key + "\"");
  }
  return j[key].get<std::uint32_t>();
}

}  // namespace

json system_to_json(const LinearSystem& system) {
  json forms = json::array();
  for (const LinearForm& f : system.forms()) forms.push_back(f.coeffs());
  return json{{"p", system.p()}, {"k", system.k()}, {"forms", forms}};
}

LinearSystem system_from_json(const json& j) {
  const std::uint32_t p = get_u32(j, "p");
  const std::uint32_t k = get_u32(j, "k");
  if (!j.contains("forms") || !j["forms"].is_array() || j["forms"].empty()) {
    throw ValidationError("system needs a nonempty \"forms\" array");
  }
  std::vector<LinearForm> forms;
  for (const auto& row : j["forms"]) {
    std::vector<std::uint32_t> coeffs = row.get<std::vector<std::uint32_t>>();
    if (coeffs.size() != k) throw ValidationError("form arity disagrees with k");
    forms.emplace_back(p, std::move(coeffs));
  }
  return LinearSystem(std::move(forms));
}

json polynomial_to_json(const Polynomial& poly) {
  json terms = json::array();
  for (const auto& [m, c] : poly.terms()) {
    terms.push_back(json{{"exponents", std::vector<std::uint32_t>(m.begin(), m.end())},
                         {"coeff", c}});
  }
  return json{{"terms", terms}};
}

Polynomial polynomial_from_json(const json& j, std::uint32_t p, std::uint32_t n) {
  if (!j.contains("terms") || !j["terms"].is_array()) {
    throw ValidationError("polynomial needs a \"terms\" array");
  }
  Polynomial poly(p, n);
  for (const auto& term : j["terms"]) {
    const auto exps = term.at("exponents").get<std::vector<std::uint32_t>>();
    if (exps.size() != n) throw ValidationError("exponent tuple arity disagrees with n");
    poly.add_term(exps, term.at("coeff").get<std::uint32_t>());
  }
  return poly;
}

json function_to_json(const DenseFunction& f) {
  json values = json::array();
  for (const cplx& v : f.values()) values.push_back(json::array({v.real(), v.imag()}));
  return json{{"p", f.p()}, {"n", f.n()}, {"values", values}};
}

DenseFunction function_from_json(const json& j) {
  const std::uint32_t p = get_u32(j, "p");
  const std::uint32_t n = get_u32(j, "n");
  if (j.contains("type")) {
    const std::string type = j["type"].get<std::string>();
    if (type == "polynomial_phase") {
      return DenseFunction::phase(polynomial_from_json(j.at("poly"), p, n));
    }
    if (type == "indicator") {
      const auto points = j.at("set").get<std::vector<std::uint64_t>>();
      return DenseFunction::indicator(p, n, points);
    }
    if (type == "random_unimodular") {
      return DenseFunction::random_unimodular(p, n, j.at("seed").get<std::uint64_t>());
    }
    if (type == "random_disk") {
      return DenseFunction::random_disk(p, n, j.at("seed").get<std::uint64_t>());
    }
    throw ValidationError("unknown function generator type \"" + type + "\"");
  }
  if (!j.contains("values") || !j["values"].is_array()) {
    throw ValidationError("function needs \"values\" or a generator \"type\"");
  }
  std::vector<cplx> values;
  for (const auto& v : j["values"]) {
    if (v.is_number()) {
      values.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2) {
      values.emplace_back(v[0].get<double>(), v[1].get<double>());
    } else {
      throw ValidationError("function values must be numbers or [re, im] pairs");
    }
  }
  return DenseFunction(p, n, std::move(values));
}

json spectrum_to_json(const Spectrum& spectrum) {
  json values = json::array();
  for (const cplx& v : spectrum.coeffs()) values.push_back(json::array({v.real(), v.imag()}));
  return json{{"p", spectrum.p()}, {"n", spectrum.n()}, {"values", values}};
}

json complexity_report_to_json(const ComplexityReport& report) {
  json j{{"cs_complexity", report.cs},
         {"true_complexity", report.true_d},
         {"true_complexity_min_d1", report.true_d_min1},
         {"true_complexity_is_zero", report.true_d_is_zero},
         {"cs_upper_bound_only", report.cs_upper_bound_only},
         {"cs_exceeds_p", report.cs_exceeds_p},
         {"homogeneous", report.homogeneous_witness.has_value()}};
  if (report.homogeneous_witness) j["witness"] = *report.homogeneous_witness;
  json partitions = json::array();
  for (const auto& per_form : report.witness_partitions) partitions.push_back(per_form);
  j["witness_partitions"] = partitions;
  json trace = json::array();
  for (const auto& [d, rank] : report.rank_trace) {
    trace.push_back(json{{"d", d}, {"rank", rank}});
  }
  j["tensor_rank_trace"] = trace;
  return j;
}

json factor_to_json(const PolynomialFactor& factor) {
  json polys = json::array();
  for (const Polynomial& poly : factor.polys()) polys.push_back(polynomial_to_json(poly));
  return json{{"p", factor.p()},
              {"n", factor.n()},
              {"complexity", factor.complexity()},
              {"degree", factor.degree()},
              {"num_atoms", factor.num_atoms()},
              {"polys", polys}};
}

json certificate_to_json(const RankCertificate& cert) {
  const char* kind = cert.kind == RankCertificate::Kind::exhaustive  ? "exhaustive"
                     : cert.kind == RankCertificate::Kind::bias_bound ? "bias-bound"
                                                                      : "none";
  json j{{"kind", kind}, {"r", cert.r}};
  if (cert.kind == RankCertificate::Kind::exhaustive) {
    j["rank_exceeds"] = cert.rank_exceeds;
    if (cert.witness) {
      json qs = json::array();
      for (const auto& q : cert.witness->qs) qs.push_back(polynomial_to_json(q));
      j["witness"] = json{{"alpha", cert.witness->alpha}, {"qs", qs}};
    }
  } else if (cert.kind == RankCertificate::Kind::bias_bound) {
    j["measured_bias"] = cert.measured_bias;
    j["configured_bound"] = cert.configured_bound;
  }
  return j;
}

json decompose_result_to_json(const DecomposeResult& result) {
  json factor = json::array();
  for (const Polynomial& poly : result.factor.polys()) {
    factor.push_back(polynomial_to_json(poly));
  }
  json trace = json::array();
  for (const auto& step : result.trace) {
    trace.push_back(json{{"energy", step.energy_before},
                         {"correlation", step.correlation},
                         {"poly", polynomial_to_json(step.chosen)}});
  }
  json j{{"factor", factor},
         {"energy_trace", result.energy_trace},
         {"steps", trace},
         {"residual_norm", result.residual_norm},
         {"status", result.status == DecomposeStatus::converged ? "converged"
                                                                : "max_steps_reached"}};
  j["rank_certificate"] =
      result.certificate ? certificate_to_json(*result.certificate) : json(nullptr);
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("bad JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace hofa
