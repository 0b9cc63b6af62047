#pragma once

// JSON codecs for the on-disk formats:
//
//   system:     {"p": int, "k": int, "forms": [[int, ...], ...]}
//   function:   {"p": int, "n": int, "values": [[re, im], ...]}   (idx order)
//            or {"p", "n", "type": "polynomial_phase", "poly": {...}}
//            or {"p", "n", "type": "indicator", "set": [indices]}
//            or {"p", "n", "type": "random_unimodular"|"random_disk", "seed": int}
//   polynomial: {"terms": [{"exponents": [i_1..i_n], "coeff": c}, ...]}
//               terms listed in the canonical monomial order
//
// plus serializers for reports, factors, and certificates.

#include <json.hpp>

#include "hofa/analytic.hpp"
#include "hofa/factors.hpp"
#include "hofa/linear_system.hpp"
#include "hofa/polynomial.hpp"

namespace hofa {

using nlohmann::json;

json system_to_json(const LinearSystem& system);
LinearSystem system_from_json(const json& j);

json polynomial_to_json(const Polynomial& poly);
Polynomial polynomial_from_json(const json& j, std::uint32_t p, std::uint32_t n);

json function_to_json(const DenseFunction& f);
DenseFunction function_from_json(const json& j);

json spectrum_to_json(const Spectrum& spectrum);

json complexity_report_to_json(const ComplexityReport& report);
json factor_to_json(const PolynomialFactor& factor);
json certificate_to_json(const RankCertificate& cert);
json decompose_result_to_json(const DecomposeResult& result);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace hofa
