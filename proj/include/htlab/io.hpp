#pragma once

// JSON descriptors and reports.
//
// Scalars are accepted as an integer, a decimal string "a" or "a/b", or an
// object {"pi_coeffs": [c_0, ..., c_{e-1}], "p_shift": s, "prec": k} meaning
// (sum c_i pi^i) / p^s known modulo pi^k. Chart elements are a scalar or
// {"terms": [{"mono": [..], "coeff": scalar}, ...]}. Output always uses the
// object forms, which parse back to the same value.

#include <cstdint>
#include <string>

#include "htlab/cohomology.hpp"
#include "htlab/delta_log.hpp"
#include "htlab/sen.hpp"
#include "json.hpp"

namespace htlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// {"p", "E", "f", "precision", "cutoffs": {"D", "T", "Dy", "n_max", "s_max"}}
BaseConfig config_from_json(const Json& j);
Json config_to_json(const BaseConfig& cfg);

KElem scalar_from_json(const OkRing& ring, const Json& j);
Json scalar_to_json(const KElem& x);
ChartElem chart_from_json(const ChartCtx& ctx, const Json& j);
Json chart_to_json(const ChartElem& x);
ChartMatrix matrix_from_json(const ChartCtx& ctx, const Json& j, std::size_t rows, std::size_t cols);
Json matrix_to_json(const ChartMatrix& m);

// {"flavor", "twist", "rank", "base": {"mode": "point"} | {"mode": "chart", "d", "r"},
//  "theta": [matrix, ...], "phi": matrix, "integral"}
HiggsData higgs_from_json(const BaseConfig& cfg, const Json& j);
Json higgs_to_json(const HiggsData& h);

// {"n": [..], "c", "chi"}
GroupElt group_from_json(const Json& j, Int modulus);
Json group_to_json(const GroupElt& s);

Json formal_to_json(const FormalC& x);
Json formal_matrix_to_json(const FormalMatrix& m);
// A pd element as a list of {"mono": [exponents by slot], "coeff": chart}.
Json pd_to_json(const PdElement& x);

Json residual_to_json(const Residual& r);
Json certificate_to_json(const HiggsCertificate& c);
Json stratification_to_json(const Stratification& s);
Json cohomology_to_json(const CohomologyReport& r);
Json factorization_to_json(const Factorization& f);

// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace htlab
