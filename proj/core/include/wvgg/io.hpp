#pragma once

#include <nlohmann/json.hpp>

#include "wvgg/geom_quantities.hpp"
#include "wvgg/sd_engine.hpp"
#include "wvgg/thorin_measures.hpp"

namespace wvgg {

using Json = nlohmann::ordered_json;

// Malformed documents raise DomainError naming the offending key.

// {"n": int, "components": [...]} with atom, ray and curve entries, or a named
// family {"family": "alpha_gamma" | "beta2" | "beta2_axes" | "circle", ...}.
ThorinMeasure measure_from_json(const Json& j);
Json measure_to_json(const ThorinMeasure& u);

// {"n"?, "d"?, "mu", "sigma", "measure"}; d defaults to 0.
WvggParams params_from_json(const Json& j);
Json params_to_json(const WvggParams& p);

Json report_to_json(const ClassificationReport& r);
Json subclass_to_json(const SubclassTag& t);
Json infimum_to_json(const InfimumEstimate& e);

// {"c", "d"?, "alpha", "mu", "sigma", "axis"?: [density | null, ...]}.
CounterexampleInput counterexample_input_from_json(const Json& j);
Json counterexample_to_json(const Counterexample& c);

Vector vector_from_json(const Json& j, const char* what);
Json vector_to_json(const Vector& v);
CovMatrix matrix_from_json(const Json& j, const char* what);

}  // namespace wvgg
