#pragma once

#include <json.hpp>

#include "phigamma/herr.hpp"
#include "phigamma/pairings.hpp"

namespace phigamma {

using json = nlohmann::json;

// {"lo", "coeffs"}: coefficients of X^lo, X^lo+1, ... as residues in [0, p^N).
// A series with precision cap H below the ambient one also carries "cap": H;
// the coefficient of X^b is then meaningful mod p^min(N, H-b).
json to_json(const Series& f);
Series series_from_json(const CtxPtr& c, const json& j);

json to_json(const Character& d);
Character character_from_json(u64 p, int N, const json& j);

json to_json(const Mat& m);
json to_json(const ModElem& x);
ModElem elem_from_json(const ModulePtr& D, const json& j);
json to_json(const Measure& m);
Measure measure_from_json(const CtxPtr& c, const json& j);
json to_json(const Cochain& c);

// Module descriptor: {"p", "N", "window", "rank", "kind", "phi_matrix",
// "characters", "U", "gamma_table"}. Parsing rebuilds the module from its
// characters and U, then validates the stated matrices, etale-ness and the
// commutation relation; ParseError / ValidationError on failure.
json describe_module(const ModulePtr& D);
ModulePtr module_from_json(const json& j);
CtxPtr ctx_from_json(const json& j);

}  // namespace phigamma
