#pragma once

// JSON schemas: exact rationals as "p/q" strings, floating values as decimal
// strings with 17 significant digits.

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "freemoments/cumulants.hpp"
#include "freemoments/levy.hpp"
#include "freemoments/measures.hpp"
#include "freemoments/nc_lattice.hpp"
#include "freemoments/rmt.hpp"
#include "freemoments/rtransform.hpp"
#include "freemoments/series.hpp"
#include "freemoments/suite.hpp"

namespace freemoments::io {

using json = nlohmann::ordered_json;

/// Accepts "p/q", decimal strings and JSON integers.
Rational rational_from_json(const json& j);
json to_json(const Rational& q);
std::vector<Rational> rationals_from_json(const json& j);
json to_json(const std::vector<Rational>& v);

json real_to_json(double x);
json complex_to_json(std::complex<double> z);
double real_from_json(const json& j);

Blocks blocks_from_json(const json& j);
json to_json(const Blocks& blocks);

/// {"kind":"discrete","atoms":[[t,w],...]},
/// {"kind":"density","name":"semicircle","params":{...},"mass":...}, or
/// {"kind":"mixed","atoms":[...],"density":{"name":...,"params":...,"mass":...}}.
Measure measure_from_json(const json& j);
json to_json(const Measure& mu);

/// {"kind":"gue"|"wishart"|"deterministic"|"free_sum", "rate", "measure",
/// "parts", "scale", "shift"} plus top-level "dim", "trials", "seed", "threads".
Ensemble ensemble_from_json(const json& j);
json to_json(const Ensemble& e);
MatrixEnsembleSpec ensemble_spec_from_json(const json& j);
json to_json(const MatrixEnsembleSpec& spec);

json to_json(const SupportBound& b);
json to_json(const MomentEstimate& est);
json to_json(const PredictionReport& r);
json to_json(const MomentTransferReport& r);
json to_json(const TaylorEstimate& e);
json to_json(const RayTransformSamples& s);
json to_json(const TaylorCheckReport& r);
json to_json(const SuiteReport& r, bool timings);

/// {"error": code, "detail": message}
json error_json(std::string_view code, const std::string& detail);

}  // namespace freemoments::io
