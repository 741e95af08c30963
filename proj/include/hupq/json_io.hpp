#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hupq/coxeter.hpp"
#include "hupq/cramer_wold.hpp"
#include "hupq/decide.hpp"
#include "hupq/measure.hpp"
#include "hupq/quadric.hpp"

namespace hupq {

//! Insertion-ordered documents so identical data always serializes to
//! identical bytes.
using Json = nlohmann::ordered_json;

//! Unreadable file, syntactically invalid JSON, or a document whose shape
//! does not match the wire format. Distinct from the value-level
//! invalid_argument errors thrown by the engine types.
struct JsonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load_json_file(const std::string& path);

Vec vec_from_json(const Json& j);
Mat mat_from_json(const Json& j);

//! {"B": [[...]], "v": [...], "rho": r}, row-major.
QuadricSurface surface_from_json(const Json& j);
//! {"u": [...], "s": s}.
Hyperplane hyperplane_from_json(const Json& j);
//! A single hyperplane object or an array of them.
std::vector<Hyperplane> hyperplanes_from_json(const Json& j);
//! {"atoms": [[...]], "weights": [{"re": a, "im": b}]}; bare numbers are
//! accepted as real weights on input.
AtomicMeasure measure_from_json(const Json& j);

Json to_json(const QuadricSurface& S);
Json to_json(const Hyperplane& H);
Json to_json(const AtomicMeasure& mu);
Json to_json(const Decision& dec);
Json to_json(const VanishReport& rep);
Json to_json(const CoxeterReport& rep);
//! Recovered: the measure document itself. Ambiguous / Infeasible:
//! {"verdict": ..., "kernel": measure?} with notes.
Json to_json(const Reconstruction& rec);

}  // namespace hupq
