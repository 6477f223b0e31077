#pragma once

#include <string>

#include <json.hpp>

#include "spherex/poly.hpp"

namespace spherex {

using Json = nlohmann::ordered_json;

/// {"n": int, "d": int, "terms": [{"alpha": [...], "coeff": float}, ...]}.
/// Duplicate alphas are summed; every alpha must have length n and sum d.
HomogPoly poly_from_json(const Json& j);
Json poly_to_json(const HomogPoly& f);

HomogPoly load_poly(const std::string& path);
void save_poly(const HomogPoly& f, const std::string& path);

}  // namespace spherex
