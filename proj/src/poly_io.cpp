#include "spherex/poly_io.hpp"

#include <fstream>
#include <sstream>

namespace spherex {

HomogPoly poly_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InvalidArgument("polynomial JSON must be an object");
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    if (n < 1) throw InvalidArgument("\"n\" must be >= 1");
    if (d < 1) throw InvalidArgument("\"d\" must be >= 1");
    HomogPoly f(static_cast<std::size_t>(n), d);
    for (const auto& term : j.at("terms")) {
      const auto exps = term.at("alpha").get<std::vector<int>>();
      if (exps.size() != static_cast<std::size_t>(n)) {
        throw InvalidArgument("alpha of length " + std::to_string(exps.size()) + " in a polynomial with n = " + std::to_string(n));
      }
      const MultiIndex alpha(exps);
      if (alpha.degree() != d) throw InvalidArgument("alpha " + alpha.to_string() + " does not sum to d = " + std::to_string(d));
      f.add_term(alpha, term.at("coeff").get<double>());
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed polynomial JSON: ") + e.what());
  }
}

Json poly_to_json(const HomogPoly& f) {
  Json terms = Json::array();
  for (const auto& [alpha, c] : f.terms()) {
    terms.push_back({{"alpha", std::vector<int>(alpha.exponents().begin(), alpha.exponents().end())}, {"coeff", c}});
  }
  return {{"n", f.n()}, {"d", f.degree()}, {"terms", terms}};
}

HomogPoly load_poly(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open polynomial file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
  return poly_from_json(j);
}

void save_poly(const HomogPoly& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << poly_to_json(f).dump(2) << "\n";
}

}  // namespace spherex
