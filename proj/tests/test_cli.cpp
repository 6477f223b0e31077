#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spherex/cli.hpp"
#include "spherex/poly_io.hpp"

using namespace spherex;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "spherex_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_json(const std::string& name, const std::string& text) {
  const fs::path path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string monomial_file() { return write_json("monomial.json", R"({"n":4,"d":4,"terms":[{"alpha":[1,1,1,1],"coeff":1.0}]})"); }

}  // namespace

TEST_CASE("optimize on the multilinear monomial") {
  const auto r = call({"optimize", "--poly", monomial_file(), "--q", "4", "--method", "nnc"});
  REQUIRE(r.code == cli::ok);
  const Json j = r.json();
  CHECK(j["tool"] == "spherex");
  CHECK(j["version"] == cli::kVersion);
  CHECK(j["flags"]["q"] == 4);
  CHECK(j["flags"]["method"] == "nnc");
  const double value = j["value"];
  CHECK(value <= 1.0 / 16 + 1e-12);
  CHECK(value >= 1.0 / 16 / 32);
  CHECK(j["upper"].get<double>() >= 1.0 / 16);
  CHECK(j["candidates_evaluated"] == 8);
  CHECK(j["x_best"].size() == 4);
  CHECK(j["ratio"].get<double>() == doctest::Approx(j["upper"].get<double>() / value));
}

TEST_CASE("optimize writes the report to --out") {
  const std::string path = (scratch() / "opt.json").string();
  const auto r = call({"optimize", "--poly", monomial_file(), "--q", "4", "--out", path});
  REQUIRE(r.code == cli::ok);
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  CHECK(file.str() == r.out);
}

TEST_CASE("optimize errors and the zero polynomial") {
  CHECK(call({"optimize", "--poly", monomial_file(), "--q", "3"}).code == cli::invalid);
  CHECK(call({"optimize", "--poly", monomial_file(), "--q", "4", "--method", "bogus"}).code == cli::invalid);
  CHECK(call({"optimize", "--poly", (scratch() / "missing.json").string(), "--q", "4"}).code == cli::invalid);
  CHECK(call({"optimize", "--q", "4"}).code == cli::invalid);
  CHECK(call({"optimize", "--poly", monomial_file(), "--q", "8", "--method", "general", "--cap", "10"}).code == cli::capacity);

  const auto zero = write_json("zero.json", R"({"n":3,"d":4,"terms":[]})");
  const auto r = call({"optimize", "--poly", zero, "--q", "4"});
  REQUIRE(r.code == cli::ok);
  CHECK(r.json()["value"] == 0.0);
  CHECK(r.json()["ratio"].is_null());
}

TEST_CASE("bound estimates and applicability") {
  const auto r = call({"bound", "--poly", monomial_file()});
  REQUIRE(r.code == cli::ok);
  const Json e = r.json()["estimates"];
  CHECK(e["gershgorin"]["value"].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(e["rowsum"]["value"].get<double>() == doctest::Approx(1.0 / 12).epsilon(1e-12));
  CHECK(e["frobenius"]["value"].get<double>() == doctest::Approx(std::sqrt(1.0 / 24)).epsilon(1e-12));
  CHECK(e["eig"]["value"].get<double>() >= 1.0 / 16);

  const auto zero = write_json("zero.json", R"({"n":3,"d":4,"terms":[]})");
  const Json z = call({"bound", "--poly", zero}).json()["estimates"];
  for (const auto& [name, est] : z.items()) {
    CHECK(est["applicable"] == true);
    CHECK(est["value"] == 0.0);
  }

  const auto square = write_json("square.json", R"({"n":2,"d":4,"terms":[{"alpha":[2,2],"coeff":1.0}]})");
  const auto g = call({"bound", "--poly", square, "--method", "gershgorin"});
  REQUIRE(g.code == cli::ok);
  const Json ge = g.json()["estimates"];
  CHECK(ge.size() == 1);
  CHECK(ge["gershgorin"]["applicable"] == false);
  CHECK(ge["gershgorin"]["value"].is_null());

  const auto powered = call({"bound", "--poly", square, "--q", "8"});
  REQUIRE(powered.code == cli::ok);
  CHECK(powered.json()["estimates"]["powered"]["value"].get<double>() >= 0.25 - 1e-9);
  CHECK(call({"bound", "--poly", square, "--method", "nope"}).code == cli::invalid);
}

TEST_CASE("clique instances") {
  const std::string prefix = (scratch() / "k4").string();
  const auto r = call({"clique-instance", "--n", "4", "--p", "1", "--seed", "1", "--restarts", "20", "--prefix", prefix});
  REQUIRE(r.code == cli::ok);
  const Json j = r.json();
  CHECK(std::abs(j["dual_value"].get<double>() - 0.5) <= 1e-9);
  CHECK(std::abs(j["lambda_min"].get<double>() + 2.0) <= 1e-9);
  CHECK(j["checks"]["ok"] == true);
  CHECK(fs::exists(prefix + ".edges"));
  CHECK(fs::exists(prefix + ".cert.txt"));
  CHECK(load_poly(prefix + ".poly.json").size() == 1);
  std::ifstream gap(prefix + ".gap.json");
  CHECK(Json::parse(gap) == j);

  CHECK(call({"clique-instance", "--n", "5", "--p", "0", "--prefix", prefix}).code == cli::degenerate);
  CHECK(call({"clique-instance", "--n", "5", "--p", "1.5", "--prefix", prefix}).code == cli::invalid);
  CHECK(call({"clique-instance", "--n", "5", "--p", "half", "--prefix", prefix}).code == cli::invalid);

  const auto big = call({"clique-instance", "--n", "40", "--p", "auto", "--seed", "1", "--restarts", "5", "--prefix", (scratch() / "g40").string()});
  REQUIRE(big.code == cli::ok);
  CHECK(big.json()["checks"]["ok"] == true);
  CHECK(big.json()["p"].get<double>() == doctest::Approx(std::pow(40.0, -1.0 / 3)));
}

TEST_CASE("tetris-verify") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"tetris-verify", "--n", "2", "--q", "4", "--seed", "3"},
           {"tetris-verify", "--n", "1", "--q", "8"},
           {"tetris-verify", "--n", "2", "--q", "8", "--mode", "exact", "--seed", "5"},
           {"tetris-verify", "--n", "2", "--q", "8", "--mode", "float"}}) {
    const auto r = call(args);
    REQUIRE(r.code == cli::ok);
    CHECK(r.json()["pass"] == true);
  }
  CHECK(call({"tetris-verify", "--n", "2", "--q", "4"}).json()["max_abs_error"] == 0.0);
  CHECK(call({"tetris-verify", "--n", "3", "--q", "8", "--cap", "100"}).code == cli::capacity);
  CHECK(call({"tetris-verify", "--q", "6"}).code == cli::invalid);
  CHECK(call({"tetris-verify", "--mode", "approx"}).code == cli::invalid);
}

TEST_CASE("capacity cap from the environment") {
  ::setenv("SPHEREX_CAP", "100", 1);
  const int capped = call({"tetris-verify", "--n", "3", "--q", "8"}).code;
  ::setenv("SPHEREX_CAP", "zero", 1);
  const int malformed = call({"tetris-verify", "--n", "1", "--q", "4"}).code;
  ::unsetenv("SPHEREX_CAP");
  CHECK(capped == cli::capacity);
  CHECK(malformed == cli::invalid);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == cli::invalid);
  CHECK(call({"frobnicate"}).code == cli::invalid);
  CHECK(call({"bound", "--poly", monomial_file(), "--unknown"}).code == cli::invalid);
  const auto help = call({"--help"});
  CHECK(help.code == cli::ok);
  CHECK(help.out.find("optimize") != std::string::npos);
}

TEST_CASE("identical flags give byte-identical reports") {
  const auto general = write_json("general.json",
                                  R"({"n":3,"d":4,"terms":[{"alpha":[4,0,0],"coeff":1.5},{"alpha":[2,1,1],"coeff":-2.0},{"alpha":[0,2,2],"coeff":0.7},{"alpha":[1,3,0],"coeff":-0.4}]})");
  const std::string prefix = (scratch() / "det").string();
  const std::vector<std::vector<std::string>> commands{
      {"optimize", "--poly", general, "--q", "8", "--method", "general", "--c-grid", "5"},
      {"optimize", "--poly", monomial_file(), "--q", "4", "--method", "sparse"},
      {"bound", "--poly", general, "--q", "8"},
      {"clique-instance", "--n", "12", "--p", "0.8", "--seed", "4", "--restarts", "10", "--prefix", prefix},
      {"tetris-verify", "--n", "2", "--q", "8", "--seed", "9", "--mode", "float"},
  };
  for (const auto& args : commands) {
    const auto first = call(args);
    const auto second = call(args);
    CHECK(first.code == second.code);
    CHECK(first.out == second.out);
  }
}
