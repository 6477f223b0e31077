#include "spherex/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "spherex/lowerbound.hpp"
#include "spherex/poly_io.hpp"
#include "spherex/rounding.hpp"
#include "spherex/spectral.hpp"
#include "spherex/tetris.hpp"

namespace spherex::cli {

namespace {

Json vector_json(const VecD& x) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  return out;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json envelope(const std::string& command, Json flags) {
  Json out;
  out["tool"] = "spherex";
  out["version"] = kVersion;
  out["command"] = command;
  out["flags"] = std::move(flags);
  return out;
}

Limits limits_with_cap(std::optional<std::size_t> cap) {
  Limits limits = Limits::defaults();
  if (cap) {
    if (*cap == 0) throw InvalidArgument("--cap must be positive");
    limits.max_entries = *cap;
  }
  return limits;
}

Json cap_json(std::optional<std::size_t> cap) { return cap ? Json(*cap) : Json(nullptr); }

void emit(const Json& report, std::ostream& out, const std::optional<std::string>& path) {
  const std::string text = report.dump(2) + "\n";
  if (path) {
    std::ofstream file(*path);
    if (!file) throw InvalidArgument("cannot write '" + *path + "'");
    file << text;
  }
  out << text;
}

Json index_json(const MultiIndex& a) {
  const auto e = a.exponents();
  return Json(std::vector<int>(e.begin(), e.end()));
}

Json provenance_json(const Provenance& p) {
  Json out;
  out["kind"] = p.kind;
  if (p.kind == "exact") return out;
  out["alpha"] = index_json(p.alpha);
  if (p.kind == "general" || p.kind == "nnc") out["gamma"] = index_json(p.gamma);
  if (p.kind == "general") {
    out["xi"] = p.xi;
    out["zeta"] = p.zeta;
    out["mask"] = p.mask;
    out["c1"] = p.c1;
    out["c2"] = p.c2;
  }
  if (p.kind == "monomial") out["signs"] = p.signs;
  return out;
}

// --- optimize ---------------------------------------------------------------

struct OptimizeArgs {
  std::string poly;
  int q = 0;
  std::string method = "auto";
  int c_grid = GeneralOptions{}.c_grid;
  std::optional<std::size_t> cap;
  std::optional<std::string> out;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out, std::ostream& err) {
  const HomogPoly f = load_poly(a.poly);
  GeneralOptions opts;
  if (a.c_grid < 1) throw InvalidArgument("--c-grid must be >= 1");
  opts.c_grid = a.c_grid;
  const OptReport r = optimize(f, a.q, parse_method(a.method), opts, limits_with_cap(a.cap));

  Json flags;
  flags["poly"] = a.poly;
  flags["q"] = a.q;
  flags["method"] = a.method;
  flags["c_grid"] = a.c_grid;
  flags["cap"] = cap_json(a.cap);
  flags["out"] = a.out ? Json(*a.out) : Json(nullptr);
  Json report = envelope("optimize", flags);
  report["x_best"] = vector_json(r.x_best);
  report["value"] = r.value;
  report["upper"] = r.upper ? Json(r.upper->value) : Json(nullptr);
  report["upper_method"] = r.upper ? Json(to_string(r.upper->method)) : Json(nullptr);
  report["ratio"] = optional_json(r.ratio);
  report["method"] = r.method;
  report["q"] = r.q;
  report["candidates_evaluated"] = r.candidates_evaluated;
  report["provenance"] = provenance_json(r.provenance);
  emit(report, out, a.out);
  err << "optimize: value " << r.value << " from " << r.candidates_evaluated << " candidates (" << r.method << ")\n";
  return ok;
}

// --- bound ------------------------------------------------------------------

struct BoundArgs {
  std::string poly;
  std::optional<int> q;
  std::optional<std::string> method;
  std::optional<std::size_t> cap;
};

int cmd_bound(const BoundArgs& a, std::ostream& out, std::ostream& err) {
  const HomogPoly f = load_poly(a.poly);
  const Limits limits = limits_with_cap(a.cap);
  const std::vector<std::pair<std::string, std::function<UpperEstimate()>>> all{
      {"gershgorin", [&] { return gershgorin_bound(f); }},
      {"rowsum", [&] { return rowsum_bound(f); }},
      {"frobenius", [&] { return frobenius_sparse_bound(f); }},
      {"eig", [&] { return eig_bound(f, limits); }},
  };
  if (a.method) {
    bool known = false;
    for (const auto& [name, _] : all) known = known || name == *a.method;
    if (!known) throw InvalidArgument("unknown bound method '" + *a.method + "' (gershgorin|rowsum|frobenius|eig)");
  }

  Json estimates;
  for (const auto& [name, compute] : all) {
    if (a.method && name != *a.method) continue;
    Json e;
    try {
      const UpperEstimate u = compute();
      e["applicable"] = true;
      e["value"] = u.value;
    } catch (const InvalidArgument& ex) {
      e["applicable"] = false;
      e["value"] = nullptr;
      e["reason"] = ex.what();
    }
    estimates[name] = e;
  }
  if (a.q) {
    const PolyClass cls = f.is_nonnegative() ? PolyClass::nnc : PolyClass::general;
    const UpperEstimate u = powered_upper_estimate(f, *a.q, cls, limits);
    Json e;
    e["applicable"] = true;
    e["value"] = u.value;
    e["class"] = to_string(cls);
    estimates["powered"] = e;
  }

  Json flags;
  flags["poly"] = a.poly;
  flags["q"] = a.q ? Json(*a.q) : Json(nullptr);
  flags["method"] = a.method ? Json(*a.method) : Json(nullptr);
  flags["cap"] = cap_json(a.cap);
  Json report = envelope("bound", flags);
  report["estimates"] = estimates;
  emit(report, out, std::nullopt);
  err << "bound: " << estimates.size() << " estimates\n";
  return ok;
}

// --- clique-instance --------------------------------------------------------

struct CliqueArgs {
  std::size_t n = 0;
  std::string p = "auto";
  std::uint64_t seed = 0;
  int restarts = 200;
  std::string prefix = "clique";
};

double parse_probability(const std::string& text, std::size_t n) {
  if (text == "auto") return std::pow(static_cast<double>(n), -1.0 / 3.0);
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(p >= 0.0 && p <= 1.0)) throw InvalidArgument("--p must be a probability in [0, 1] or 'auto', got '" + text + "'");
  return p;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path);
  if (!file) throw InvalidArgument("cannot write '" + path + "'");
  body(file);
}

int cmd_clique_instance(const CliqueArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 1) throw InvalidArgument("--n must be >= 1");
  if (a.restarts < 1) throw InvalidArgument("--restarts must be >= 1");
  const double p = parse_probability(a.p, a.n);
  const GapReport g = gap_report(a.n, p, a.seed, a.restarts);
  const auto& cert = g.certificate;

  const std::string graph_path = a.prefix + ".edges";
  const std::string poly_path = a.prefix + ".poly.json";
  const std::string cert_path = a.prefix + ".cert.txt";
  const std::string gap_path = a.prefix + ".gap.json";

  Json flags;
  flags["n"] = a.n;
  flags["p"] = a.p;
  flags["seed"] = a.seed;
  flags["restarts"] = a.restarts;
  flags["prefix"] = a.prefix;
  Json report = envelope("clique-instance", flags);
  report["p"] = p;
  report["edges"] = g.graph.edge_count();
  report["cliques"] = cert.clique_count;
  report["lambda_min"] = cert.lambda_min;
  report["dual_value"] = cert.dual_value;
  Json checks;
  checks["sos_symmetric"] = cert.checks.sos_symmetric;
  checks["trace"] = cert.checks.trace;
  checks["trace_ok"] = cert.checks.trace_ok;
  checks["min_eig"] = cert.checks.min_eig;
  checks["psd_ok"] = cert.checks.psd_ok;
  checks["dual_ok"] = cert.checks.dual_ok;
  checks["below_upper"] = cert.checks.below_upper;
  checks["ok"] = cert.checks.ok();
  report["checks"] = checks;
  Json oracle;
  oracle["value"] = g.oracle.value;
  oracle["restarts"] = g.oracle.restarts;
  oracle["unconverged"] = g.oracle.unconverged;
  oracle["seed"] = g.oracle.seed;
  report["oracle"] = oracle;
  report["ratio"] = g.ratio;
  report["normalized_ratio"] = g.normalized_ratio;
  Json files;
  files["graph"] = graph_path;
  files["poly"] = poly_path;
  files["certificate"] = cert_path;
  files["gap"] = gap_path;
  report["files"] = files;

  write_file(graph_path, [&](std::ostream& os) { write_edge_list(os, g.graph); });
  save_poly(clique_poly(g.graph), poly_path);
  write_file(cert_path, [&](std::ostream& os) { write_pair_matrix(os, cert.moment); });
  emit(report, out, gap_path);
  err << "clique-instance: " << cert.clique_count << " 4-cliques, dual " << cert.dual_value << ", ratio " << g.ratio
      << (cert.checks.ok() ? "" : " (certificate checks FAILED)") << "\n";
  return cert.checks.ok() ? ok : failure;
}

// --- tetris-verify ----------------------------------------------------------

struct TetrisArgs {
  std::size_t n = 2;
  int q = 8;
  std::uint64_t seed = 0;
  std::string mode = "exact";
  std::optional<std::size_t> cap;
};

int cmd_tetris_verify(const TetrisArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 1) throw InvalidArgument("--n must be >= 1");
  if (a.mode != "exact" && a.mode != "float") throw InvalidArgument("--mode must be exact or float");
  const Limits limits = limits_with_cap(a.cap);
  std::mt19937_64 rng(a.seed);
  const TetrisReport r = a.mode == "exact" ? verify_tetris(sos_matrix(random_rational_poly(a.n, 4, rng), limits), a.q, limits)
                                           : verify_tetris(sos_matrix(random_poly(a.n, 4, rng), limits), a.q, limits);
  Json flags;
  flags["n"] = a.n;
  flags["q"] = a.q;
  flags["seed"] = a.seed;
  flags["mode"] = a.mode;
  flags["cap"] = cap_json(a.cap);
  Json report = envelope("tetris-verify", flags);
  report["terms"] = r.terms;
  report["max_abs_error"] = r.max_abs_error;
  report["max_abs_entry"] = r.max_abs_entry;
  report["rel_error"] = r.rel_error;
  report["pass"] = r.pass;
  emit(report, out, std::nullopt);
  err << "tetris-verify: " << (r.pass ? "pass" : "FAIL") << ", max abs error " << r.max_abs_error << "\n";
  return r.pass ? ok : failure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polynomial optimization over the sphere", "spherex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  OptimizeArgs oa;
  auto* optimize_cmd = app.add_subcommand("optimize", "Approximate max |f(x)| over the unit sphere");
  optimize_cmd->add_option("--poly", oa.poly, "Polynomial JSON file")->required();
  optimize_cmd->add_option("--q", oa.q, "Power degree, a multiple of deg f")->required();
  optimize_cmd->add_option("--method", oa.method, "general|nnc|sparse|auto")->capture_default_str();
  optimize_cmd->add_option("--c-grid", oa.c_grid, "Grid size per decoupling coefficient")->capture_default_str();
  optimize_cmd->add_option("--cap", oa.cap, "Matrix-entry cap (overrides SPHEREX_CAP)");
  optimize_cmd->add_option("--out", oa.out, "Also write the report to this file");

  BoundArgs ba;
  auto* bound_cmd = app.add_subcommand("bound", "Upper estimates on max |f(x)|");
  bound_cmd->add_option("--poly", ba.poly, "Polynomial JSON file")->required();
  bound_cmd->add_option("--q", ba.q, "Also report the powered estimate at this degree");
  bound_cmd->add_option("--method", ba.method, "Only this estimate: gershgorin|rowsum|frobenius|eig");
  bound_cmd->add_option("--cap", ba.cap, "Matrix-entry cap (overrides SPHEREX_CAP)");

  CliqueArgs ca;
  auto* clique_cmd = app.add_subcommand("clique-instance", "Random-graph clique polynomial with its moment certificate");
  clique_cmd->add_option("--n", ca.n, "Vertices")->required();
  clique_cmd->add_option("--p", ca.p, "Edge probability or 'auto' (n^{-1/3})")->capture_default_str();
  clique_cmd->add_option("--seed", ca.seed, "Graph and oracle seed")->capture_default_str();
  clique_cmd->add_option("--restarts", ca.restarts, "Oracle restarts")->capture_default_str();
  clique_cmd->add_option("--prefix", ca.prefix, "Output file prefix")->capture_default_str();

  TetrisArgs ta;
  auto* tetris_cmd = app.add_subcommand("tetris-verify", "Check the symmetrized Kronecker power identity");
  tetris_cmd->add_option("--n", ta.n, "Variables")->capture_default_str();
  tetris_cmd->add_option("--q", ta.q, "Lifted degree, a multiple of 4")->capture_default_str();
  tetris_cmd->add_option("--seed", ta.seed, "Seed of the random degree-4 polynomial")->capture_default_str();
  tetris_cmd->add_option("--mode", ta.mode, "exact|float")->capture_default_str();
  tetris_cmd->add_option("--cap", ta.cap, "Matrix-entry cap (overrides SPHEREX_CAP)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return invalid;
  }

  try {
    if (optimize_cmd->parsed()) return cmd_optimize(oa, out, err);
    if (bound_cmd->parsed()) return cmd_bound(ba, out, err);
    if (clique_cmd->parsed()) return cmd_clique_instance(ca, out, err);
    return cmd_tetris_verify(ta, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return invalid;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return capacity;
  } catch (const DegenerateInstance& e) {
    err << "degenerate: " << e.what() << "\n";
    return degenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace spherex::cli
