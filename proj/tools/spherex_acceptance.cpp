// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "spherex/cli.hpp"
#include "spherex/decompose.hpp"
#include "spherex/lowerbound.hpp"
#include "spherex/oracle.hpp"
#include "spherex/poly_io.hpp"
#include "spherex/rounding.hpp"
#include "spherex/spectral.hpp"
#include "spherex/tetris.hpp"
#include "suites.hpp"

using namespace spherex;

namespace {

// Frozen at twice the worst ratio seen by spherex_calibrate on the published
// suites (nnc 1.3245 / 1.2057, general 1.3520 / 1.2232, weak 1.5025).
const std::map<std::pair<std::string, int>, double> kRatioBound{
    {{"nnc", 4}, 2.649},
    {{"nnc", 8}, 2.412},
    {{"general", 4}, 2.704},
    {{"general", 8}, 2.447},
};
constexpr double kWeakBound = 3.005;

constexpr double kQuadTol = 1e-8;
constexpr double kPointwiseTol = 1e-10;
constexpr double kFloatTetrisTol = 1e-9;
constexpr double kPsdTol = 1e-8;
constexpr double kTraceTol = 1e-9;
constexpr double kMinEigTol = -1e-7;
constexpr double kDualTol = 1e-6;
constexpr double kGradTol = 1e-5;
constexpr double kEulerTol = 1e-10;
constexpr double kChebTol = 1e-3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// sum |f_beta| |x^beta|, the natural scale of f(x).
double abs_scale(const HomogPoly& f, const VecD& x) {
  double s = 0.0;
  for (const auto& [beta, c] : f.terms()) {
    double m = std::abs(c);
    for (std::size_t i = 0; i < beta.size(); ++i) m *= std::pow(std::abs(x(static_cast<Eigen::Index>(i))), beta[i]);
    s += m;
  }
  return s;
}

VecD gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VecD x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
  return x;
}

Outcome quadratic_exactness() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 20);
    MatD a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = std::normal_distribution<double>()(rng);
    const MatD q = (a + a.transpose()) / 2.0;
    HomogPoly f(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::vector<int> e(n, 0);
        ++e[i];
        ++e[j];
        const double c = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        f.add_term(MultiIndex(e), i == j ? c : 2.0 * c);
      }
    }
    const QuadMax m = quad_argmax(q);
    const double oracle = brute_norm2(f).value;
    const double attained = std::abs(m.x.dot(q * m.x));
    worst = std::max({worst, std::abs(m.value - oracle), std::abs(attained - m.value)});
  }
  return {worst <= kQuadTol, "max deviation " + fmt(worst)};
}

Outcome decomposition_round_trips() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  int exact_checked = 0;
  bool exact_ok = true;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 5);
    const int d = 1 + (t / 5) % 6;
    const HomogPoly f = random_poly(n, d, rng);
    const auto parts = multilinear_parts(f);
    for (int s = 0; s < 50; ++s) {
      const VecD x = gaussian(n, rng);
      const double err = std::abs(eval_parts(parts, x) - f(x)) / std::max(1.0, abs_scale(f, x));
      worst = std::max(worst, err);
    }
    const RationalPoly g = random_rational_poly(n, d, rng);
    if (d >= 4 && d % 2 == 0) {
      exact_ok = exact_ok && unfold(fold_quadratic(g)) == g;
      ++exact_checked;
    }
    if (d >= 2) exact_ok = exact_ok && unfold(fold_split(g, 2)) == g;
  }
  return {worst <= kPointwiseTol && exact_ok,
          "pointwise rel " + fmt(worst) + ", exact folds " + (exact_ok ? "equal" : "DIFFER") + " (" + std::to_string(exact_checked) + " quadratic folds)"};
}

Outcome representation_soundness() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  double tightest = INFINITY;
  bool dominated = true;
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
    const int d = 2 + 2 * (t % 3);
    const HomogPoly f = random_poly(n, d, rng);
    std::map<MultiIndex, SymMatRep<double>> reps;
    for (const auto& [alpha, g] : multilinear_parts(f)) reps.emplace(alpha, sos_matrix(g));
    const double sampled = sample_max(f, 10000, rng);
    for (const auto& m : {sos_matrix(f), block_multilinear_rep(f, reps)}) {
      for (int s = 0; s < 20; ++s) {
        const VecD x = gaussian(n, rng);
        const VecD xk = tensor_power(x, d / 2);
        worst = std::max(worst, std::abs(xk.dot(m.entries * xk) - f(x)) / std::max(1.0, abs_scale(f, x)));
      }
      const double top = lambda_max(m.entries).value;
      dominated = dominated && top >= sampled - 1e-12;
      tightest = std::min(tightest, top - sampled);
    }
  }
  return {worst <= kPointwiseTol && dominated, "pointwise rel " + fmt(worst) + ", min(lambda_max - sampled max) " + fmt(tightest)};
}

Outcome bound_chain() {
  HomogPoly f(4, 4);
  f.add_term(MultiIndex{1, 1, 1, 1}, 1.0);
  const double rowsum = rowsum_bound(f).value;
  const double frob = frobenius_sparse_bound(f).value;
  const double gersh = gershgorin_bound(f).value;
  const double oracle = brute_norm2(f).value;
  const bool ok = std::abs(rowsum - 1.0 / 12) <= 1e-12 && std::abs(frob - std::sqrt(1.0 / 24)) <= 1e-12 &&
                  std::abs(gersh - 2.0 / 3) <= 1e-12 && std::abs(oracle - 1.0 / 16) <= 1e-6 && rowsum >= oracle;
  return {ok, "rowsum " + fmt(rowsum) + ", frobenius " + fmt(frob) + ", gershgorin " + fmt(gersh) + ", oracle " + fmt(oracle)};
}

// q! (B)^S against the literal sum over S_q of B^pi.
bool permutation_oracle(const SymMatRep<Rational>& m, int q) {
  const std::size_t n = m.n;
  const Mat<Rational> b = kron_power(m.entries, q / 4);
  Mat<Rational> sum = Mat<Rational>::Zero(b.rows(), b.cols());
  const auto side = static_cast<std::size_t>(b.rows());
  std::vector<int> pi(static_cast<std::size_t>(q));
  std::iota(pi.begin(), pi.end(), 0);
  std::vector<int> moved(static_cast<std::size_t>(q));
  do {
    for (std::size_t r = 0; r < side; ++r) {
      const auto i = index_tuple(r, n, q / 2);
      for (std::size_t c = 0; c < side; ++c) {
        const auto j = index_tuple(c, n, q / 2);
        for (int t = 0; t < q; ++t) {
          const int s = pi[static_cast<std::size_t>(t)];
          moved[static_cast<std::size_t>(t)] = s < q / 2 ? i[static_cast<std::size_t>(s)] : j[static_cast<std::size_t>(s - q / 2)];
        }
        const std::span<const int> whole(moved);
        const auto rr = tuple_index(whole.first(static_cast<std::size_t>(q / 2)), n);
        const auto cc = tuple_index(whole.last(static_cast<std::size_t>(q / 2)), n);
        sum(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += b(static_cast<Eigen::Index>(rr), static_cast<Eigen::Index>(cc));
      }
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return sum == sym_kron_power(m, q).entries * factorial_exact(q) && sum == tetris_rhs(m, q) * factorial_exact(q / 4) * Rational(static_cast<long>(std::pow(24, q / 4)));
}

Outcome tetris_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  int exact_pass = 0;
  double worst_float = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (int q : {4, 8}) {
      std::mt19937_64 rng(seed);
      const auto r = verify_tetris(sos_matrix(random_rational_poly(2, 4, rng)), q);
      if (r.pass && r.max_abs_error == 0.0) ++exact_pass;
    }
    std::mt19937_64 rng(seed);
    worst_float = std::max(worst_float, verify_tetris(sos_matrix(random_poly(3, 4, rng)), 8).rel_error);
  }
  std::mt19937_64 rng(7);
  const bool oracle = permutation_oracle(sos_matrix(random_rational_poly(2, 4, rng)), 8);
  const double elapsed = seconds_since(t0);
  return {exact_pass == 40 && worst_float <= kFloatTetrisTol && oracle && elapsed < 120.0,
          "exact " + std::to_string(exact_pass) + "/40, float rel " + fmt(worst_float) + ", S_8 oracle " + (oracle ? "equal" : "DIFFERS") + ", " +
              fmt(elapsed) + " s"};
}

Outcome psd_lifting() {
  std::mt19937_64 rng(606);
  int asserted = 0, held = 0;
  double worst = INFINITY;
  for (int t = 0; t < 40; ++t) {
    std::vector<VecD> pts;
    std::vector<double> w;
    const int k = t < 20 ? 1 : 3;
    for (int j = 0; j < k; ++j) {
      pts.push_back(random_unit(2, rng));
      w.push_back(k == 1 ? 1.0 : std::uniform_real_distribution<double>(0.1, 1.0)(rng));
    }
    const PsdReport r = lift_psd_check(moment_matrix(pts, w), 8);
    if (!r.hypotheses()) continue;
    ++asserted;
    if (r.lifted_min_eig >= -kPsdTol * r.lifted_norm) ++held;
    worst = std::min(worst, r.lifted_min_eig / std::max(r.lifted_norm, 1e-300));
  }
  return {held == asserted, std::to_string(held) + "/" + std::to_string(asserted) + " lifted PSD where the pre-check held (of 40), min eig/norm " + fmt(worst)};
}

Outcome clique_certificate() {
  const auto k4 = build_certificate(complete_graph(4));
  bool ok = std::abs(k4.lambda_min + 2.0) <= 1e-9 && std::abs(k4.dual_value - 0.5) <= 1e-9;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = build_certificate(gnp(40, 0.34, seed));
    const double expected = 6.0 * static_cast<double>(c.clique_count) / (static_cast<double>(c.m) * std::abs(c.lambda_min));
    ok = ok && c.checks.sos_symmetric && std::abs(c.checks.trace - 1.0) <= kTraceTol && c.checks.min_eig >= kMinEigTol &&
         std::abs(c.dual_value - expected) <= kDualTol * expected;
    slowest = std::max(slowest, seconds_since(t0));
  }
  ok = ok && slowest < 60.0;
  return {ok, "K4 lambda " + fmt(k4.lambda_min) + " dual " + fmt(k4.dual_value) + ", G(40, 0.34) seeds 1..5, slowest " + fmt(slowest) + " s"};
}

Outcome calibrated_ratios() {
  std::map<std::pair<std::string, int>, double> worst;
  for (const auto& c : suites::ratio_suite()) {
    auto& w = worst[{c.kind, c.q}];
    w = std::max(w, c.ratio);
  }
  bool ok = worst.size() == kRatioBound.size();
  std::string detail;
  for (const auto& [key, w] : worst) {
    ok = ok && w <= kRatioBound.at(key);
    detail += key.first + " q=" + std::to_string(key.second) + " " + fmt(w) + "<=" + fmt(kRatioBound.at(key)) + " ";
  }
  return {ok, detail};
}

Outcome weak_decoupling() {
  double worst = 0.0;
  std::size_t cases = 0;
  for (const auto& c : suites::weak_suite()) {
    worst = std::max(worst, c.ratio);
    ++cases;
  }
  return {worst <= kWeakBound, std::to_string(cases) + " (f, alpha) pairs, worst y^{2a}|G|/|f| " + fmt(worst) + " <= " + fmt(kWeakBound)};
}

Outcome gradient_oracle() {
  std::mt19937_64 rng(1010);
  double worst_fd = 0.0, worst_euler = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 5);
    const int d = 1 + (t / 5) % 6;
    const HomogPoly f = random_poly(n, d, rng);
    const VecD x = gaussian(n, rng);
    const VecD g = grad(f, x);
    const double h = 1e-5;
    VecD fd(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      VecD up = x, down = x;
      up(i) += h;
      down(i) -= h;
      fd(i) = (f(up) - f(down)) / (2 * h);
    }
    worst_fd = std::max(worst_fd, (fd - g).norm() / std::max(1.0, g.norm()));
    worst_euler = std::max(worst_euler, std::abs(g.dot(x) - d * f(x)) / std::max(1.0, d * abs_scale(f, x)));
  }
  return {worst_fd <= kGradTol && worst_euler <= kEulerTol, "finite difference rel " + fmt(worst_fd) + ", Euler rel " + fmt(worst_euler)};
}

Outcome chebyshev_extraction() {
  std::mt19937_64 rng(1111);
  std::normal_distribution<double> g;
  double worst_gap = 0.0, worst_margin = INFINITY;
  for (int s = 0; s < 100; ++s) {
    const int t = s % 7;
    std::vector<double> c(static_cast<std::size_t>(t + 1));
    for (double& v : c) v = g(rng);
    auto p = [&](double x) {
      double acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
      return acc;
    };
    double dense = 0;
    for (int j = 0; j <= 100000; ++j) dense = std::max(dense, std::abs(p(j / 100000.0)));
    const auto r = cheb_extract(p, t, std::max(2, 4 * t));
    worst_gap = std::max(worst_gap, std::abs(r.value - dense));
    // The extremal bound is stated for degree t >= 1; a constant c_0 has max exactly |c_0|.
    const double bound = t >= 1 ? 2 * std::abs(c.back()) / std::pow(4.0, t) : std::abs(c.back());
    worst_margin = std::min(worst_margin, r.value - bound);
  }
  return {worst_gap <= kChebTol && worst_margin >= -1e-12, "max |value - dense scan| " + fmt(worst_gap) + ", min margin over 2|c_t|/4^t (|c_0| at t = 0) " + fmt(worst_margin)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "spherex_acceptance";
  fs::create_directories(dir);
  const std::string poly = (dir / "f.json").string();
  {
    std::mt19937_64 rng(1212);
    save_poly(random_poly(3, 4, rng), poly);
  }
  const std::vector<std::vector<std::string>> commands{
      {"optimize", "--poly", poly, "--q", "4", "--method", "general"},
      {"optimize", "--poly", poly, "--q", "8", "--method", "general", "--c-grid", "9"},
      {"optimize", "--poly", poly, "--q", "4", "--method", "sparse"},
      {"bound", "--poly", poly, "--q", "8"},
      {"clique-instance", "--n", "20", "--p", "auto", "--seed", "3", "--restarts", "20", "--prefix", (dir / "g").string()},
      {"tetris-verify", "--n", "2", "--q", "8", "--seed", "4", "--mode", "exact"},
      {"tetris-verify", "--n", "3", "--q", "8", "--seed", "4", "--mode", "float"},
  };
  int same = 0;
  for (const auto& args : commands) {
    std::ostringstream a, b, ea, eb;
    const int ca = cli::run(args, a, ea);
    const int cb = cli::run(args, b, eb);
    if (ca == cb && ca == cli::ok && a.str() == b.str()) ++same;
  }
  return {same == static_cast<int>(commands.size()), std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"quadratic exactness", quadratic_exactness},
      {"decomposition round-trips", decomposition_round_trips},
      {"representation soundness", representation_soundness},
      {"bound chain on x1x2x3x4", bound_chain},
      {"tetris identity", tetris_identity},
      {"PSD lifting", psd_lifting},
      {"clique certificate", clique_certificate},
      {"calibrated algorithm ratios", calibrated_ratios},
      {"weak decoupling", weak_decoupling},
      {"gradient oracle", gradient_oracle},
      {"Chebyshev extraction", chebyshev_extraction},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
