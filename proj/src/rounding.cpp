#include "spherex/rounding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace spherex {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Dense copy of a polynomial for the inner loops: exponent rows and
// coefficients side by side, evaluated through a reused power table.
class FlatPoly {
 public:
  explicit FlatPoly(const HomogPoly& f) : n_(f.n()), d_(f.degree()) {
    for (const auto& [alpha, c] : f.terms()) {
      coef_.push_back(c);
      for (std::size_t i = 0; i < n_; ++i) exps_.push_back(alpha[i]);
    }
  }

  template <class S>
  S operator()(const S* x) const {
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    std::vector<S> powers(n_ * stride);
    for (std::size_t i = 0; i < n_; ++i) {
      powers[i * stride] = S(1);
      for (std::size_t e = 1; e < stride; ++e) powers[i * stride + e] = powers[i * stride + e - 1] * x[i];
    }
    S total(0);
    for (std::size_t t = 0; t < coef_.size(); ++t) {
      S term(coef_[t]);
      const int* e = &exps_[t * n_];
      for (std::size_t i = 0; i < n_; ++i) {
        if (e[i] != 0) term *= powers[i * stride + static_cast<std::size_t>(e[i])];
      }
      total += term;
    }
    return total;
  }

 private:
  std::size_t n_;
  int d_;
  std::vector<double> coef_;
  std::vector<int> exps_;
};

Complex root_of_unity(int j, int order) {
  const double angle = 2.0 * std::numbers::pi * j / order;
  return {std::cos(angle), std::sin(angle)};
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Golden-section maximisation of phi on [lo, hi]; returns (argmax, value).
template <class Fn>
std::pair<double, double> golden_max(Fn&& phi, double lo, double hi, int iters = 60) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < iters && b - a > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = phi(x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

double top_eigenvalue(const MatD& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

// q-bar = (d-2) q / d after checking the divisibility rules shared by the
// candidate-set methods.
int reduced_degree(int d, int q) {
  if (q < 1 || q % d != 0) throw InvalidArgument("q = " + std::to_string(q) + " is not a positive multiple of d = " + std::to_string(d));
  if (q % 2 != 0) throw InvalidArgument("q = " + std::to_string(q) + " must be even");
  const int qbar = (d - 2) * q / d;
  if (qbar % 2 != 0) throw InvalidArgument("(d-2)q/d = " + std::to_string(qbar) + " must be even");
  return qbar;
}

VecC general_y(const Provenance& prov, std::size_t n) {
  VecC y = VecC::Zero(static_cast<Eigen::Index>(n));
  const int t = prov.alpha.degree();
  const int k = prov.gamma.degree();
  if (k > 0) {
    const Complex xi = root_of_unity(prov.xi, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (prov.gamma[i] == 0 || prov.mask[i] == 0) continue;
      y(static_cast<Eigen::Index>(i)) += xi / (std::sqrt(static_cast<double>(k)) * (2.0 * prov.alpha[i] + 1.0));
    }
  }
  if (t > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (prov.alpha[i] == 0) continue;
      y(static_cast<Eigen::Index>(i)) += root_of_unity(prov.zeta[i], 2 * prov.alpha[i] + 1) * std::sqrt(static_cast<double>(prov.alpha[i]) / t);
    }
  }
  return y;
}

VecD nnc_base(const MultiIndex& alpha, const MultiIndex& gamma, std::size_t n) {
  VecD b = VecD::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha.degree() > 0) b(static_cast<Eigen::Index>(i)) += std::sqrt(static_cast<double>(alpha[i]) / alpha.degree());
    if (gamma.degree() > 0) b(static_cast<Eigen::Index>(i)) += gamma[i] / std::sqrt(static_cast<double>(gamma.degree()));
  }
  return b;
}

VecD nnc_vector(const FoldedPoly<double>& h, const MultiIndex& alpha, const MultiIndex& gamma) {
  const VecD b = nnc_base(alpha, gamma, h.n);
  VecD w = quad_argmax(quadratic_matrix(h.at(b))).x;
  // Eigenvectors carry an arbitrary sign; point w along b.
  const double align = w.dot(b);
  if (align < 0.0) w = -w;
  return (b + w).normalized();
}

VecD monomial_vector(const MultiIndex& beta, const std::vector<int>& signs) {
  VecD x(static_cast<Eigen::Index>(beta.size()));
  for (std::size_t i = 0; i < beta.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = signs[i] * std::sqrt(static_cast<double>(beta[i]) / beta.degree());
  }
  return x;
}

struct GridBest {
  double c1 = 0.0, c2 = 0.0, value = -1.0;
};

// Best c1 y + c2 w for one y; fills in the general-candidate provenance.
Candidate general_candidate(const HomogPoly& f, const FoldedPoly<double>& h, Provenance prov, const GeneralOptions& opts,
                            std::size_t* grid_points) {
  const std::size_t n = f.n();
  const int d = f.degree();
  const VecC y = general_y(prov, n);
  const auto [qa, qb] = quadratic_matrices(h.at(y));
  const VecD w = complex_quad_argmax(qa, qb, opts.theta_grid).x;
  MatD u(static_cast<Eigen::Index>(n), 3);
  u.col(0) = y.real();
  u.col(1) = y.imag();
  u.col(2) = w;
  const FlatPoly g(restrict(f, u));
  const MatD gram = u.transpose() * u;
  auto score = [&](double c1, double c2) {
    const double norm2 = c1 * c1 * (gram(0, 0) + gram(1, 1)) + 2.0 * c1 * c2 * gram(0, 2) + c2 * c2 * gram(2, 2);
    if (!(norm2 > 1e-300)) return -1.0;
    const Complex s[3] = {Complex(c1, 0.0), Complex(0.0, c1), Complex(c2, 0.0)};
    return std::abs(g(s)) / std::pow(norm2, 0.5 * d);
  };
  const double r1 = d - 2.0, r2 = 2.0;
  const int grid = opts.c_grid;
  GridBest best;
  auto coord = [&](double r, int i) { return grid == 1 ? r : -r + 2.0 * r * i / (grid - 1); };
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double c1 = coord(r1, i), c2 = coord(r2, j);
      const double v = score(c1, c2);
      if (v > best.value) best = {c1, c2, v};
    }
  }
  if (grid_points != nullptr) *grid_points += static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
  if (best.value > 0.0 && grid > 1) {
    const double h1 = 2.0 * r1 / (grid - 1), h2 = 2.0 * r2 / (grid - 1);
    const auto [c1, v1] = golden_max([&](double c) { return score(c, best.c2); }, std::max(-r1, best.c1 - h1), std::min(r1, best.c1 + h1));
    if (v1 > best.value) best = {c1, best.c2, v1};
    const auto [c2, v2] = golden_max([&](double c) { return score(best.c1, c); }, std::max(-r2, best.c2 - h2), std::min(r2, best.c2 + h2));
    if (v2 > best.value) best = {best.c1, c2, v2};
  }
  if (best.value < 0.0) best = {1.0, 0.0, 0.0};  // y and w both degenerate
  prov.c1 = best.c1;
  prov.c2 = best.c2;
  VecC z = best.c1 * y + best.c2 * w.cast<Complex>();
  if (z.norm() == 0.0) z = w.cast<Complex>();
  return {complex_to_real(f, z / z.norm()).x, std::move(prov)};
}

// Calls fn(prov) for every y of the general candidate set, in a fixed order.
template <class Fn>
void for_each_general_y(std::size_t n, int qbar, Fn&& fn) {
  for (const auto& alpha : multi_indices_up_to(n, qbar / 2)) {
    const int t = alpha.degree();
    const int k = qbar - 2 * t;
    const auto alpha_supp = alpha.support();
    for (const auto& gamma : multilinear_indices(n, k)) {
      const auto gamma_supp = gamma.support();
      std::size_t zeta_count = 1;
      for (std::size_t i : alpha_supp) zeta_count *= static_cast<std::size_t>(2 * alpha[i] + 1);
      for (int xi = 0; xi <= k; ++xi) {
        for (std::size_t zc = 0; zc < zeta_count; ++zc) {
          Provenance prov;
          prov.kind = "general";
          prov.alpha = alpha;
          prov.gamma = gamma;
          prov.xi = xi;
          prov.zeta.assign(n, 0);
          std::size_t rest = zc;
          for (std::size_t i : alpha_supp) {
            const auto order = static_cast<std::size_t>(2 * alpha[i] + 1);
            prov.zeta[i] = static_cast<int>(rest % order);
            rest /= order;
          }
          for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
            prov.mask.assign(n, 0);
            for (std::size_t bit = 0; bit < gamma_supp.size(); ++bit) prov.mask[gamma_supp[bit]] = static_cast<int>((m >> bit) & 1u);
            if (t == 0 && m == 0) continue;  // y = 0
            fn(prov);
          }
        }
      }
    }
  }
}

std::size_t count_general_y(std::size_t n, int qbar) {
  std::size_t total = 0;
  for (const auto& alpha : multi_indices_up_to(n, qbar / 2)) {
    const int k = qbar - 2 * alpha.degree();
    if (k > static_cast<int>(n)) continue;
    std::size_t per = static_cast<std::size_t>(k + 1) << k;
    for (std::size_t i : alpha.support()) per *= static_cast<std::size_t>(2 * alpha[i] + 1);
    std::size_t gammas = static_cast<std::size_t>(binomial(static_cast<int>(n), k) + 0.5);
    total += per * gammas - (alpha.degree() == 0 ? gammas * static_cast<std::size_t>(k + 1) : 0);
  }
  return total;
}

}  // namespace

// Maximiser for the cases solved in closed form: zero, linear and quadratic f.
VecD exact_vector(const HomogPoly& f) {
  const auto dim = static_cast<Eigen::Index>(f.n());
  if (f.is_zero()) return VecD::Unit(dim, 0);
  if (f.degree() == 1) {
    VecD coef = VecD::Zero(dim);
    for (const auto& [alpha, v] : f.terms()) coef(static_cast<Eigen::Index>(alpha.support().front())) = v;
    return coef / coef.norm();
  }
  if (f.degree() == 2) return quad_argmax(quadratic_matrix(f)).x;
  throw InvalidArgument("exact maximiser only exists for degree <= 2 or f = 0");
}

QuadMax quad_argmax(const MatD& q) {
  require_symmetric(q, "quad_argmax");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(q)};
  const auto last = q.rows() - 1;
  const double top = es.eigenvalues()(last), bottom = es.eigenvalues()(0);
  if (std::abs(top) >= std::abs(bottom)) return {es.eigenvectors().col(last), std::abs(top)};
  return {es.eigenvectors().col(0), std::abs(bottom)};
}

QuadMax complex_quad_argmax(const MatD& a, const MatD& b, int theta_grid) {
  if (theta_grid < 8) throw InvalidArgument("complex_quad_argmax: theta_grid must be >= 8");
  require_symmetric(a, "complex_quad_argmax");
  require_symmetric(b, "complex_quad_argmax");
  if (a.rows() != b.rows()) throw InvalidArgument("complex_quad_argmax: size mismatch");
  auto lam = [&](double theta) { return top_eigenvalue(MatD(std::cos(theta) * a + std::sin(theta) * b)); };
  const double step = 2.0 * std::numbers::pi / theta_grid;
  double best_theta = 0.0, best = lam(0.0);
  for (int j = 1; j < theta_grid; ++j) {
    const double v = lam(j * step);
    if (v > best) {
      best = v;
      best_theta = j * step;
    }
  }
  const auto [theta, v] = golden_max(lam, best_theta - step, best_theta + step, 40);
  if (v > best) best_theta = theta;
  const VecD x = lambda_max(MatD(std::cos(best_theta) * a + std::sin(best_theta) * b)).vector;
  return {x, std::hypot(x.dot(a * x), x.dot(b * x))};
}

MatD quadratic_matrix(const HomogPoly& q) {
  if (q.degree() != 2) throw InvalidArgument("quadratic_matrix: degree must be 2");
  const auto n = static_cast<Eigen::Index>(q.n());
  MatD m = MatD::Zero(n, n);
  for (const auto& [alpha, c] : q.terms()) {
    const auto s = alpha.support();
    const auto i = static_cast<Eigen::Index>(s[0]);
    if (s.size() == 1) {
      m(i, i) = c;
    } else {
      const auto j = static_cast<Eigen::Index>(s[1]);
      m(i, j) = m(j, i) = c / 2;
    }
  }
  return m;
}

std::pair<MatD, MatD> quadratic_matrices(const BasicPoly<Complex>& q) {
  HomogPoly re(q.n(), 2), im(q.n(), 2);
  for (const auto& [alpha, c] : q.terms()) {
    re.add_term(alpha, c.real());
    im.add_term(alpha, c.imag());
  }
  return {quadratic_matrix(re), quadratic_matrix(im)};
}

FoldedPoly<double> quadratic_fold(const HomogPoly& f) {
  if (f.degree() < 2) throw InvalidArgument("quadratic_fold: degree must be >= 2");
  if (f.degree() >= 4 && f.degree() % 2 == 0) return fold_quadratic(f, FoldScaling::unfold_exact);
  return fold_split(f, 2);
}

Decoupled decouple(const HomogPoly& f, const std::vector<VecD>& xs) {
  const int d = f.degree();
  if (static_cast<int>(xs.size()) != d) throw InvalidArgument("decouple: need exactly d vectors");
  for (const auto& x : xs) {
    if (static_cast<std::size_t>(x.size()) != f.n()) throw InvalidArgument("decouple: dimension mismatch");
  }
  Decoupled best;
  best.value = -1.0;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    VecD v = VecD::Zero(static_cast<Eigen::Index>(f.n()));
    for (int i = 0; i < d; ++i) v += ((mask >> i) & 1u ? -1.0 : 1.0) * xs[static_cast<std::size_t>(i)];
    const double norm = v.norm();
    if (norm == 0.0) continue;
    v /= norm;
    const double value = std::abs(f(v));
    if (value > best.value) {
      best.x = v;
      best.value = value;
      best.signs.assign(static_cast<std::size_t>(d), 1);
      for (int i = 0; i < d; ++i) {
        if ((mask >> i) & 1u) best.signs[static_cast<std::size_t>(i)] = -1;
      }
    }
  }
  if (best.value < 0.0) {
    // Every signed sum vanished; fall back to the first unit basis vector.
    best.x = VecD::Unit(static_cast<Eigen::Index>(f.n()), 0);
    best.value = std::abs(f(best.x));
    best.signs.assign(static_cast<std::size_t>(d), 1);
  }
  return best;
}

RealVector complex_to_real(const HomogPoly& f, const VecC& z) {
  if (static_cast<std::size_t>(z.size()) != f.n()) throw InvalidArgument("complex_to_real: dimension mismatch");
  const VecD a = z.real(), b = z.imag();
  if (b.isZero(0.0)) return {a, std::abs(f(a)), 0};
  const int d = f.degree();
  const double na = a.norm(), nb = b.norm();
  const VecD ua = na > 0.0 ? VecD(a / na) : VecD::Zero(a.size());
  const VecD ub = b / nb;
  const std::vector<double> c = binary_form(f, ua, ub);
  int best_j = -1;
  double best = -1.0;
  for (int j = 0; j <= d; ++j) {
    if (na == 0.0 && j < d) continue;
    const double tj = std::abs(c[static_cast<std::size_t>(j)]) / binomial(d, j);
    if (tj > best) {
      best = tj;
      best_j = j;
    }
  }
  std::vector<VecD> xs;
  for (int i = 0; i < d - best_j; ++i) xs.push_back(ua);
  for (int i = 0; i < best_j; ++i) xs.push_back(ub);
  const Decoupled dec = decouple(f, xs);
  return {dec.x, dec.value, best_j};
}

ChebResult cheb_extract(const std::function<double(double)>& evals, int t, int grid) {
  if (t < 0) throw InvalidArgument("cheb_extract: degree must be non-negative");
  if (grid < std::max(2, 4 * t)) throw InvalidArgument("cheb_extract: grid must be >= 4t and >= 2");
  std::vector<double> p(static_cast<std::size_t>(grid)), v(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    p[static_cast<std::size_t>(j)] = 0.5 * (1.0 - std::cos(std::numbers::pi * j / (grid - 1)));
    v[static_cast<std::size_t>(j)] = std::abs(evals(p[static_cast<std::size_t>(j)]));
  }
  ChebResult best{p[0], v[0]};
  for (int j = 0; j < grid; ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (v[u] > best.value) best = {p[u], v[u]};
    const bool left = j == 0 || v[u] >= v[u - 1];
    const bool right = j == grid - 1 || v[u] >= v[u + 1];
    if (!left || !right) continue;
    const double lo = j == 0 ? p[u] : p[u - 1];
    const double hi = j == grid - 1 ? p[u] : p[u + 1];
    if (hi <= lo) continue;
    const auto [x, fx] = golden_max([&](double s) { return std::abs(evals(s)); }, lo, hi);
    if (fx > best.value) best = {x, fx};
  }
  return best;
}

std::vector<Candidate> nnc_candidates(const HomogPoly& f, int q, const Limits& limits) {
  if (!f.is_nonnegative()) throw InvalidArgument("nnc_candidates: negative coefficient present");
  const int d = f.degree();
  if (d < 3) throw InvalidArgument("nnc_candidates: degree must be >= 3 (lower degrees are solved exactly)");
  const int qbar = reduced_degree(d, q);
  const std::size_t n = f.n();
  std::size_t count = 0;
  for (const auto& alpha : multi_indices_up_to(n, qbar / 2)) {
    count += multi_indices(n, qbar / 2 - alpha.degree()).size();
    check_capacity(count, limits.max_candidates, "nnc candidate set");
  }
  const FoldedPoly<double> h = quadratic_fold(f);
  std::vector<Candidate> out;
  out.reserve(count);
  for (const auto& alpha : multi_indices_up_to(n, qbar / 2)) {
    for (const auto& gamma : multi_indices(n, qbar / 2 - alpha.degree())) {
      Provenance prov;
      prov.kind = "nnc";
      prov.alpha = alpha;
      prov.gamma = gamma;
      out.push_back({nnc_vector(h, alpha, gamma), std::move(prov)});
    }
  }
  return out;
}

std::vector<Candidate> general_candidates(const HomogPoly& f, int q, const GeneralOptions& opts, const Limits& limits,
                                          std::size_t* grid_points) {
  const int d = f.degree();
  if (d < 3) throw InvalidArgument("general_candidates: degree must be >= 3 (lower degrees are solved exactly)");
  if (opts.c_grid < 1) throw InvalidArgument("general_candidates: c_grid must be >= 1");
  const int qbar = reduced_degree(d, q);
  const std::size_t n = f.n();
  check_capacity(count_general_y(n, qbar), limits.max_candidates, "general candidate set");
  const FoldedPoly<double> h = quadratic_fold(f);
  std::vector<Candidate> out;
  for_each_general_y(n, qbar, [&](const Provenance& prov) { out.push_back(general_candidate(f, h, prov, opts, grid_points)); });
  return out;
}

std::vector<Candidate> monomial_candidates(const HomogPoly& f, const Limits& limits) {
  std::vector<Candidate> out;
  for (const auto& [beta, c] : f.terms()) {
    const auto supp = beta.support();
    const std::uint64_t patterns = std::uint64_t{1} << (supp.size() - 1);
    check_capacity(out.size() + patterns, limits.max_candidates, "monomial candidate set");
    for (std::uint64_t m = 0; m < patterns; ++m) {
      Provenance prov;
      prov.kind = "monomial";
      prov.gamma = beta;
      prov.signs.assign(f.n(), 1);
      for (std::size_t bit = 1; bit < supp.size(); ++bit) {
        if ((m >> (bit - 1)) & 1u) prov.signs[supp[bit]] = -1;
      }
      out.push_back({monomial_vector(beta, prov.signs), std::move(prov)});
    }
  }
  return out;
}

VecD replay(const HomogPoly& f, const Provenance& prov, const GeneralOptions& opts) {
  if (prov.kind == "nnc") return nnc_vector(quadratic_fold(f), prov.alpha, prov.gamma);
  if (prov.kind == "monomial") return monomial_vector(prov.gamma, prov.signs);
  if (prov.kind == "general") {
    const FoldedPoly<double> h = quadratic_fold(f);
    const VecC y = general_y(prov, f.n());
    const auto [qa, qb] = quadratic_matrices(h.at(y));
    const VecD w = complex_quad_argmax(qa, qb, opts.theta_grid).x;
    VecC z = prov.c1 * y + prov.c2 * w.cast<Complex>();
    if (z.norm() == 0.0) z = w.cast<Complex>();
    return complex_to_real(f, z / z.norm()).x;
  }
  if (prov.kind == "exact") return exact_vector(f);
  throw InvalidArgument("replay: unknown candidate kind '" + prov.kind + "'");
}

OptReport best_candidate(const HomogPoly& f, const std::vector<Candidate>& cands) {
  if (cands.empty()) throw InvalidArgument("best_candidate: empty candidate set");
  OptReport out;
  out.value = -1.0;
  for (const auto& c : cands) {
    const double v = std::abs(f(c.x));
    if (v > out.value) {
      out.value = v;
      out.x_best = c.x;
      out.provenance = c.provenance;
    }
  }
  out.candidates_evaluated = cands.size();
  return out;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::general: return "general";
    case Method::nnc: return "nnc";
    case Method::sparse: return "sparse";
  }
  return "unknown";
}

Method parse_method(const std::string& s) {
  if (s == "auto") return Method::automatic;
  if (s == "general") return Method::general;
  if (s == "nnc") return Method::nnc;
  if (s == "sparse") return Method::sparse;
  throw InvalidArgument("unknown method '" + s + "' (expected general, nnc, sparse or auto)");
}

OptReport optimize(const HomogPoly& f, int q, Method method, const GeneralOptions& opts, const Limits& limits) {
  const int d = f.degree();
  if (d < 1) throw InvalidArgument("optimize: degree must be >= 1");
  if (q < 1 || q % d != 0) throw InvalidArgument("q = " + std::to_string(q) + " is not a positive multiple of d = " + std::to_string(d));
  if (q % 2 != 0) throw InvalidArgument("q = " + std::to_string(q) + " must be even");
  if (d >= 3) reduced_degree(d, q);
  if (method == Method::nnc && !f.is_nonnegative()) throw InvalidArgument("method nnc requires non-negative coefficients");
  if (method == Method::automatic) {
    if (f.is_nonnegative()) {
      method = Method::nnc;
    } else if (f.size() < sparse_threshold(f.n())) {
      method = Method::sparse;
    } else {
      method = Method::general;
    }
  }
  const PolyClass cls = method == Method::nnc ? PolyClass::nnc : method == Method::sparse ? PolyClass::sparse : PolyClass::general;
  OptReport out;
  if (d == 1 || d == 2 || f.is_zero()) {
    Candidate c;
    c.provenance.kind = "exact";
    c.x = exact_vector(f);
    out = best_candidate(f, {c});
  } else {
    std::size_t grid_points = 0;
    std::vector<Candidate> cands;
    if (method == Method::nnc) {
      cands = nnc_candidates(f, q, limits);
      grid_points = cands.size();
    } else {
      cands = general_candidates(f, q, opts, limits, &grid_points);
      if (method == Method::sparse) {
        auto mono = monomial_candidates(f, limits);
        grid_points += mono.size();
        cands.insert(cands.end(), std::make_move_iterator(mono.begin()), std::make_move_iterator(mono.end()));
      }
    }
    out = best_candidate(f, cands);
    out.candidates_evaluated = grid_points;
  }
  out.method = to_string(method);
  out.q = q;
  out.upper = powered_upper_estimate(f, q, cls, limits);
  if (out.value > 0.0) out.ratio = out.upper->value / out.value;
  return out;
}

double weak_decoupling_expectation(const HomogPoly& f, const MultiIndex& alpha, const VecD& xbar, double p) {
  const int d = f.degree();
  const int t = alpha.degree();
  const int k = d - 2 * t;
  if (alpha.size() != f.n() || static_cast<std::size_t>(xbar.size()) != f.n()) throw InvalidArgument("weak decoupling: dimension mismatch");
  if (k < 0) throw InvalidArgument("weak decoupling: |alpha| exceeds d/2");
  const std::size_t n = f.n();
  const auto supp = alpha.support();
  std::vector<std::size_t> xs;
  for (std::size_t i = 0; i < n; ++i) {
    if (xbar(static_cast<Eigen::Index>(i)) != 0.0) xs.push_back(i);
  }
  std::size_t zeta_count = 1;
  for (std::size_t i : supp) zeta_count *= static_cast<std::size_t>(2 * alpha[i] + 1);
  const double norm = 1.0 / (static_cast<double>(k + 1) * static_cast<double>(zeta_count));
  Complex total(0.0);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << xs.size()); ++m) {
    const int ones = std::popcount(m);
    const double weight = std::pow(p, ones) * std::pow(1.0 - p, static_cast<double>(xs.size()) - ones);
    if (weight == 0.0) continue;
    for (int xi = 0; xi <= k; ++xi) {
      const Complex big_xi = root_of_unity(xi, k + 1);
      for (std::size_t zc = 0; zc < zeta_count; ++zc) {
        VecC z = VecC::Zero(static_cast<Eigen::Index>(n));
        Complex phase = big_xi;
        std::size_t rest = zc;
        for (std::size_t i : supp) {
          const int order = 2 * alpha[i] + 1;
          const Complex zeta = root_of_unity(static_cast<int>(rest % static_cast<std::size_t>(order)), order);
          rest /= static_cast<std::size_t>(order);
          z(static_cast<Eigen::Index>(i)) += zeta * std::sqrt(static_cast<double>(alpha[i]) / t);
          phase *= zeta;
        }
        for (std::size_t bit = 0; bit < xs.size(); ++bit) {
          if (!((m >> bit) & 1u)) continue;
          const std::size_t i = xs[bit];
          z(static_cast<Eigen::Index>(i)) += big_xi * xbar(static_cast<Eigen::Index>(i)) / (2.0 * alpha[i] + 1.0);
        }
        total += weight * norm * f(z) * phase;
      }
    }
  }
  return total.real();
}

WeakDecoupling weak_decoupling_lift(const HomogPoly& f, const MultiIndex& alpha, const VecD& xbar, int cheb_grid) {
  const int d = f.degree();
  const int t = alpha.degree();
  WeakDecoupling out;
  out.k = d - 2 * t;
  if (out.k < 0) throw InvalidArgument("weak decoupling: |alpha| exceeds d/2");
  const auto parts = multilinear_parts(f);
  double scale = 1.0;
  for (std::size_t i : alpha.support()) scale *= std::pow(static_cast<double>(alpha[i]) / t, alpha[i]);
  auto it = parts.find(alpha);
  out.leading = it == parts.end() ? 0.0 : std::abs(it->second(xbar)) * scale;
  const auto cheb = cheb_extract([&](double p) { return weak_decoupling_expectation(f, alpha, xbar, p); }, out.k,
                                 std::max(cheb_grid, std::max(2, 4 * out.k)));
  out.p = cheb.p;
  out.expectation = cheb.value;
  // Best realisation among masks with positive probability at p*.
  const std::size_t n = f.n();
  const auto supp = alpha.support();
  std::vector<std::size_t> xs;
  for (std::size_t i = 0; i < n; ++i) {
    if (xbar(static_cast<Eigen::Index>(i)) != 0.0) xs.push_back(i);
  }
  std::size_t zeta_count = 1;
  for (std::size_t i : supp) zeta_count *= static_cast<std::size_t>(2 * alpha[i] + 1);
  double best = -1.0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << xs.size()); ++m) {
    const int ones = std::popcount(m);
    if ((out.p == 0.0 && ones > 0) || (out.p == 1.0 && ones < static_cast<int>(xs.size()))) continue;
    for (int xi = 0; xi <= out.k; ++xi) {
      const Complex big_xi = root_of_unity(xi, out.k + 1);
      for (std::size_t zc = 0; zc < zeta_count; ++zc) {
        VecC z = VecC::Zero(static_cast<Eigen::Index>(n));
        std::size_t rest = zc;
        for (std::size_t i : supp) {
          const int order = 2 * alpha[i] + 1;
          z(static_cast<Eigen::Index>(i)) += root_of_unity(static_cast<int>(rest % static_cast<std::size_t>(order)), order) *
                                             std::sqrt(static_cast<double>(alpha[i]) / t);
          rest /= static_cast<std::size_t>(order);
        }
        for (std::size_t bit = 0; bit < xs.size(); ++bit) {
          if ((m >> bit) & 1u) z(static_cast<Eigen::Index>(xs[bit])) += big_xi * xbar(static_cast<Eigen::Index>(xs[bit])) / (2.0 * alpha[xs[bit]] + 1.0);
        }
        const double norm = z.norm();
        if (norm == 0.0) continue;
        const double v = std::abs(f(z)) / std::pow(norm, d);
        if (v > best) {
          best = v;
          out.z = z / norm;
        }
      }
    }
  }
  if (best < 0.0) out.z = VecC::Unit(static_cast<Eigen::Index>(n), 0);
  out.real = complex_to_real(f, out.z);
  return out;
}

}  // namespace spherex
