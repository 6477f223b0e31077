#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "spherex/oracle.hpp"
#include "spherex/rounding.hpp"

using namespace spherex;
using th::poly;

namespace {

MatD random_sym(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatD m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  }
  return m;
}

HomogPoly quadratic_poly(const MatD& q) {
  HomogPoly f(static_cast<std::size_t>(q.rows()), 2);
  const auto n = static_cast<std::size_t>(q.rows());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double c = i == j ? q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))
                              : 2 * q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      f.add_term(MultiIndex::unit(n, i) + MultiIndex::unit(n, j), c);
    }
  }
  return f;
}

// max over theta of lambda_max(A cos + B sin) by a fine scan.
double theta_scan(const MatD& a, const MatD& b, int steps) {
  double best = -1e300;
  for (int j = 0; j < steps; ++j) {
    const double t = 2 * std::numbers::pi * j / steps;
    best = std::max(best, lambda_max(MatD(std::cos(t) * a + std::sin(t) * b)).value);
  }
  return best;
}

}  // namespace

TEST_CASE("quad_argmax examples") {
  const auto id = quad_argmax(MatD::Identity(3, 3));
  CHECK(id.value == doctest::Approx(1.0));
  MatD q = MatD::Zero(2, 2);
  q(0, 0) = 3;
  q(1, 1) = -5;
  const auto r = quad_argmax(q);
  CHECK(r.value == doctest::Approx(5.0));
  CHECK(std::abs(r.x(1)) == doctest::Approx(1.0));
  MatD bad = MatD::Zero(2, 2);
  bad(0, 1) = 1;
  CHECK_THROWS_AS(quad_argmax(bad), InvalidArgument);
}

TEST_CASE("quad_argmax agrees with brute force on quadratics") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    const MatD q = random_sym(4, rng);
    const auto r = quad_argmax(q);
    const HomogPoly f = quadratic_poly(q);
    CHECK(std::abs(r.value - brute_norm2(f, 50, 2000, 1e-12, 1000 + t).value) <= 1e-8);
    CHECK(std::abs(std::abs(f(r.x)) - r.value) <= 1e-10);
    CHECK(quadratic_matrix(f).isApprox(q, 1e-14));
  }
}

TEST_CASE("complex_quad_argmax examples") {
  std::mt19937_64 rng(5);
  const MatD a = random_sym(4, rng);
  const MatD zero = MatD::Zero(4, 4);
  CHECK(complex_quad_argmax(a, zero).value == doctest::Approx(quad_argmax(a).value).epsilon(1e-10));
  CHECK(complex_quad_argmax(zero, MatD::Identity(4, 4)).value == doctest::Approx(1.0));
  MatD e11 = MatD::Zero(2, 2), e22 = MatD::Zero(2, 2);
  e11(0, 0) = 1;
  e22(1, 1) = 1;
  CHECK(complex_quad_argmax(e11, e22).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(complex_quad_argmax(a, zero, 4), InvalidArgument);
}

TEST_CASE("complex_quad_argmax within the interpolation bound") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const MatD a = random_sym(4, rng), b = random_sym(4, rng);
    const double exact = theta_scan(a, b, 20000);
    const auto r = complex_quad_argmax(a, b, 16);
    const double slack = 1.0 - std::pow(std::numbers::pi / 16, 2) / 2;
    CHECK(r.value >= slack * exact - 1e-9);
    CHECK(r.value <= exact + 1e-6);
    CHECK(r.x.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("decouple examples and permutation invariance") {
  const auto d = decouple(poly({{{1, 1}, 1.0}}), {th::vec({1, 0}), th::vec({0, 1})});
  CHECK(d.value == doctest::Approx(0.5));
  const VecD x = th::vec({0.6, 0.8});
  const HomogPoly f = poly({{{3, 0}, 1.0}, {{1, 2}, -2.0}});
  const auto same = decouple(f, {x, x, x});
  CHECK(same.x.isApprox(x));
  CHECK(same.value == doctest::Approx(std::abs(f(x))));
  CHECK_THROWS_AS(decouple(f, {x, x}), InvalidArgument);

  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    const HomogPoly g = random_poly(3, 4, rng);
    std::vector<VecD> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(random_unit(3, rng));
    const double base = decouple(g, xs).value;
    std::vector<int> perm{0, 1, 2, 3};
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<VecD> ys;
      for (int i : perm) ys.push_back(xs[static_cast<std::size_t>(i)]);
      CHECK(std::abs(decouple(g, ys).value - base) <= 1e-12 * std::max(1.0, base));
    }
  }
}

TEST_CASE("decouple bound against the polarized tensor") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 30; ++t) {
    const int d = 2 + t % 3;
    const HomogPoly g = random_poly(3, d, rng);
    std::vector<VecD> xs;
    for (int i = 0; i < d; ++i) xs.push_back(random_unit(3, rng));
    const double tensor = std::abs(polarize(g, xs));
    // Rademacher identity: E[prod s_i f(sum s_i x_i)] = d! <A, x1 ... xd> and
    // |sum s_i x_i| <= d, so the best pattern reaches d! / d^d of it.
    double factorial = 1;
    for (int i = 2; i <= d; ++i) factorial *= i;
    CHECK(decouple(g, xs).value >= factorial / std::pow(d, d) * tensor - 1e-12);
  }
}

TEST_CASE("complex_to_real examples") {
  const HomogPoly f = poly({{{2, 0}, 1.0}, {{0, 2}, -1.0}});
  VecC z(2);
  z << Complex(1, 0), Complex(0, 1);
  z /= std::sqrt(2.0);
  CHECK(std::abs(f(z)) == doctest::Approx(1.0));
  const auto r = complex_to_real(f, z);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(std::abs(f(r.x)) == doctest::Approx(1.0));

  const VecD x = th::vec({0.6, -0.8});
  const auto same = complex_to_real(f, x.cast<Complex>());
  CHECK(same.x == x);
  CHECK(complex_to_real(HomogPoly(2, 2), z).value == 0.0);
}

TEST_CASE("complex_to_real respects its provable constant") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int t = 0; t < 40; ++t) {
    const int d = 2 + t % 4;
    const HomogPoly f = random_poly(3, d, rng);
    VecC z(3);
    for (Eigen::Index i = 0; i < 3; ++i) z(i) = Complex(g(rng), g(rng));
    z /= z.norm();
    const auto r = complex_to_real(f, z);
    CHECK(r.x.norm() == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(std::abs(f(r.x))));
    CHECK(r.value >= std::abs(f(z)) / std::pow(2.0, kComplexToRealExponent * d) - 1e-12);
  }
}

TEST_CASE("cheb_extract examples") {
  for (int t = 1; t <= 6; ++t) {
    const auto r = cheb_extract([t](double p) { return std::pow(p, t); }, t, 4 * t);
    CHECK(r.p == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(1.0));
  }
  const auto c = cheb_extract([](double) { return -2.5; }, 0, 8);
  CHECK(c.value == doctest::Approx(2.5));
  CHECK_THROWS_AS(cheb_extract([](double p) { return p; }, 3, 8), InvalidArgument);
}

TEST_CASE("cheb_extract against a dense scan") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> c(6);
    for (double& v : c) v = g(rng);
    auto p = [&](double x) {
      double acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
      return acc;
    };
    double dense = 0;
    for (int j = 0; j <= 100000; ++j) dense = std::max(dense, std::abs(p(j / 100000.0)));
    const auto r = cheb_extract(p, 5, 20);
    CHECK(std::abs(r.value - dense) <= 1e-3);
    CHECK(r.value >= 2 * std::abs(c[5]) / std::pow(4.0, 5) - 1e-12);
  }
}

TEST_CASE("nnc candidates") {
  const HomogPoly f = th::x1x2x3x4();
  const auto cands = nnc_candidates(f, 4);
  // alpha over |alpha| <= 1 (5 choices), gamma over the remaining degree.
  CHECK(cands.size() == 1 * 4 + 4 * 1);
  bool found = false;
  for (const auto& c : cands) {
    CHECK(c.x.norm() == doctest::Approx(1.0));
    if (c.provenance.alpha == MultiIndex{1, 0, 0, 0} && c.provenance.gamma.degree() == 0) {
      found = true;
      const VecD b = th::vec({1.5, 0.5, 0.5, 0.5});
      VecD w = quad_argmax(quadratic_matrix(quadratic_fold(f).at(b))).x;
      if (w.dot(b) < 0) w = -w;
      CHECK(c.x.isApprox((b + w).normalized(), 1e-12));
    }
  }
  CHECK(found);
  const auto best = best_candidate(f, cands);
  CHECK(best.value >= 1.0 / 16 / std::pow(2.0, 4 * kComplexToRealExponent));
  CHECK(best.value <= 1.0 / 16 + 1e-12);

  const auto one = nnc_candidates(poly({{{4}, 1.0}}), 4);
  for (const auto& c : one) CHECK(std::abs(c.x(0)) == doctest::Approx(1.0));
  CHECK(best_candidate(HomogPoly(3, 4), nnc_candidates(HomogPoly(3, 4), 4)).value == 0.0);
  CHECK_THROWS_AS(nnc_candidates(poly({{{4, 0}, 1.0}, {{2, 2}, -1.0}}), 4), InvalidArgument);
  CHECK_THROWS_AS(nnc_candidates(f, 6), InvalidArgument);
  Limits tight;
  tight.max_candidates = 3;
  CHECK_THROWS_AS(nnc_candidates(f, 4, tight), CapacityError);
}

TEST_CASE("general candidates") {
  const HomogPoly f = poly({{{2, 2}, 1.0}});
  std::size_t points = 0;
  const auto cands = general_candidates(f, 8, {}, Limits::defaults(), &points);
  CHECK(!cands.empty());
  CHECK(points == cands.size() * 33 * 33);
  const auto best = best_candidate(f, cands);
  CHECK(best.value <= 0.25 + 1e-12);
  CHECK(best.value >= 0.25 / std::pow(2.0, 4 * kComplexToRealExponent));
  for (const auto& c : cands) CHECK(c.x.norm() == doctest::Approx(1.0));

  for (const auto& c : general_candidates(poly({{{5}, 2.0}}), 10)) CHECK(std::abs(c.x(0)) == doctest::Approx(1.0));
  CHECK(best_candidate(HomogPoly(2, 4), general_candidates(HomogPoly(2, 4), 4)).value == 0.0);
  CHECK_THROWS_AS(general_candidates(f, 6), InvalidArgument);
  Limits tight;
  tight.max_candidates = 10;
  CHECK_THROWS_AS(general_candidates(f, 8, {}, tight), CapacityError);
}

TEST_CASE("candidate sets are deterministic and replayable") {
  std::mt19937_64 rng(41);
  const HomogPoly f = random_poly(3, 4, rng);
  GeneralOptions opts;
  opts.c_grid = 9;
  const auto a = general_candidates(f, 4, opts);
  const auto b = general_candidates(f, 4, opts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(replay(f, a[i].provenance, opts) == a[i].x);
  }
  const HomogPoly g = random_poly(3, 4, rng, CoeffKind::nonnegative);
  for (const auto& c : nnc_candidates(g, 4)) CHECK(replay(g, c.provenance) == c.x);
  for (const auto& c : monomial_candidates(f)) CHECK(replay(f, c.provenance) == c.x);
}

TEST_CASE("monomial candidates") {
  const HomogPoly f = poly({{{2, 1, 0}, 1.0}, {{0, 0, 3}, 1.0}});
  const auto cands = monomial_candidates(f);
  CHECK(cands.size() == 2 + 1);
  for (const auto& c : cands) {
    CHECK(c.x.norm() == doctest::Approx(1.0));
    CHECK(c.x(static_cast<Eigen::Index>(c.provenance.gamma.support().front())) > 0);
  }
}

TEST_CASE("best_candidate picks the first maximum") {
  const HomogPoly f = poly({{{3, 0}, 1.0}});
  const std::vector<Candidate> two{{th::vec({1, 0}), {}}, {th::vec({0, 1}), {}}};
  CHECK(best_candidate(f, two).x_best == th::vec({1, 0}));
  std::vector<Candidate> tie{{th::vec({1, 0}), {}}, {th::vec({-1, 0}), {}}};
  tie[0].provenance.kind = "a";
  tie[1].provenance.kind = "b";
  CHECK(best_candidate(f, tie).provenance.kind == "a");
  CHECK_THROWS_AS(best_candidate(f, {}), InvalidArgument);

  std::mt19937_64 rng(43);
  const HomogPoly g = random_poly(4, 3, rng);
  std::vector<Candidate> many;
  for (int i = 0; i < 100; ++i) many.push_back({random_unit(4, rng), {}});
  std::size_t pick = 0;
  for (std::size_t i = 1; i < many.size(); ++i) {
    if (std::abs(g(many[i].x)) > std::abs(g(many[pick].x))) pick = i;
  }
  CHECK(best_candidate(g, many).x_best == many[pick].x);
}

TEST_CASE("optimize examples") {
  const auto sq = optimize(poly({{{2}, 1.0}}), 2);
  CHECK(sq.value == doctest::Approx(1.0));
  CHECK(sq.upper->value == doctest::Approx(1.0));
  CHECK(*sq.ratio == doctest::Approx(1.0));

  const auto m = optimize(th::x1x2x3x4(), 4, Method::nnc);
  CHECK(m.method == "nnc");
  CHECK(m.value >= 1.0 / 16 / std::pow(2.0, 4 * kComplexToRealExponent));
  CHECK(m.upper->value >= 1.0 / 16 - 1e-12);
  CHECK(m.candidates_evaluated == 8);
  CHECK(std::abs(m.value - std::abs(th::x1x2x3x4()(m.x_best))) <= 1e-12);
  CHECK(std::abs(m.x_best.norm() - 1.0) <= 1e-12);

  CHECK(optimize(th::x1x2x3x4(), 4).method == "nnc");
  CHECK(optimize(poly({{{2, 2, 0, 0, 0}, 1.0}, {{0, 1, 3, 0, 0}, -1.0}}), 4).method == "sparse");
  const auto zero = optimize(HomogPoly(2, 4), 4);
  CHECK(zero.value == 0.0);
  CHECK(!zero.ratio);
  CHECK_THROWS_AS(optimize(poly({{{4, 0}, 1.0}, {{2, 2}, -1.0}}), 4, Method::nnc), InvalidArgument);
  CHECK_THROWS_AS(optimize(th::x1x2x3x4(), 6), InvalidArgument);
  CHECK_THROWS_AS(parse_method("fast"), InvalidArgument);
  CHECK(parse_method("auto") == Method::automatic);
}

TEST_CASE("optimize reports are sound against the oracle") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 12; ++t) {
    const bool nnc = t % 2 == 0;
    const int d = t % 3 == 2 ? 3 : 4;
    const HomogPoly f = random_poly(3, d, rng, nnc ? CoeffKind::nonnegative : CoeffKind::general);
    GeneralOptions opts;
    opts.c_grid = 9;
    const auto r = optimize(f, d == 3 ? 6 : 4, nnc ? Method::nnc : Method::general, opts);
    const double oracle = brute_norm2(f, 50, 2000, 1e-10, 77 + t).value;
    CHECK(r.value <= oracle + 1e-9);
    CHECK(std::abs(r.value - std::abs(f(r.x_best))) <= 1e-12);
    CHECK(std::abs(r.x_best.norm() - 1.0) <= 1e-12);
    if (nnc || d % 2 == 1) CHECK(r.upper->value >= oracle - 1e-9);
  }
}

TEST_CASE("weak decoupling expectation has the predicted leading coefficient") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 6; ++t) {
    const HomogPoly f = random_poly(3, 4, rng);
    const MultiIndex alpha = t % 2 == 0 ? MultiIndex{1, 0, 0} : MultiIndex{0, 0, 0};
    const VecD xbar = th::vec({0.5, -0.5, std::sqrt(0.5)});
    const auto w = weak_decoupling_lift(f, alpha, xbar);
    // E(p) has degree k; recover p^k by a k-th finite difference.
    const int k = w.k;
    double diff = 0;
    for (int j = 0; j <= k; ++j) {
      double binom = 1;
      for (int i = 1; i <= j; ++i) binom = binom * (k - i + 1) / i;
      diff += ((k - j) % 2 == 0 ? 1 : -1) * binom * weak_decoupling_expectation(f, alpha, xbar, static_cast<double>(j) / k);
    }
    double kfact = 1;
    for (int i = 2; i <= k; ++i) kfact *= i;
    const double lead = std::abs(diff) * std::pow(k, k) / kfact;
    CHECK(lead == doctest::Approx(w.leading).epsilon(1e-8));
    CHECK(w.expectation >= 2 * w.leading / std::pow(4.0, k) - 1e-9);
    CHECK(w.real.x.norm() == doctest::Approx(1.0));
    CHECK(w.real.value == doctest::Approx(std::abs(f(w.real.x))));
  }
}
