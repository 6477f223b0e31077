#include <doctest.h>

#include "helpers.hpp"
#include "spherex/decompose.hpp"

using namespace spherex;
using th::poly;

TEST_CASE("multilinear parts examples") {
  auto parts = multilinear_parts(poly({{{1, 1}, 3.0}}));
  REQUIRE(parts.size() == 1);
  CHECK(parts.begin()->first == MultiIndex{0, 0});
  CHECK(parts.begin()->second == poly({{{1, 1}, 3.0}}));

  parts = multilinear_parts(poly({{{4, 0}, 1.0}}));
  REQUIRE(parts.size() == 1);
  CHECK(parts.begin()->first == MultiIndex{2, 0});
  CHECK(parts.begin()->second.degree() == 0);
  CHECK(parts.begin()->second.coeff(MultiIndex{0, 0}) == 1.0);

  parts = multilinear_parts(poly({{{3, 1}, 1.0}}));
  REQUIRE(parts.size() == 1);
  CHECK(parts.begin()->first == MultiIndex{1, 0});
  CHECK(parts.begin()->second == poly({{{1, 1}, 1.0}}));
}

TEST_CASE("multilinear parts reconstruct f") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    const int d = 1 + (trial / 5) % 6;
    const HomogPoly f = random_poly(n, d, rng);
    const auto parts = multilinear_parts(f);
    for (const auto& [alpha, g] : parts) {
      CHECK(g.is_multilinear());
      CHECK(g.degree() == d - 2 * alpha.degree());
    }
    for (int s = 0; s < 50; ++s) {
      const VecD x = VecD::Random(static_cast<Eigen::Index>(n));
      CHECK(th::rel_close(eval_parts(parts, x), f(x), 1e-10));
    }
  }
}

TEST_CASE("collapse examples") {
  const HomogPoly f = th::x1x2x3x4();
  CHECK(collapse(f, 0) == f);
  const HomogPoly g = poly({{{2, 1}, 1.0}, {{1, 2}, 1.0}});
  CHECK(collapse(g, 1) == poly({{{2, 0}, 1.0}, {{1, 1}, 2.0}, {{0, 2}, 1.0}}));
  CHECK(collapse(HomogPoly(3, 4), 2).is_zero());
  CHECK_THROWS_AS(collapse(g, 4), InvalidArgument);
}

TEST_CASE("iterated collapse counts each split of the removed index") {
  // collapse(collapse(f,j),k)_gamma = sum_{|a|=j+k} f_{gamma+a} * #{a1 <= a : |a1| = j}.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const HomogPoly f = random_poly(n, 5, rng);
    for (int j = 0; j <= 2; ++j) {
      for (int k = 0; k <= 2; ++k) {
        const HomogPoly twice = collapse(collapse(f, j), k);
        HomogPoly expected(n, 5 - j - k);
        for (const auto& [beta, c] : f.terms()) {
          for_each_sub_index(beta, j + k, [&](const MultiIndex& a) {
            int splits = 0;
            for_each_sub_index(a, j, [&](const MultiIndex&) { ++splits; });
            expected.add_term(beta - a, c * splits);
          });
        }
        CHECK(max_abs_coeff(twice - expected) < 1e-12);
        if (j == 0 || k == 0 || n == 1) {
          CHECK(max_abs_coeff(twice - collapse(f, j + k)) < 1e-12);
        }
      }
    }
  }
  // The plain composition law fails as soon as two variables meet.
  const HomogPoly xy = poly({{{1, 1}, 1.0}});
  CHECK(collapse(collapse(xy, 1), 1).coeff(MultiIndex{0, 0}) == 2.0);
  CHECK(collapse(xy, 2).coeff(MultiIndex{0, 0}) == 1.0);
}

TEST_CASE("folded collapse sums folds") {
  FoldedPoly<double> h(2, 2, 1);
  h.add_fold(MultiIndex{2, 0}, poly({{{1, 0}, 1.0}}));
  h.add_fold(MultiIndex{1, 1}, poly({{{0, 1}, 2.0}}));
  const auto c = collapse(h, 1);
  CHECK(c.d1 == 1);
  CHECK(*c.fold(MultiIndex{1, 0}) == poly({{{1, 0}, 1.0}, {{0, 1}, 2.0}}));
  CHECK(*c.fold(MultiIndex{0, 1}) == poly({{{0, 1}, 2.0}}));
}

TEST_CASE("fold_quadratic of x1x2x3x4") {
  const auto h = fold_quadratic(th::x1x2x3x4());
  CHECK(h.d1 == 2);
  CHECK(h.d2 == 2);
  const auto* fold = h.fold(MultiIndex{1, 1, 0, 0});
  REQUIRE(fold != nullptr);
  CHECK(fold->size() == 1);
  CHECK(fold->coeff(MultiIndex{0, 0, 1, 1}) == doctest::Approx(1.0 / 6));
  CHECK(max_abs_coeff(unfold(h) - th::x1x2x3x4()) < 1e-15);

  const auto paper = fold_quadratic(th::x1x2x3x4(), FoldScaling::paper_scaled);
  CHECK(paper.fold(MultiIndex{1, 1, 0, 0})->coeff(MultiIndex{0, 0, 1, 1}) == doctest::Approx(1.0 / 24));
}

TEST_CASE("fold blocks agree with the sos matrix at every split") {
  std::mt19937_64 rng(8);
  const HomogPoly f = random_poly(3, 6, rng);
  const auto m = sos_matrix(f);
  const auto h = fold_quadratic(f, FoldScaling::paper_scaled);
  const std::size_t n = 3;
  // Every (I, J) with alpha(I) + alpha(J) = beta yields the same block.
  for (std::size_t ri = 0; ri < 9; ++ri) {
    for (std::size_t rj = 0; rj < 9; ++rj) {
      const auto i = index_tuple(ri, n, 2);
      const auto j = index_tuple(rj, n, 2);
      const MultiIndex beta = MultiIndex::from_tuple(n, i) + MultiIndex::from_tuple(n, j);
      MatD block(3, 3);
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          auto ia = i;
          ia.push_back(a);
          auto jb = j;
          jb.push_back(b);
          block(a, b) = m.entries(static_cast<Eigen::Index>(tuple_index(ia, n)), static_cast<Eigen::Index>(tuple_index(jb, n)));
        }
      }
      const auto* fold = h.fold(beta);
      const double orbit = static_cast<double>(orbit_size(beta));
      for (int s = 0; s < 3; ++s) {
        const VecD x = VecD::Random(3);
        const double expected = x.dot(block * x) / orbit;
        CHECK(std::abs((fold == nullptr ? 0.0 : (*fold)(x)) - expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("fold round trips") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    const int d = 4 + 2 * (trial % 2);
    const HomogPoly f = random_poly(n, d, rng);
    const HomogPoly back = unfold(fold_quadratic(f));
    for (int s = 0; s < 5; ++s) {
      const VecD x = VecD::Random(static_cast<Eigen::Index>(n));
      CHECK(th::rel_close(back(x), f(x), 1e-10));
    }
    const auto split = fold_split(f, 2);
    const auto quad = fold_quadratic(f);
    CHECK(split.folds.size() == quad.folds.size());
    for (const auto& [beta, p] : quad.folds) {
      REQUIRE(split.fold(beta) != nullptr);
      CHECK(max_abs_coeff(p - *split.fold(beta)) < 1e-12);
    }
  }
  std::mt19937_64 rrng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const RationalPoly f = random_rational_poly(3, 4 + 2 * (trial % 2), rrng);
    CHECK(unfold(fold_quadratic(f)) == f);
    CHECK(unfold(fold_split(f, 2)) == f);
  }
  const RationalPoly odd = random_rational_poly(3, 5, rrng);
  CHECK(unfold(fold_split(odd, 2)) == odd);
  CHECK(fold_quadratic(HomogPoly(3, 4)).folds.empty());
  CHECK_THROWS_AS(fold_quadratic(poly({{{2, 1}, 1.0}})), InvalidArgument);
  CHECK_THROWS_AS(fold_quadratic(poly({{{1, 1}, 1.0}})), InvalidArgument);
}

TEST_CASE("paper scaling does not unfold to f") {
  const HomogPoly f = poly({{{2, 2}, 1.0}});
  const HomogPoly back = unfold(fold_quadratic(f, FoldScaling::paper_scaled));
  CHECK_FALSE(th::rel_close(back(th::vec({1.0, 1.0})), 1.0, 1e-6));
}

TEST_CASE("unfold examples") {
  FoldedPoly<double> h(1, 2, 0);
  h.add_fold(MultiIndex{2}, HomogPoly::constant(1, 1.0));
  CHECK(unfold(h) == poly({{{2}, 1.0}}));
  CHECK(unfold(FoldedPoly<double>(3, 2, 2)).is_zero());
}

TEST_CASE("folded powers") {
  std::mt19937_64 rng(17);
  const HomogPoly f = random_poly(3, 4, rng);
  const auto h = fold_quadratic(f);
  const auto h1 = folded_power(h, 1);
  CHECK(unfold(h1) == unfold(h));
  const auto h2 = folded_power(h, 2);
  CHECK(h2.d1 == 4);
  CHECK(h2.d2 == 4);
  const HomogPoly f2 = pow(unfold(h), 2);
  for (int s = 0; s < 20; ++s) {
    const VecD x = VecD::Random(3);
    CHECK(th::rel_close(unfold(h2)(x), f2(x), 1e-10));
  }
  FoldedPoly<double> single(2, 1, 1);
  single.add_fold(MultiIndex{1, 0}, poly({{{0, 1}, 2.0}}));
  const auto cube = folded_power(single, 3);
  REQUIRE(cube.folds.size() == 1);
  CHECK(cube.folds.begin()->first == MultiIndex{3, 0});
  CHECK(cube.folds.begin()->second == poly({{{0, 3}, 8.0}}));
  Limits tiny;
  tiny.max_terms = 3;
  CHECK_THROWS_AS(folded_power(h, 2, tiny), CapacityError);
}

TEST_CASE("folded multilinear parts") {
  FoldedPoly<double> ml(3, 2, 1);
  ml.add_fold(MultiIndex{1, 1, 0}, poly({{{0, 0, 1}, 1.0}}));
  auto parts = folded_multilinear_parts(ml);
  REQUIRE(parts.size() == 1);
  CHECK(parts.begin()->first == MultiIndex{0, 0, 0});

  FoldedPoly<double> sq(2, 2, 1);
  const HomogPoly p = poly({{{0, 1}, 3.0}});
  sq.add_fold(MultiIndex{2, 0}, p);
  parts = folded_multilinear_parts(sq);
  REQUIRE(parts.size() == 1);
  CHECK(parts.begin()->first == MultiIndex{1, 0});
  CHECK(parts.begin()->second.d1 == 0);
  CHECK(*parts.begin()->second.fold(MultiIndex{0, 0}) == p);

  std::mt19937_64 rng(19);
  const auto h = folded_power(fold_quadratic(random_poly(3, 4, rng)), 2);
  const auto split = folded_multilinear_parts(h);
  for (int s = 0; s < 20; ++s) {
    const VecD x = VecD::Random(3);
    double total = 0.0;
    for (const auto& [alpha, part] : split) total += HomogPoly::monomial(alpha.scaled(2))(x) * eval_folded(part, x);
    CHECK(th::rel_close(total, eval_folded(h, x), 1e-10));
  }
}

TEST_CASE("evaluating the monomial side of a fold") {
  std::mt19937_64 rng(23);
  const HomogPoly f = random_poly(3, 4, rng);
  const auto h = fold_quadratic(f);
  const VecD x = VecD::Random(3);
  CHECK(th::rel_close(h.at(x)(x), f(x), 1e-12));
}
