#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace delta_simplex;

TEST(Det, SmallExamples) {
  EXPECT_EQ(det(IntMatrix::identity(3)), 1);
  EXPECT_EQ(det(IntMatrix{{1, 0}, {1, 2}}), 2);
  EXPECT_EQ(det(IntMatrix{{0, 1}, {1, 0}}), -1);
  EXPECT_EQ(det(IntMatrix{{1, 2}, {2, 4}}), 0);
  EXPECT_EQ(det(IntMatrix(0, 0)), 1);
  EXPECT_THROW(det(IntMatrix(2, 3)), ShapeError);
}

TEST(Det, MatchesCofactorExpansion) {
  oracle::Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.uniform(1, 6);
    const IntMatrix m = oracle::random_matrix(rng, n, n, 9);
    ASSERT_EQ(det(m), oracle::det_cofactor(m)) << m;
  }
}

TEST(Det, RankDeficientIsZero) {
  oracle::Rng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.uniform(2, 5);
    IntMatrix m = oracle::random_matrix(rng, n, n, 5);
    const std::size_t a = rng.uniform(0, n - 1), b = (a + 1) % n;
    for (std::size_t j = 0; j < n; ++j) m(b, j) = 3 * m(a, j);
    EXPECT_EQ(det(m), 0);
  }
}

TEST(Adjugate, Examples) {
  EXPECT_EQ(adjugate(IntMatrix::identity(3)), IntMatrix::identity(3));
  EXPECT_EQ(adjugate(IntMatrix{{1, 0}, {1, 2}}), (IntMatrix{{2, 0}, {-1, 1}}));
  const IntMatrix singular{{1, 2}, {2, 4}};
  EXPECT_EQ(singular * adjugate(singular), IntMatrix(2, 2));
}

TEST(Adjugate, ProductIsDeterminantTimesIdentity) {
  oracle::Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.uniform(1, 5);
    const IntMatrix m = oracle::random_matrix(rng, n, n, 7);
    const IntMatrix a = adjugate(m);
    const IntMatrix want = det(m) * IntMatrix::identity(n);
    EXPECT_EQ(m * a, want);
    EXPECT_EQ(a * m, want);
  }
}

TEST(Unimodular, Examples) {
  EXPECT_TRUE(is_unimodular(IntMatrix::identity(4)));
  EXPECT_TRUE(is_unimodular(IntMatrix{{1, 1}, {0, 1}}));
  EXPECT_FALSE(is_unimodular(IntMatrix{{2, 0}, {0, 1}}));
  EXPECT_FALSE(is_unimodular(IntMatrix(2, 3)));
  oracle::Rng rng(104);
  for (int trial = 0; trial < 50; ++trial) {
    const IntMatrix u = oracle::random_unimodular(rng, rng.uniform(1, 5));
    ASSERT_TRUE(is_unimodular(u));
    EXPECT_EQ(u * unimodular_inverse(u), IntMatrix::identity(u.rows()));
  }
  EXPECT_THROW(unimodular_inverse(IntMatrix{{2}}), PreconditionError);
}

TEST(Hnf, Examples) {
  const IntMatrix already{{1, 0}, {1, 2}};
  const auto r = hnf(already);
  EXPECT_EQ(r.H, already);
  EXPECT_EQ(r.Q, IntMatrix::identity(2));

  const IntMatrix swap{{0, 1}, {1, 0}};
  const auto s = hnf(swap);
  EXPECT_EQ(s.H, IntMatrix::identity(2));
  EXPECT_EQ(s.Q, swap);

  EXPECT_THROW(hnf(IntMatrix{{1, 2}, {2, 4}, {1, 1}}), RankError);
  EXPECT_THROW(hnf(IntMatrix(1, 2)), RankError);
}

TEST(Hnf, DecompositionProperties) {
  oracle::Rng rng(105);
  int done = 0;
  while (done < 200) {
    const std::size_t n = rng.uniform(1, 5);
    const IntMatrix a = oracle::random_matrix(rng, n + 1, n, 6);
    std::vector<std::size_t> top_rows(n);
    std::iota(top_rows.begin(), top_rows.end(), 0);
    if (det(a.select_rows(top_rows)) == 0) continue;
    ++done;
    const auto r = hnf(a);
    ASSERT_EQ(r.H * r.Q, a);
    ASSERT_EQ(a * r.Q_inv, r.H);
    ASSERT_EQ(r.Q * r.Q_inv, IntMatrix::identity(n));
    ASSERT_TRUE(is_unimodular(r.Q));
    IntMatrix top(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) top(i, j) = r.H(i, j);
    ASSERT_TRUE(is_hnf(top));
    // idempotent, and unique on the class A * U
    EXPECT_EQ(hnf(r.H).H, r.H);
    const IntMatrix u = oracle::random_unimodular(rng, n);
    EXPECT_EQ(hnf(a * u).H, r.H);
  }
}

TEST(Hnf, MaxNormBoundedByDeltaWhenTopMinorIsMaximal) {
  oracle::Rng rng(106);
  int done = 0;
  while (done < 200) {
    const std::size_t n = rng.uniform(1, 4);
    const IntMatrix a = oracle::random_matrix(rng, n + 1, n, 5);
    const auto minors = max_minors(a);
    const Integer delta = max_abs_minor(minors);
    // the base without the last row comes first
    if (delta == 0 || abs(minors.front().minor) != delta) continue;
    ++done;
    EXPECT_LE(hnf(a).H.max_abs(), delta) << a;
  }
}

TEST(SolveRational, Examples) {
  const IntVector b{5, -7, 2};
  const auto x = solve_rational(IntMatrix::identity(3), b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(x[i], Rational(b[i]));
  const auto y = solve_rational(IntMatrix{{1, 0}, {1, 2}}, IntVector{0, 1});
  EXPECT_EQ(y[0], Rational(0));
  EXPECT_EQ(y[1], Rational(1, 2));
  EXPECT_EQ(solve_rational(IntMatrix{{2}}, IntVector{1})[0], Rational(1, 2));
  EXPECT_THROW(solve_rational(IntMatrix{{1, 2}, {2, 4}}, IntVector{1, 1}), SingularError);
}

TEST(SolveRational, SolutionSatisfiesSystem) {
  oracle::Rng rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.uniform(1, 5);
    const IntMatrix m = oracle::random_matrix(rng, n, n, 8);
    if (det(m) == 0) continue;
    const IntVector b = oracle::random_vector(rng, n, 20);
    const auto x = solve_rational(m, b);
    for (std::size_t i = 0; i < n; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < n; ++j) s += Rational(m(i, j)) * x[j];
      EXPECT_EQ(s, Rational(b[i]));
    }
  }
}

TEST(MaxMinors, Examples) {
  const auto tri = max_minors(IntMatrix{{-1, 0}, {0, -1}, {1, 1}});
  ASSERT_EQ(tri.size(), 3u);
  for (const auto& mm : tri) EXPECT_EQ(abs(mm.minor), 1);
  EXPECT_EQ(max_abs_minor(tri), 1);
  EXPECT_EQ(tri[0].base, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(tri[1].base, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(tri[2].base, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(tri[0].omitted_row(), 2u);
  EXPECT_EQ(tri[2].omitted_row(), 0u);

  const auto seg = max_minors(IntMatrix{{3}, {-2}});
  EXPECT_EQ(seg[0].minor, 3);
  EXPECT_EQ(seg[1].minor, -2);
  EXPECT_EQ(max_abs_minor(seg), 3);

  const auto dup = max_minors(IntMatrix{{1, 2}, {1, 2}, {0, 1}});
  EXPECT_EQ(dup[0].minor, 0);
  EXPECT_THROW(max_minors(IntMatrix(2, 2)), ShapeError);
}

TEST(MaxMinors, MatchCofactorOracle) {
  oracle::Rng rng(108);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.uniform(1, 5);
    const IntMatrix a = oracle::random_matrix(rng, n + 1, n, 6);
    for (const auto& mm : max_minors(a)) EXPECT_EQ(mm.minor, oracle::det_cofactor(a.select_rows(mm.base)));
  }
}

TEST(IntegerHelpers, FloorDivAndGcd) {
  EXPECT_EQ(floor_div(7, 2), 3);
  EXPECT_EQ(floor_div(-7, 2), -4);
  EXPECT_EQ(floor_div(7, -2), -4);
  EXPECT_EQ(floor_div(-7, -2), 3);
  EXPECT_EQ(mod_floor(-7, 3), 2);
  EXPECT_EQ(gcd(-12, 18), 6);
  EXPECT_EQ(gcd(0, -5), 5);
  const auto e = extended_gcd(240, -46);
  EXPECT_EQ(e.g, 2);
  EXPECT_EQ(Integer(240) * e.x + Integer(-46) * e.y, 2);
  EXPECT_EQ(floor(Rational(-1, 3)), -1);
  EXPECT_EQ(ceil(Rational(-1, 3)), 0);
  EXPECT_EQ(parse_integer("-123456789012345678901234567890").str(), "-123456789012345678901234567890");
  EXPECT_THROW(parse_integer("12a"), std::invalid_argument);
}
