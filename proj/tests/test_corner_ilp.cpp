#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace delta_simplex;

namespace {

// Random reduced h for H.
IntVector random_rhs(oracle::Rng& rng, const IntMatrix& H) {
  IntVector h(H.rows());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = rng.uniform(0, H(i, i).convert_to<long long>() - 1);
  return h;
}

}  // namespace

TEST(ReduceResidue, Examples) {
  EXPECT_EQ(reduce_residue(IntMatrix::identity(3), IntVector{0, 0, 0}), (IntVector{0, 0, 0}));
  EXPECT_EQ(reduce_residue(IntMatrix{{1, 0}, {1, 2}}, IntVector{3, 4}), (IntVector{0, 1}));
  oracle::Rng rng(401);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.uniform(1, 4);
    const IntMatrix H = oracle::random_hnf(rng, n, 20);
    const IntVector z = oracle::random_vector(rng, n, 50);
    const IntVector w = oracle::random_vector(rng, n, 5);
    EXPECT_EQ(reduce_residue(H, z), reduce_residue(H, z + H * w));
  }
}

TEST(GroupTable, ElementsAndSteps) {
  const GroupTable g(IntMatrix{{2, 0}, {1, 3}});
  EXPECT_EQ(g.size(), 6u);
  for (std::size_t id = 0; id < g.size(); ++id) {
    EXPECT_EQ(g.index(g.element(id)), id);
    for (std::size_t i = 0; i < 2; ++i) {
      IntVector z = g.element(id);
      z[i] += 1;
      EXPECT_EQ(g.step(id, i), g.class_of(z));
    }
  }
  EXPECT_THROW(GroupTable(IntMatrix{{1, 0}, {3, 2}}), PreconditionError);
}

TEST(CornerMinimum, Examples) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto sol = corner_minimum(IntMatrix::identity(n), IntVector(n), IntVector(n, Integer(-1)));
    EXPECT_EQ(sol.f_star, 0);
    EXPECT_EQ(sol.witness_x, IntVector(n));
  }
  // (0, 0) and (-1, 1) both attain the minimum
  const IntMatrix H{{1, 0}, {1, 2}};
  const auto sol = corner_minimum(H, IntVector{0, 1}, IntVector{-1, -1});
  EXPECT_EQ(sol.f_star, 0);
  EXPECT_EQ(dot(IntVector{-1, -1}, sol.witness_x), 0);
  const IntVector hx = H * sol.witness_x;
  EXPECT_LE(hx[0], 0);
  EXPECT_LE(hx[1], 1);
  EXPECT_THROW(corner_minimum(IntMatrix{{2}}, IntVector{0}, IntVector{-3}), PreconditionError);
}

TEST(CornerMinimum, ExcludingVertexExamples) {
  for (std::size_t n = 1; n <= 4; ++n)
    EXPECT_EQ(corner_minimum_excluding_vertex(IntMatrix::identity(n), IntVector(n, Integer(-1))).f_star, 1);
  EXPECT_EQ(corner_minimum_excluding_vertex(IntMatrix{{1, 0}, {0, 2}}, IntVector{-1, -2}).f_star, 1);
  const auto seg = corner_minimum_excluding_vertex(IntMatrix{{2}}, IntVector{-1});
  EXPECT_EQ(seg.f_star, 1);
  EXPECT_EQ(seg.witness_x, IntVector{-1});
  EXPECT_THROW(corner_minimum_excluding_vertex(IntMatrix{{2}}, IntVector{1}, IntVector{-1}), PreconditionError);
}

TEST(CornerMinimum, BruteforceOracleReproducesExamples) {
  EXPECT_EQ(oracle::corner_minimum_bruteforce(IntMatrix::identity(3), IntVector(3), IntVector(3, Integer(-1)), 3).f_star, 0);
  EXPECT_EQ(oracle::corner_minimum_bruteforce(IntMatrix{{1, 0}, {1, 2}}, IntVector{0, 1}, IntVector{-1, -1}, 4).f_star, 0);
  EXPECT_EQ(oracle::corner_minimum_bruteforce(IntMatrix{{2}}, IntVector{0}, IntVector{-1}, 4, true).f_star, 1);
}

TEST(CornerMinimum, WeightsInRangeExactlyOnParallelepiped) {
  oracle::Rng rng(402);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = rng.uniform(1, 3);
    const IntMatrix H = oracle::random_hnf(rng, n, 12);
    const CornerSolver solver(H);
    const Integer delta = det(H);
    const auto inside = oracle::paral_full_scan(H, 3);
    IntVector c(n, Integer(-3));
    while (true) {
      if (std::binary_search(inside.begin(), inside.end(), c)) {
        for (const auto& wi : solver.weights(c)) {
          EXPECT_GE(wi, 1);
          EXPECT_LE(wi, delta);
        }
      } else {
        EXPECT_THROW(solver.weights(c), PreconditionError);
      }
      std::size_t i = 0;
      while (i < n && c[i] == 3) c[i++] = -3;
      if (i == n) break;
      ++c[i];
    }
  }
}

TEST(CornerMinimum, MatchesBoxScanAndDivisibility) {
  oracle::Rng rng(403);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = rng.uniform(1, 3);
    const IntMatrix H = oracle::random_hnf(rng, n, 12);
    const CornerSolver solver(H);
    const auto cs = enumerate_c(H);
    const IntVector& c = cs[rng.uniform(0, cs.size() - 1)];
    const IntVector h = random_rhs(rng, H);
    const auto tree = solver.shortest_paths(c);
    const auto sol = solver.minimum(tree, c, h);
    const Integer scaled = dot(c, solver.adj() * h) + tree.dist[solver.table().class_of(h)];
    EXPECT_EQ(scaled % solver.delta(), 0);
    const long long radius = solver.delta().convert_to<long long>() + 1;
    EXPECT_EQ(sol.f_star, oracle::corner_minimum_bruteforce(H, h, c, radius).f_star);
    EXPECT_EQ(solver.minimum_excluding_vertex(tree, c).f_star,
              oracle::corner_minimum_bruteforce(H, IntVector(n), c, radius, true).f_star);
  }
}

TEST(CornerMinimum, DistanceMonotoneAlongSteps) {
  oracle::Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.uniform(1, 4);
    const IntMatrix H = oracle::random_hnf(rng, n, 20);
    const CornerSolver solver(H);
    const auto cs = enumerate_c(H);
    const auto tree = solver.shortest_paths(cs[rng.uniform(0, cs.size() - 1)]);
    for (std::size_t id = 0; id < solver.table().size(); ++id)
      for (std::size_t i = 0; i < n; ++i)
        EXPECT_LE(tree.dist[solver.table().step(id, i)], tree.dist[id] + tree.weights[i]);
  }
}

TEST(CountLevelPoints, MatchesBruteforceCounting) {
  // Points of {H x <= h, c^T x == value} against a scan of the simplex
  // {H x <= h, c^T x <= value} minus the one with value - 1.
  oracle::Rng rng(405);
  int done = 0;
  while (done < 60) {
    const std::size_t n = rng.uniform(1, 3);
    const IntMatrix H = oracle::random_hnf(rng, n, 8);
    const auto cs = enumerate_c(H);
    const IntVector c = cs[rng.uniform(0, cs.size() - 1)];
    const IntVector h = random_rhs(rng, H);
    const CornerSolver solver(H);
    const Integer f = solver.minimum(h, c).f_star;
    const Integer value = f + rng.uniform(0, 2);
    auto count_upto = [&](const Integer& v) -> std::size_t {
      NormalizedSystem ns{n, 0, n, H, h, c, v, det(H)};
      const Integer cv_scaled = dot(c, adjugate(H) * h);
      if (!(cv_scaled < v * det(H))) {
        const bool apex_integral = std::all_of(h.begin(), h.end(), [](const Integer& x) { return x == 0; });
        return apex_integral && cv_scaled == v * det(H) ? 1 : 0;
      }
      return count_integer_points_bruteforce(ns.system());
    };
    ++done;
    EXPECT_EQ(solver.count_level_points(h, c, value), count_upto(value) - count_upto(value - 1));
    EXPECT_EQ(solver.count_level_points(h, c, f - 1), 0u);
  }
}
