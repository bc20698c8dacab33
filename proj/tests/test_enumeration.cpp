#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace delta_simplex;

TEST(DivisorTuples, Examples) {
  EXPECT_EQ(divisor_tuples(1), std::vector<DivisorTuple>{DivisorTuple{}});
  EXPECT_EQ(divisor_tuples(4), (std::vector<DivisorTuple>{{4}, {2, 2}}));
  EXPECT_EQ(divisor_tuples(6), (std::vector<DivisorTuple>{{6}, {2, 3}, {3, 2}}));
  EXPECT_EQ(divisor_tuples(8).size(), 4u);  // 8, 2*4, 4*2, 2*2*2
  EXPECT_THROW(divisor_tuples(0), std::domain_error);
}

TEST(DivisorTuples, ProductsAndFactors) {
  for (int d = 1; d <= 64; ++d)
    for (const auto& t : divisor_tuples(d)) {
      Integer p = 1;
      for (const auto& f : t) {
        EXPECT_GE(f, 2);
        p *= f;
      }
      EXPECT_EQ(p, d);
    }
}

TEST(EnumerateH, Examples) {
  auto mats = [](const Integer& delta, std::size_t n) {
    std::vector<IntMatrix> out;
    for (const auto& b : enumerate_H(delta, n)) out.push_back(b.H);
    return out;
  };
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(mats(1, n), std::vector<IntMatrix>{IntMatrix::identity(n)});
  EXPECT_EQ(mats(2, 2), (std::vector<IntMatrix>{IntMatrix{{1, 0}, {0, 2}}, IntMatrix{{1, 0}, {1, 2}}}));
  const auto four = mats(4, 2);
  const std::vector<IntMatrix> want{IntMatrix{{1, 0}, {0, 4}}, IntMatrix{{1, 0}, {1, 4}}, IntMatrix{{1, 0}, {2, 4}},
                                    IntMatrix{{1, 0}, {3, 4}}, IntMatrix{{2, 0}, {0, 2}}, IntMatrix{{2, 0}, {1, 2}}};
  EXPECT_EQ(four, want);
}

TEST(EnumerateH, EveryMatrixIsBlockHnf) {
  for (int delta = 1; delta <= 8; ++delta)
    for (std::size_t n = 1; n <= 4; ++n) {
      std::set<std::vector<Integer>> seen;
      for (const auto& b : enumerate_H(delta, n)) {
        EXPECT_TRUE(is_hnf(b.H));
        EXPECT_EQ(det(b.H), delta);
        EXPECT_EQ(hnf(b.H).H, b.H);
        EXPECT_LE(b.H.max_abs(), delta);
        EXPECT_TRUE(seen.insert(b.H.data()).second);
        for (std::size_t j = 0; j + 1 < b.s; ++j) {
          IntVector c1, c2;
          for (std::size_t i = 0; i < b.k; ++i) {
            c1.push_back(b.B(i, j));
            c2.push_back(b.B(i, j + 1));
          }
          EXPECT_LE(c1, c2);
        }
      }
    }
}

TEST(EnumerateH, CountMatchesMultisetFormula) {
  // For a single diagonal entry delta (k = 1) there are C(s + delta - 1, delta - 1) choices of B.
  for (int delta = 2; delta <= 7; ++delta)
    for (std::size_t n = 1; n <= 5; ++n) {
      std::size_t k1 = 0;
      for (const auto& b : enumerate_H(delta, n)) k1 += b.k == 1;
      EXPECT_EQ(Integer(k1), binomial(n - 1 + delta - 1, delta - 1));
    }
}

TEST(EnumerateSmallVectors, Examples) {
  EXPECT_EQ(enumerate_h(IntMatrix::identity(3)), std::vector<IntVector>{IntVector(3)});
  EXPECT_EQ(enumerate_h(IntMatrix{{1, 0}, {1, 2}}), (std::vector<IntVector>{{0, 0}, {0, 1}}));
  EXPECT_EQ(enumerate_c(IntMatrix::identity(3)), std::vector<IntVector>{IntVector(3, Integer(-1))});
  auto c1 = enumerate_c(IntMatrix{{2}});
  std::sort(c1.begin(), c1.end());
  EXPECT_EQ(c1, (std::vector<IntVector>{{-2}, {-1}}));
  auto c2 = enumerate_c(IntMatrix{{1, 0}, {1, 2}});
  std::sort(c2.begin(), c2.end());
  EXPECT_EQ(c2, (std::vector<IntVector>{{-2, -2}, {-1, -1}}));
}

TEST(EnumerateSmallVectors, ParallelepipedMatchesFullScan) {
  oracle::Rng rng(501);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = rng.uniform(1, 3);
    const IntMatrix H = oracle::random_hnf(rng, n, 10);
    const Integer delta = det(H);
    auto cs = enumerate_c(H);
    std::sort(cs.begin(), cs.end());
    EXPECT_EQ(Integer(cs.size()), delta);
    EXPECT_EQ(cs, oracle::paral_full_scan(H, static_cast<long long>(n) * delta.convert_to<long long>()));
    EXPECT_EQ(Integer(enumerate_h(H).size()), delta);
  }
}

TEST(C0Candidates, Examples) {
  auto lat = c0_candidates(IntMatrix::identity(2), IntVector{0, 0}, IntVector{-1, -1});
  ASSERT_TRUE(std::holds_alternative<LatticeCandidate>(lat));
  EXPECT_EQ(std::get<LatticeCandidate>(lat).f_star, 1);

  auto r = c0_candidates(IntMatrix{{1, 0}, {1, 2}}, IntVector{0, 1}, IntVector{-1, -1});
  ASSERT_TRUE(std::holds_alternative<EmptyRange>(r));
  EXPECT_EQ(std::get<EmptyRange>(r).l_star, 0);
  EXPECT_EQ(std::get<EmptyRange>(r).f_star, 0);

  r = c0_candidates(IntMatrix{{3}}, IntVector{1}, IntVector{-3});
  EXPECT_EQ(std::get<EmptyRange>(r).l_star, 0);
  EXPECT_EQ(std::get<EmptyRange>(r).f_star, 0);

  r = c0_candidates(IntMatrix{{3}}, IntVector{2}, IntVector{-3});
  EXPECT_EQ(std::get<EmptyRange>(r).l_star, -1);
  EXPECT_EQ(std::get<EmptyRange>(r).f_star, 0);
  const InequalitySystem seg{1, IntMatrix{{3}, {-3}}, IntVector{2, -1}};
  EXPECT_EQ(count_integer_points_bruteforce(seg), 0u);

  // fractional c^T v: l* is its ceiling
  r = c0_candidates(IntMatrix{{3}}, IntVector{2}, IntVector{-2});
  EXPECT_EQ(std::get<EmptyRange>(r).l_star, -1);  // c^T v = -4/3
}

TEST(C0Candidates, EveryRangeValueGivesAnEmptySimplex) {
  // Exhaustive over small (H, h, c): c0 in [l*, f*) is empty, c0 = f* is not,
  // and c0 = l* - 1 does not give a full-dimensional simplex.
  for (int delta = 2; delta <= 6; ++delta)
    for (std::size_t n = 1; n <= 3; ++n)
      for (const auto& blk : enumerate_H(delta, n))
        for (const auto& h : enumerate_h(blk.H))
          for (const auto& c : enumerate_c(blk.H)) {
            const auto dec = c0_candidates(blk.H, h, c);
            const auto* range = std::get_if<EmptyRange>(&dec);
            if (!range) continue;
            auto sys = [&](const Integer& c0) { return NormalizedSystem{n, 0, n, blk.H, h, c, c0, delta}.system(); };
            for (Integer c0 = range->l_star; c0 < range->f_star; ++c0)
              EXPECT_EQ(count_integer_points_bruteforce(sys(c0)), 0u);
            EXPECT_GT(count_integer_points_bruteforce(sys(std::max(range->f_star, range->l_star))), 0u);
            EXPECT_THROW(validate_simplex(sys(range->l_star - 1)), NotASimplexError);
          }
}

TEST(EnumerateFamilies, DeltaOne) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto f = enumerate_families(1, n);
    EXPECT_TRUE(f.empty.empty());
    ASSERT_EQ(f.lattice.size(), 1u);
    const auto& ns = f.lattice[0].system;
    EXPECT_EQ(ns.H, IntMatrix::identity(n));
    EXPECT_EQ(ns.h, IntVector(n));
    EXPECT_EQ(ns.c, IntVector(n, Integer(-1)));
    EXPECT_EQ(ns.c0, 1);
  }
}

TEST(EnumerateFamilies, DeltaTwoSmallDimensionsAreEmpty) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto f = enumerate_families(2, n);
    EXPECT_TRUE(f.empty.empty());
    EXPECT_TRUE(f.lattice.empty());
  }
}

TEST(EnumerateFamilies, DeltaThreeSegments) {
  const auto f = enumerate_families(3, 1);
  EXPECT_TRUE(f.lattice.empty());
  std::set<std::string> keys;
  for (const auto& r : f.empty) keys.insert(r.key.text());
  EXPECT_EQ(keys, (std::set<std::string>{"1;3;3,2,-3,-1", "1;3;3,2,-2,-1"}));
}

TEST(EnumerateFamilies, RecordsAreValidAndEmpty) {
  for (int delta = 1; delta <= 4; ++delta)
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto f = enumerate_families(delta, n);
      for (const auto* fam : {&f.empty, &f.lattice})
        for (const auto& r : *fam) {
          EXPECT_TRUE(validate_normalized(r.system).ok);
          EXPECT_EQ(validate_simplex(r.system.system()).delta, delta);
          EXPECT_EQ(count_integer_points_bruteforce(r.system.system()), r.family == Family::kEmpty ? 0u : n + 1);
          EXPECT_TRUE(canonical_key(r.system) == r.key);
        }
    }
}

TEST(EnumerateFamilies, IndependentOfJobs) {
  const auto a = enumerate_families(4, 4, 1), b = enumerate_families(4, 4, 3);
  ASSERT_EQ(a.empty.size(), b.empty.size());
  ASSERT_EQ(a.lattice.size(), b.lattice.size());
  for (std::size_t i = 0; i < a.empty.size(); ++i) {
    EXPECT_TRUE(a.empty[i].key == b.empty[i].key);
    EXPECT_EQ(a.empty[i].provenance, b.empty[i].provenance);
  }
  EXPECT_THROW(enumerate_families(0, 2), std::domain_error);
}
