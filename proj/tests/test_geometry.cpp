// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/geometry.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

namespace gcamusic {
namespace {

std::vector<int> vec(std::span<const int> s) { return {s.begin(), s.end()}; }

std::vector<int> range_lags(int k) {
  std::vector<int> out;
  for (int i = -k; i <= k; ++i) out.push_back(i);
  return out;
}

TEST(ArrayGeometry, CanonicalizesAndRejectsDuplicates) {
  const auto g = ArrayGeometry::from_positions({9, 5, 7});
  EXPECT_EQ(vec(g.positions()), (std::vector<int>{0, 2, 4}));
  EXPECT_EQ(g.aperture(), 4);
  EXPECT_THROW(ArrayGeometry::from_positions({1, 1}), InvalidArgument);
  EXPECT_THROW(ArrayGeometry::from_positions({}), InvalidArgument);
}

TEST(BuildUla, Definition) {
  EXPECT_EQ(vec(build_ula(7).positions()), (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(vec(build_ula(1).positions()), (std::vector<int>{0}));
  EXPECT_EQ(vec(build_ula(3).positions()), (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(build_ula(0), InvalidArgument);
}

TEST(BuildNested2, KnownLayouts) {
  const auto g43 = build_nested2(4, 3);
  EXPECT_EQ(vec(g43.positions()), (std::vector<int>{0, 1, 2, 3, 4, 9, 14}));
  EXPECT_EQ(oracle::weight_function(vec(g43.positions())).size(), 29u);
  EXPECT_EQ(difference_coarray(g43).lags, range_lags(14));

  EXPECT_EQ(vec(build_nested2(1, 1).positions()), (std::vector<int>{0, 1}));

  const auto g33 = build_nested2(3, 3);
  EXPECT_EQ(vec(g33.positions()), (std::vector<int>{0, 1, 2, 3, 7, 11}));
  EXPECT_EQ(difference_coarray(g33).sdof(), 23u);

  EXPECT_THROW(build_nested2(0, 3), InvalidArgument);
  EXPECT_THROW(build_nested2(3, 0), InvalidArgument);
}

TEST(BuildNested2, HoleFreeWithClosedFormSdof) {
  for (int n1 = 1; n1 <= 8; ++n1) {
    for (int n2 = 1; n2 <= 6; ++n2) {
      const auto g = build_nested2(n1, n2);
      EXPECT_TRUE(oracle::hole_free(vec(g.positions()))) << n1 << "," << n2;
      EXPECT_EQ(static_cast<int>(difference_coarray(g).sdof()), 2 * n2 * (n1 + 1) - 1);
    }
  }
}

TEST(BuildSuperNested2, MatchesNestedCoarrayWithThinnerSmallLags) {
  const auto snaq = build_super_nested2(4, 3);
  const auto naq = build_nested2(4, 3);
  EXPECT_EQ(snaq.size(), 7u);
  EXPECT_EQ(snaq.aperture(), 14);
  EXPECT_EQ(difference_coarray(snaq).lags, range_lags(14));
  const auto ws = oracle::weight_function(vec(snaq.positions()));
  const auto wn = oracle::weight_function(vec(naq.positions()));
  EXPECT_GE(wn.at(1), 3);
  EXPECT_LT(ws.at(1), wn.at(1));

  const auto small = build_super_nested2(3, 2);
  EXPECT_EQ(small.size(), 5u);
  EXPECT_EQ(difference_coarray(small).lags, range_lags(7));
  EXPECT_EQ(difference_coarray(small).lags, difference_coarray(build_nested2(3, 2)).lags);
}

TEST(BuildSuperNested2, CoarrayEqualsNestedAcrossSizes) {
  for (int n1 = 3; n1 <= 12; ++n1) {
    for (int n2 = 2; n2 <= 6; ++n2) {
      const auto s = build_super_nested2(n1, n2);
      const auto n = build_nested2(n1, n2);
      ASSERT_EQ(s.size(), static_cast<std::size_t>(n1 + n2)) << n1 << "," << n2;
      EXPECT_EQ(s.aperture(), n.aperture());
      const auto ws = oracle::weight_function(vec(s.positions()));
      const auto wn = oracle::weight_function(vec(n.positions()));
      EXPECT_EQ(difference_coarray(s).lags, difference_coarray(n).lags) << n1 << "," << n2;
      EXPECT_EQ(ws.size(), wn.size());
      EXPECT_LT(ws.at(1), wn.at(1)) << n1 << "," << n2;
    }
  }
}

TEST(BuildSuperNested2, RejectsOutOfRange) {
  EXPECT_THROW(build_super_nested2(2, 3), InvalidArgument);
  EXPECT_THROW(build_super_nested2(4, 1), InvalidArgument);
}

TEST(BuildMra, SmallSizes) {
  EXPECT_EQ(vec(build_mra(2).positions()), (std::vector<int>{0, 1}));
  EXPECT_EQ(vec(build_mra(4).positions()), (std::vector<int>{0, 1, 4, 6}));
  EXPECT_EQ(difference_coarray(build_mra(4)).lags, range_lags(6));
  EXPECT_EQ(vec(build_mra(1).positions()), (std::vector<int>{0}));
}

TEST(BuildMra, SevenSensors) {
  const auto g = build_mra(7);
  EXPECT_EQ(g.aperture(), 17);
  EXPECT_EQ(difference_coarray(g).sdof(), 35u);
  EXPECT_TRUE(oracle::hole_free(vec(g.positions())));
  // {0,1,2,6,10,14,17} is another aperture-17 solution; the lexicographic
  // tie-break prefers {0,1,2,3,8,13,17}.
  EXPECT_TRUE(oracle::hole_free({0, 1, 2, 6, 10, 14, 17}));
  EXPECT_EQ(vec(g.positions()), (std::vector<int>{0, 1, 2, 3, 8, 13, 17}));
}

TEST(BuildMra, ExhaustiveOracleAgrees) {
  for (int n = 2; n <= 7; ++n) {
    const auto g = build_mra(n);
    // No hole-free array with a larger aperture exists.
    for (int a = g.aperture() + 1; a <= n * (n - 1) / 2; ++a) {
      EXPECT_TRUE(oracle::hole_free_arrays(n, a).empty()) << "n=" << n << " aperture " << a;
    }
    const auto ties = oracle::hole_free_arrays(n, g.aperture());
    ASSERT_FALSE(ties.empty());
    EXPECT_EQ(vec(g.positions()), ties.front()) << "n=" << n;
  }
}

TEST(BuildMra, LimitAndCache) {
  EXPECT_THROW(build_mra(kMaxMraSensors + 1), Unsupported);
  EXPECT_THROW(build_mra(0), InvalidArgument);
  EXPECT_EQ(build_mra(10).aperture(), 36);
  EXPECT_TRUE(build_mra(10) == build_mra(10));
}

TEST(DifferenceCoarray, Examples) {
  const auto single = difference_coarray(build_ula(1));
  EXPECT_EQ(single.lags, (std::vector<int>{0}));
  EXPECT_EQ(single.weight(0), 1);
  EXPECT_EQ(single.contiguous_half, 0);

  const auto mra4 = difference_coarray(ArrayGeometry::from_positions({0, 1, 4, 6}));
  EXPECT_EQ(mra4.lags, range_lags(6));
  EXPECT_TRUE(mra4.hole_free());

  const auto ula = difference_coarray(build_ula(7));
  for (int k = -6; k <= 6; ++k) EXPECT_EQ(ula.weight(k), 7 - std::abs(k));
  EXPECT_EQ(ula.weight(7), 0);
}

TEST(DifferenceCoarray, ContiguousHalfWithHoles) {
  // {0,1,4}: lags {-4,-3,-1,0,1,3,4}; center {-1..1}.
  const auto c = difference_coarray(ArrayGeometry::from_positions({0, 1, 4}));
  EXPECT_EQ(c.contiguous_half, 1);
  EXPECT_FALSE(c.hole_free());
  EXPECT_EQ(c.sdof(), 7u);
}

// Random geometries: weight sums, symmetry, odd size and agreement with the
// autocorrelation oracle.
TEST(DifferenceCoarray, PropertiesOnRandomGeometries) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> count(1, 12);
    std::uniform_int_distribution<int> pos(0, 40);
    std::vector<int> p;
    const int n = count(rng);
    while (static_cast<int>(p.size()) < n) {
      const int q = pos(rng);
      if (std::find(p.begin(), p.end(), q) == p.end()) p.push_back(q);
    }
    const auto g = ArrayGeometry::from_positions(p);
    const auto c = difference_coarray(g);
    int total = 0;
    for (const auto& [lag, w] : c.weights) {
      total += w;
      EXPECT_EQ(w, c.weight(-lag));
    }
    EXPECT_EQ(total, static_cast<int>(g.size() * g.size()));
    EXPECT_EQ(c.weight(0), static_cast<int>(g.size()));
    EXPECT_EQ(c.sdof() % 2, 1u);
    EXPECT_EQ(c.weights, oracle::weight_function(vec(g.positions())));
  }
}

TEST(ComposeType2, ReferenceLayouts) {
  const auto naq = compose_type2(build_nested2(4, 3), 3, 1);
  EXPECT_EQ(naq.layout.offsets, (std::vector<int>{0, 15, 30}));
  EXPECT_EQ(naq.whole_dof, 89);

  const auto ula = compose_type2(build_ula(7), 3, 1);
  EXPECT_EQ(vec(ula.whole.positions()), vec(build_ula(21).positions()));
  EXPECT_EQ(ula.whole_dof, 41);

  const auto s = build_super_nested2(4, 3);
  const auto single = compose_type2(s, 1, 1);
  EXPECT_TRUE(single.whole == s);
  EXPECT_EQ(single.whole_dof, 29);

  EXPECT_THROW(compose_type2(s, 0, 1), InvalidArgument);
}

TEST(ComposeType2, SubarraysAreDisjointShiftedCopies) {
  const auto comp = compose_type2(build_mra(5), 4, 2);
  std::vector<int> all;
  for (int l = 0; l < 4; ++l) {
    const auto p = comp.layout.subarray_positions(l);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(p[i], comp.layout.base.positions()[i] + l * (9 + 2));
    }
    all.insert(all.end(), p.begin(), p.end());
  }
  std::sort(all.begin(), all.end());
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  EXPECT_EQ(all, vec(comp.whole.positions()));
}

TEST(DofBound, WorkedValues) {
  EXPECT_EQ(dof_bound(3, 29, 1, 14), 89);
  EXPECT_EQ(dof_bound(3, 35, 1, 17), 107);
  for (int s : {1, 13, 29}) EXPECT_EQ(dof_bound(1, s, 1, 20), s);
  EXPECT_EQ(dof_bound(2, 13, 7, 6), 3 * 13);
  EXPECT_THROW(dof_bound(3, 28, 1, 14), InvalidArgument);
}

TEST(DofBound, EqualityForHoleFreeSubarrays) {
  for (int n = 4; n <= 7; ++n) {
    const std::vector<ArrayGeometry> bases{build_ula(n), build_nested2((n + 1) / 2, n / 2),
                                           build_mra(n)};
    for (const auto& base : bases) {
      const int sdof = static_cast<int>(difference_coarray(base).sdof());
      for (int L = 1; L <= 3; ++L) {
        for (int mu = 1; mu <= 2; ++mu) {
          const auto comp = compose_type2(base, L, mu);
          EXPECT_EQ(comp.whole_dof, dof_bound(L, sdof, mu, base.aperture()))
              << "n=" << n << " L=" << L << " mu=" << mu;
          EXPECT_EQ(comp.whole_dof,
                    static_cast<int>(oracle::weight_function(vec(comp.whole.positions())).size()));
        }
      }
    }
  }
}

} // namespace
} // namespace gcamusic
