#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rankgeo/constructions.hpp"
#include "samples.hpp"

using namespace rankgeo;

TEST(Constructions, GabidulinIsMrdWithBruteForceDistance) {
  for (unsigned m : {3u, 4u}) {
    auto T = make_tower_q(2, m);
    for (int n = 1; n <= static_cast<int>(m); ++n)
      for (int k = 1; k <= n; ++k) {
        const auto C = gabidulin(T, n, k);
        ASSERT_EQ(oracle::min_distance(C), n - k + 1) << m << " " << n << " " << k;
        ASSERT_EQ(min_rank_distance(C), n - k + 1);
        ASSERT_TRUE(is_mrd(C));
      }
  }
  auto T3 = make_tower_q(3, 3);
  EXPECT_EQ(oracle::min_distance(gabidulin(T3, 3, 2)), 2);
}

TEST(Constructions, GabidulinCustomPointsAndErrors) {
  auto T = samples::f16();
  const auto C = gabidulin(T, 3, 2, {1, 3, 7});
  EXPECT_EQ(C.generator()(1, 1), T->mul(3, 3));
  EXPECT_EQ(min_rank_distance(C), 2);
  EXPECT_THROW(gabidulin(T, 3, 2, {1, 3, 2}), DomainError);  // 1 + 2 = 3
  EXPECT_THROW(gabidulin(T, 5, 2), DomainError);
  EXPECT_THROW(gabidulin(T, 3, 4), DomainError);
  EXPECT_THROW(gabidulin(T, 3, 2, {1, 2}), DomainError);
}

TEST(Constructions, PseudoregulusSystems) {
  const QSystem U = pseudoregulus_system(samples::f8(), 2);
  EXPECT_EQ(U.n(), 3);
  EXPECT_TRUE(is_h_scattered(U, 1));
  const QSystem V = pseudoregulus_system(samples::f16(), 2);
  EXPECT_EQ(V.n(), 4);
  EXPECT_EQ(max_intersection(V, 1).intersection_dim, 1);
  const QSystem W = pseudoregulus_system(samples::f16(), 4);
  EXPECT_EQ(min_rank_distance(psi(W)), 1);
  EXPECT_THROW(pseudoregulus_system(samples::f8(), 4), DomainError);
}

TEST(Constructions, NearMrdSystemReproducesListedBasis) {
  auto T = samples::f16();
  const QSystem U = near_mrd_system(T, 3);
  auto b = [&](int i) { return T->pow(2, i); };
  const Mat expected =
      Mat::from_rows({{1, 0, 0}, {1, 1, 1}, {b(1), b(2), b(4)}, {b(2), b(4), b(8)}, {b(3), b(6), b(12)}});
  EXPECT_EQ(U.basis(), expected);
  EXPECT_EQ(psi(U).generator(), samples::code_5_3_generator(*T));
  EXPECT_TRUE(is_near_mrd(psi(U)).value);
}

TEST(Constructions, NearMrdSystemsAreLongestWhereBoundIsSharp) {
  for (auto [q, m, k] : {std::tuple{2u, 3u, 2}, std::tuple{2u, 3u, 3}, std::tuple{2u, 4u, 3}, std::tuple{3u, 3u, 2}}) {
    auto T = make_tower_q(q, m);
    const QSystem U = near_mrd_system(T, k);
    EXPECT_EQ(U.n(), static_cast<int>(m) + 1);
    EXPECT_TRUE(is_near_mrd(psi(U)).value);
    if (static_cast<int>(m) != 2 * k - 2) {
      EXPECT_EQ(*near_mrd_length_bound(k, m).bound, U.n());
    }
  }
  EXPECT_THROW(near_mrd_system(samples::f8(), 4), DomainError);
  EXPECT_THROW(near_mrd_system(samples::f8(), 1), DomainError);
}

TEST(Constructions, DirectSum) {
  auto T = samples::f16();
  const auto G = gabidulin(T, 4, 2);
  const auto S = direct_sum({G, G});
  EXPECT_EQ(S.n(), 8);
  EXPECT_EQ(S.k(), 4);
  EXPECT_EQ(min_rank_distance(S), 3);
  EXPECT_TRUE(is_mrd(S));
  EXPECT_TRUE(direct_sum({G}).same_code(G));
  const RankMetricCode one(T, Mat::from_rows({{1}}));
  EXPECT_EQ(min_rank_distance(direct_sum({G, one})), 1);
  EXPECT_THROW(direct_sum({G, samples::code_4_2()}), DomainError);
  EXPECT_THROW(direct_sum({}), DomainError);
}

TEST(Constructions, DirectSumDistanceIsMinimumOnRandomCodes) {
  oracle::Gen g(50);
  auto T = make_tower_q(2, 2);
  for (int i = 0; i < 10; ++i) {
    const auto A = g.code(T, g.range(1, 2), 1);
    const auto B = g.code(T, g.range(2, 3), 2);
    const auto S = direct_sum({A, B});
    ASSERT_EQ(oracle::min_distance(S), std::min(oracle::min_distance(A), oracle::min_distance(B)));
    ASSERT_EQ(min_rank_distance(S), oracle::min_distance(S));
  }
}

TEST(Constructions, SearchFindsScatteredSystems) {
  for (unsigned m : {2u, 4u}) {
    auto T = make_tower_q(2, m);
    const auto r = search_scattered(T, 2, 1, static_cast<int>(m), SearchBudget{});
    ASSERT_EQ(r.status, SearchResult::Status::found) << m;
    ASSERT_TRUE(r.system.has_value());
    EXPECT_EQ(r.system->n(), static_cast<int>(m));
    EXPECT_TRUE(is_h_scattered(*r.system, 1));
  }
}

TEST(Constructions, SearchPrunesAboveBound) {
  const auto r = search_scattered(samples::f8(), 2, 1, 4, SearchBudget{});
  EXPECT_EQ(r.status, SearchResult::Status::pruned);
  EXPECT_EQ(r.candidates, 0u);
  const auto s = search_scattered(make_tower_q(2, 2), 3, 1, 4, SearchBudget{});  // m < h+2
  EXPECT_EQ(s.status, SearchResult::Status::pruned);
}

TEST(Constructions, SearchRespectsBudget) {
  auto T = make_tower_q(2, 2);
  // n = k: F_2^2 itself is found
  EXPECT_EQ(search_scattered(T, 2, 1, 2, SearchBudget{}).status, SearchResult::Status::found);
  SearchBudget tiny;
  tiny.max_candidates = 1;
  const auto r = search_scattered(make_tower_q(2, 4), 2, 1, 4, tiny);
  EXPECT_TRUE(r.status == SearchResult::Status::budget_exhausted || r.status == SearchResult::Status::found);
  EXPECT_LE(r.candidates, 1u);
  SearchBudget none;
  none.max_candidates = 0;
  EXPECT_THROW(search_scattered(T, 2, 1, 2, none), DomainError);
  EXPECT_THROW(search_scattered(T, 2, 2, 2, SearchBudget{}), DomainError);
  EXPECT_THROW(search_scattered(T, 2, 1, 5, SearchBudget{}), DomainError);
}

TEST(Constructions, RandomSearchIsSeeded) {
  auto T = make_tower_q(2, 4);
  SearchBudget sb;
  sb.mode = SearchBudget::Mode::random;
  sb.seed = 7;
  const auto a = search_scattered(T, 2, 1, 4, sb);
  const auto b = search_scattered(T, 2, 1, 4, sb);
  ASSERT_EQ(a.status, SearchResult::Status::found);
  EXPECT_EQ(a.candidates, b.candidates);
  EXPECT_EQ(a.system->basis(), b.system->basis());
}
