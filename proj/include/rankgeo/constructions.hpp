#pragma once

// Explicit constructions (Gabidulin codes, pseudoregulus and near-MRD systems,
// direct sums) and a budgeted search for h-scattered systems.

#include <chrono>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rankgeo/classify.hpp"
#include "rankgeo/codes.hpp"
#include "rankgeo/errors.hpp"
#include "rankgeo/qsystems.hpp"

namespace rankgeo {

/// G[i][j] = points[j]^{q^i}.  Points default to 1, γ, …, γ^{n−1}.
inline RankMetricCode gabidulin(const TowerPtr& T, int n, int k, std::vector<Elem> points = {}) {
  const int m = static_cast<int>(T->m());
  if (k < 1 || k > n) throw DomainError("gabidulin needs 1 <= k <= n");
  if (n > m) throw DomainError("gabidulin needs n <= m");
  if (points.empty())
    for (int j = 0; j < n; ++j) points.push_back(T->basis(j));
  if (static_cast<int>(points.size()) != n) throw DomainError("gabidulin needs exactly n evaluation points");
  if (rank_weight(*T, points) != n) throw DomainError("evaluation points are F_q-dependent");
  Mat G(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = T->frobenius(points[j], i);
  return RankMetricCode(T, std::move(G));
}

namespace detail {

inline std::vector<Elem> frobenius_row(const FieldTower& T, Elem b, int k) {
  std::vector<Elem> row(k);
  for (int i = 0; i < k; ++i) row[i] = T.frobenius(b, i);
  return row;
}

}  // namespace detail

/// The [m,k] system {(x, x^q, …, x^{q^{k−1}})} on the power basis of F_{q^m};
/// checked (k−1)-scattered when the budget allows.
inline QSystem pseudoregulus_system(const TowerPtr& T, int k, const Budget& budget = Budget::from_env()) {
  const int m = static_cast<int>(T->m());
  if (k < 1 || k > m) throw DomainError("pseudoregulus system needs 1 <= k <= m");
  std::vector<std::vector<Elem>> rows;
  for (int i = 0; i < m; ++i) rows.push_back(detail::frobenius_row(*T, T->basis(i), k));
  QSystem U(T, Mat::from_rows(rows));
  if (gaussian_binomial(k, k - 1, T->order()) <= budget.max_subspaces && !is_h_scattered(U, k - 1, budget))
    throw ConsistencyError("pseudoregulus system is not (k-1)-scattered");
  return U;
}

/// The [m+1,k] system {(x+λ, x^q, …, x^{q^{k−1}}) : x ∈ F_{q^m}, λ ∈ F_q} with
/// basis (1,0,…,0) followed by the pseudoregulus rows; psi of it is checked
/// near MRD when the budget allows.
inline QSystem near_mrd_system(const TowerPtr& T, int k, const Budget& budget = Budget::from_env()) {
  const int m = static_cast<int>(T->m());
  if (k < 2) throw DomainError("near-MRD system needs k >= 2");
  if (m < k) throw DomainError("near-MRD system needs m >= k");
  std::vector<std::vector<Elem>> rows;
  std::vector<Elem> first(k, 0);
  first[0] = 1;
  rows.push_back(first);
  for (int i = 0; i < m; ++i) rows.push_back(detail::frobenius_row(*T, T->basis(i), k));
  QSystem U(T, Mat::from_rows(rows));
  if (gaussian_binomial(k, k - 1, T->order()) <= budget.max_subspaces) {
    const RankMetricCode C = psi(U);
    const std::uint64_t galois_cost = [&] {
      std::uint64_t total = 0;
      for (int t = 0; t <= C.n(); ++t) total += gaussian_binomial(C.n(), t, T->q());
      return total;
    }();
    if (galois_cost <= budget.max_subspaces && !is_near_mrd(C, budget).value)
      throw ConsistencyError("constructed system does not give a near-MRD code");
  }
  return U;
}

/// Block-diagonal sum of codes over one tower.
inline RankMetricCode direct_sum(const std::vector<RankMetricCode>& codes) {
  if (codes.empty()) throw DomainError("direct_sum needs at least one code");
  const TowerPtr& T = codes[0].tower_ptr();
  int n = 0, k = 0;
  for (const auto& c : codes) {
    if (!c.tower().same_as(*T)) throw DomainError("direct_sum needs codes over the same field tower");
    n += c.n();
    k += c.k();
  }
  Mat G(k, n);
  int r0 = 0, c0 = 0;
  for (const auto& c : codes) {
    for (int i = 0; i < c.k(); ++i)
      for (int j = 0; j < c.n(); ++j) G(r0 + i, c0 + j) = c.generator()(i, j);
    r0 += c.k();
    c0 += c.n();
  }
  return RankMetricCode(T, std::move(G));
}

// ---- search ------------------------------------------------------------------

struct SearchBudget {
  std::uint64_t max_candidates = 10'000'000;
  int max_seconds = 60;
  enum class Mode { exhaustive, random } mode = Mode::exhaustive;
  std::uint64_t seed = 0;
};

struct SearchResult {
  enum class Status { found, pruned, exhausted, budget_exhausted } status = Status::exhausted;
  std::optional<QSystem> system;
  std::uint64_t candidates = 0;
  std::string reason;
};

inline const char* to_string(SearchResult::Status s) {
  switch (s) {
    case SearchResult::Status::found: return "found";
    case SearchResult::Status::pruned: return "pruned";
    case SearchResult::Status::exhausted: return "exhausted";
    case SearchResult::Status::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

/// Looks for an h-scattered [n,k] system.  Exhaustive mode walks the RREF
/// n-subspaces of F_q^{mk}; random mode samples F_q-bases from the seed.
inline SearchResult search_scattered(const TowerPtr& T, int k, int h, int n, const SearchBudget& sb,
                                     const Budget& budget = Budget::from_env()) {
  const int m = static_cast<int>(T->m());
  if (k < 1 || h < 0 || h >= k) throw DomainError("search needs 0 <= h < k");
  if (n < k || n > k * m) throw DomainError("search needs k <= n <= km");
  if (sb.max_candidates == 0 || sb.max_seconds <= 0) throw DomainError("search limits must be positive");
  SearchResult res;
  if (n > k) {
    if (n > scattered_dim_bound(k, m, h)) {
      res.status = SearchResult::Status::pruned;
      res.reason = "n exceeds floor(km/(h+1)) = " + std::to_string(scattered_dim_bound(k, m, h));
      return res;
    }
    if (m < h + 2) {
      res.status = SearchResult::Status::pruned;
      res.reason = "no h-scattered system exists when m < h+2";
      return res;
    }
  }

  // Flattened F_q-bases of every h-dimensional W, precomputed once.
  const int N = k * m;
  std::vector<Mat> Ws;
  {
    SubspaceIter it = enumerate_subspaces(k, h, T->order(), budget);
    for (; !it.done(); it.next()) Ws.push_back(flatten_ext_span(*T, it.current_mat(FieldTag::extension)));
  }
  auto accept = [&](const std::vector<std::vector<Elem>>& flat_rows) -> std::optional<QSystem> {
    FlatSpan S(*T, k);
    for (const auto& r : flat_rows)
      if (!S.insert_flat(r)) return std::nullopt;
    for (const Mat& W : Ws) {
      S.mark();
      for (int i = 0; i < W.rows; ++i) S.insert_flat(W.row(i));
      const int inter = n + W.rows - S.rank();
      S.rollback();
      if (inter > h) return std::nullopt;
    }
    std::vector<std::vector<Elem>> rows;
    for (const auto& r : flat_rows) rows.push_back(T->unflatten(r));
    const Mat B = Mat::from_rows(rows);
    if (rank(*T, B) != k) return std::nullopt;
    QSystem U(T, B);
    if (!is_h_scattered(U, h, budget)) throw ConsistencyError("search hit failed re-verification");
    return U;
  };

  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    return std::chrono::steady_clock::now() - start > std::chrono::seconds(sb.max_seconds);
  };
  std::vector<std::vector<Elem>> flat(n, std::vector<Elem>(N));

  if (sb.mode == SearchBudget::Mode::exhaustive) {
    SubspaceIter it(N, n, T->q());
    for (; !it.done(); it.next()) {
      if (res.candidates >= sb.max_candidates || ((res.candidates & 1023) == 0 && out_of_time())) {
        res.status = SearchResult::Status::budget_exhausted;
        res.reason = "stopped after " + std::to_string(res.candidates) + " of " + std::to_string(it.total()) +
                     " candidates";
        return res;
      }
      ++res.candidates;
      const auto cur = it.current();
      for (int i = 0; i < n; ++i) std::copy(cur.begin() + i * N, cur.begin() + (i + 1) * N, flat[i].begin());
      if (auto U = accept(flat)) {
        res.status = SearchResult::Status::found;
        res.system = std::move(U);
        return res;
      }
    }
    res.status = SearchResult::Status::exhausted;
    res.reason = "all " + std::to_string(it.total()) + " candidates scanned";
    return res;
  }

  std::mt19937_64 rng(sb.seed);
  std::uniform_int_distribution<Elem> coord(0, T->q() - 1);
  while (res.candidates < sb.max_candidates) {
    if ((res.candidates & 1023) == 0 && out_of_time()) break;
    ++res.candidates;
    for (auto& r : flat)
      for (auto& x : r) x = coord(rng);
    if (auto U = accept(flat)) {
      res.status = SearchResult::Status::found;
      res.system = std::move(U);
      return res;
    }
  }
  res.status = SearchResult::Status::budget_exhausted;
  res.reason = "no hit in " + std::to_string(res.candidates) + " random candidates";
  return res;
}

}  // namespace rankgeo
