#pragma once

// F_{q^m}-linear rank-metric codes: weights, duality, nondegeneracy and the
// generalized rank weights (geometric and Galois-closed algorithms).

#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "rankgeo/errors.hpp"
#include "rankgeo/fields.hpp"
#include "rankgeo/linalg.hpp"

namespace rankgeo {

struct WeightProfile {
  std::vector<int> weights;  // weights[s-1] = d_{rk,s}

  int at(int s) const { return weights.at(static_cast<std::size_t>(s - 1)); }
  int size() const noexcept { return static_cast<int>(weights.size()); }
  bool operator==(const WeightProfile&) const = default;
};

class RankMetricCode {
 public:
  RankMetricCode(TowerPtr tower, Mat G) : tower_(std::move(tower)), G_(std::move(G)) {
    if (!tower_) throw DomainError("code needs a field tower");
    G_.tag = FieldTag::extension;
    check_entries(*tower_, G_);
    if (G_.rows < 1) throw DomainError("generator matrix has no rows");
    if (G_.rows > G_.cols) throw DomainError("generator has more rows than columns");
    rref_ = rref(*tower_, G_);
    if (rref_.rank != G_.rows)
      throw DomainError("generator matrix is rank deficient: rank " + std::to_string(rref_.rank) + " < " +
                        std::to_string(G_.rows) + " rows");
  }

  const FieldTower& tower() const noexcept { return *tower_; }
  const TowerPtr& tower_ptr() const noexcept { return tower_; }
  const Mat& generator() const noexcept { return G_; }
  /// Reduced row echelon generator; equal row spaces give equal matrices.
  const Mat& canonical_generator() const noexcept { return rref_.matrix; }
  const std::vector<int>& pivots() const noexcept { return rref_.pivots; }
  int n() const noexcept { return G_.cols; }
  int k() const noexcept { return G_.rows; }

  /// Same row space over the same tower.
  bool same_code(const RankMetricCode& o) const {
    return tower_->same_as(*o.tower_) && rref_.matrix == o.rref_.matrix;
  }

  /// Columns of G as vectors of F_{q^m}^k.
  std::vector<std::vector<Elem>> columns() const {
    std::vector<std::vector<Elem>> out(n(), std::vector<Elem>(k()));
    for (int i = 0; i < k(); ++i)
      for (int j = 0; j < n(); ++j) out[j][i] = G_(i, j);
    return out;
  }

  std::vector<Elem> encode(std::span<const Elem> message) const { return vec_mat(*tower_, message, G_); }

 private:
  TowerPtr tower_;
  Mat G_;
  Rref rref_;
};

/// The dual of a full code F_{q^m}^n.
struct ZeroCode {
  int n = 0;
};

using DualResult = std::variant<RankMetricCode, ZeroCode>;

/// dim over F_q of the span of the entries of v.
inline int rank_weight(const FieldTower& T, std::span<const Elem> v) {
  FlatSpan span(T, 1);
  for (auto x : v) {
    if (!T.contains(x)) throw DomainError("vector entry outside F_{q^m}");
    span.insert_ext(std::span<const Elem>(&x, 1));
  }
  return span.rank();
}

inline int rank_weight(const FieldTower& T, const std::vector<Elem>& v) {
  return rank_weight(T, std::span<const Elem>(v));
}

namespace detail {

/// FlatSpan holding the F_q-span of the columns of G inside F_{q^m}^k.
inline FlatSpan column_span(const RankMetricCode& C) {
  FlatSpan U(C.tower(), C.k());
  for (const auto& col : C.columns()) U.insert_ext(col);
  return U;
}

/// Rank of a small matrix over F, destroying the buffer.
inline int rank_inplace(const GaloisField& F, Elem* a, int rows, int cols) {
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i * cols + c]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = c; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
    const Elem inv = F.inv(a[r * cols + c]);
    for (int i = r + 1; i < rows; ++i) {
      const Elem f = a[i * cols + c];
      if (!f) continue;
      const Elem g = F.mul(f, inv);
      for (int j = c; j < cols; ++j) a[i * cols + j] = F.sub(a[i * cols + j], F.mul(g, a[r * cols + j]));
    }
    ++r;
  }
  return r;
}

}  // namespace detail

/// Minimum rank distance via hyperplane intersections: for a projective
/// v ∈ F_{q^m}^k, wt(vG) = dim U − dim(U ∩ v^⊥) where U is the F_q-span of the
/// columns of G.  Valid for degenerate codes too.
inline int min_rank_distance(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  const FieldTower& T = C.tower();
  const int k = C.k();
  FlatSpan U = detail::column_span(C);
  const int dimU = U.rank();
  if (k == 1) return dimU;  // the only hyperplane is {0}
  const int m = static_cast<int>(T.m());
  auto make_eval = [&] {
    return [U, k, m, dimU, &T](std::span<const Elem> v) mutable {
      int j = 0;
      while (v[j] == 0) ++j;
      U.mark();
      std::vector<Elem> h(k, 0);
      for (int i = 0; i < k; ++i) {
        if (i == j) continue;
        std::fill(h.begin(), h.end(), 0);
        h[i] = 1;
        h[j] = T.neg(v[i]);
        U.insert_ext_line(h);
      }
      const int inter = dimU + m * (k - 1) - U.rank();
      U.rollback();
      return inter;
    };
  };
  // G has full rank, so no hyperplane contains U and dimU − 1 is the largest possible value.
  const ScanResult best = max_over_subspaces(k, 1, T.order(), budget, make_eval, dimU - 2);
  return dimU - best.value;
}

inline DualResult dual(const RankMetricCode& C) {
  if (C.k() == C.n()) return ZeroCode{C.n()};
  return RankMetricCode(C.tower_ptr(), kernel(C.tower(), C.generator()));
}

/// The dual as a code; throws when C is the full space.
inline RankMetricCode dual_code(const RankMetricCode& C) {
  auto d = dual(C);
  if (auto* c = std::get_if<RankMetricCode>(&d)) return *c;
  throw DomainError("the dual of a full code is the zero code");
}

struct NondegeneracyResult {
  bool value = false;
  std::string criterion;
  int column_span_dim = 0;
};

/// Nondegenerate iff the columns of G are F_q-independent.
inline NondegeneracyResult is_nondegenerate(const RankMetricCode& C) {
  const int dim = detail::column_span(C).rank();
  return {dim == C.n(), "column span dimension " + std::to_string(dim) + " of " + std::to_string(C.n()), dim};
}

/// The dual-distance criterion d(C^⊥) ≥ 2 (the zero code has distance n+1).
inline bool nondegenerate_via_dual(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  auto d = dual(C);
  if (std::holds_alternative<ZeroCode>(d)) return true;
  return min_rank_distance(std::get<RankMetricCode>(d), budget) >= 2;
}

// ---- profile cache -----------------------------------------------------------

namespace detail {

struct ProfileCache {
  std::mutex mu;
  std::map<std::tuple<int, std::string, int, std::vector<Elem>>, WeightProfile> entries;
  static constexpr std::size_t kCap = 1 << 16;
};

inline ProfileCache& profile_cache() {
  static ProfileCache cache;
  return cache;
}

inline auto cache_key(int algorithm, const RankMetricCode& C) {
  const auto& T = C.tower();
  std::string field = std::to_string(T.p()) + ":" + std::to_string(T.e()) + ":" + std::to_string(T.m());
  for (auto c : T.gq()) field += "," + std::to_string(c);
  field += ";";
  for (auto c : T.gqm()) field += "," + std::to_string(c);
  return std::make_tuple(algorithm, std::move(field), C.n(), C.canonical_generator().data);
}

template <class Compute>
WeightProfile cached_profile(int algorithm, const RankMetricCode& C, Compute compute) {
  auto& cache = profile_cache();
  auto key = cache_key(algorithm, C);
  {
    std::lock_guard lock(cache.mu);
    if (auto it = cache.entries.find(key); it != cache.entries.end()) return it->second;
  }
  WeightProfile p = compute();
  std::lock_guard lock(cache.mu);
  if (cache.entries.size() >= ProfileCache::kCap) cache.entries.clear();
  cache.entries.emplace(std::move(key), p);
  return p;
}

inline void require_nondegenerate(const RankMetricCode& C, const char* op) {
  auto nd = is_nondegenerate(C);
  if (!nd.value)
    throw DomainError(std::string(op) + " requires a nondegenerate code (" + nd.criterion + ")");
}

}  // namespace detail

inline void clear_profile_cache() {
  auto& cache = detail::profile_cache();
  std::lock_guard lock(cache.mu);
  cache.entries.clear();
}

/// d_{rk,r} = n − max dim_{F_q}(U ∩ W) over F_{q^m}-subspaces W of dimension k−r.
inline WeightProfile generalized_weights_geometric(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  detail::require_nondegenerate(C, "generalized_weights_geometric");
  return detail::cached_profile(0, C, [&] {
    const FieldTower& T = C.tower();
    const int n = C.n(), k = C.k(), m = static_cast<int>(T.m());
    FlatSpan U = detail::column_span(C);
    WeightProfile P;
    P.weights.assign(k, 0);
    P.weights[k - 1] = n;
    for (int r = 1; r < k; ++r) {
      const int w = k - r;
      // U spans F_{q^m}^k, so no proper W contains it.
      const int cap = std::min(n - 1, m * w);
      auto make_eval = [&] {
        return [U, w, k, m, n](std::span<const Elem> W) mutable {
          U.mark();
          for (int i = 0; i < w; ++i) U.insert_ext_line(W.subspan(static_cast<std::size_t>(i) * k, k));
          const int inter = n + m * w - U.rank();
          U.rollback();
          return inter;
        };
      };
      const ScanResult best = max_over_subspaces(k, w, T.order(), budget, make_eval, cap - 1);
      P.weights[r - 1] = n - best.value;
    }
    return P;
  });
}

/// Galois-closed definition: d_{rk,s} is the least t such that some
/// t-dimensional F_q-subspace V of F_q^n has dim_{F_{q^m}}(⟨V⟩ ∩ C) ≥ s.
/// The intersection has dimension t − rank(V H^T) for a parity-check matrix H.
inline WeightProfile generalized_weights_galois(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  detail::require_nondegenerate(C, "generalized_weights_galois");
  return detail::cached_profile(1, C, [&] {
    const FieldTower& T = C.tower();
    const auto& F = T.field();
    const int n = C.n(), k = C.k(), r = n - k;
    WeightProfile P;
    P.weights.assign(k, 0);
    if (r == 0) {
      for (int s = 1; s <= k; ++s) P.weights[s - 1] = s;
      return P;
    }
    const Mat H = kernel(T, C.generator());  // r × n
    int found = 0;
    std::vector<Elem> prod;
    for (int t = 1; t <= n && found < k; ++t) {
      SubspaceIter it = enumerate_subspaces(n, t, T.q(), budget);
      for (; !it.done() && found < k; it.next()) {
        const auto V = it.current();
        prod.assign(static_cast<std::size_t>(t) * r, 0);
        for (int i = 0; i < t; ++i)
          for (int l = 0; l < n; ++l) {
            const Elem v = V[static_cast<std::size_t>(i) * n + l];
            if (!v) continue;
            for (int j = 0; j < r; ++j) {
              Elem& x = prod[static_cast<std::size_t>(i) * r + j];
              x = F.add(x, F.mul(v, H(j, l)));
            }
          }
        const int delta = t - detail::rank_inplace(F, prod.data(), t, r);
        for (int s = found + 1; s <= delta; ++s) P.weights[s - 1] = t;
        found = std::max(found, delta);
      }
    }
    return P;
  });
}

/// Both algorithms are exact; pick the one with the smaller enumeration.
inline WeightProfile generalized_weights(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  const int n = C.n(), k = C.k();
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  auto acc = [&](std::uint64_t a, std::uint64_t b) { return a > cap - b ? cap : a + b; };
  std::uint64_t geo = 0, gal = 0;
  for (int w = 1; w < k; ++w) geo = acc(geo, gaussian_binomial(k, w, C.tower().order()));
  if (k < n)
    for (int t = 1; t <= n; ++t) gal = acc(gal, gaussian_binomial(n, t, C.tower().q()));
  return gal < geo ? generalized_weights_galois(C, budget) : generalized_weights_geometric(C, budget);
}

}  // namespace rankgeo
