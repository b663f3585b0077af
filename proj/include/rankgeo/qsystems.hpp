#pragma once

// q-systems: F_q-subspaces U ⊆ F_{q^m}^k spanning F_{q^m}^k, their link with
// nondegenerate codes, and intersection properties with F_{q^m}-subspaces.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rankgeo/codes.hpp"
#include "rankgeo/errors.hpp"
#include "rankgeo/fields.hpp"
#include "rankgeo/linalg.hpp"

namespace rankgeo {

class QSystem {
 public:
  /// `basis` is n×k over F_{q^m}; its rows must be an F_q-basis of U.
  QSystem(TowerPtr tower, Mat basis) : tower_(std::move(tower)), B_(std::move(basis)) {
    if (!tower_) throw DomainError("system needs a field tower");
    B_.tag = FieldTag::extension;
    check_entries(*tower_, B_);
    if (B_.rows < 1 || B_.cols < 1) throw DomainError("system basis must be nonempty");
    FlatSpan S(*tower_, B_.cols);
    for (int i = 0; i < B_.rows; ++i) S.insert_ext(B_.row(i));
    if (S.rank() != B_.rows)
      throw DomainError("system basis rows are F_q-dependent: span has dimension " + std::to_string(S.rank()) +
                        " < " + std::to_string(B_.rows));
    const int ext_rank = rank(*tower_, B_);
    if (ext_rank != B_.cols)
      throw DomainError("system does not span F_{q^m}^" + std::to_string(B_.cols) + ": F_{q^m}-rank " +
                        std::to_string(ext_rank));
  }

  const FieldTower& tower() const noexcept { return *tower_; }
  const TowerPtr& tower_ptr() const noexcept { return tower_; }
  const Mat& basis() const noexcept { return B_; }
  int n() const noexcept { return B_.rows; }
  int k() const noexcept { return B_.cols; }

  FlatSpan flat_span() const {
    FlatSpan S(*tower_, k());
    for (int i = 0; i < n(); ++i) S.insert_ext(B_.row(i));
    return S;
  }

  /// RREF of the flattened basis: equal iff the subspaces are equal.
  Mat canonical_flat() const { return row_space_basis(*tower_, flatten_rows(*tower_, B_)); }

  bool same_subspace(const QSystem& o) const {
    return tower_->same_as(*o.tower_) && k() == o.k() && canonical_flat() == o.canonical_flat();
  }

 private:
  TowerPtr tower_;
  Mat B_;
};

/// The system spanned by the columns of G.
inline QSystem phi(const RankMetricCode& C) {
  auto nd = is_nondegenerate(C);
  if (!nd.value) throw DomainError("phi requires a nondegenerate code (" + nd.criterion + ")");
  return QSystem(C.tower_ptr(), C.generator().transposed());
}

/// The code whose generator has the basis vectors of U as columns.
inline RankMetricCode psi(const QSystem& U) { return RankMetricCode(U.tower_ptr(), U.basis().transposed()); }

/// dim_{F_q}(U ∩ W) for W given by spanning rows in F_{q^m}^k.
inline int intersection_dim(const QSystem& U, const Mat& W) {
  if (W.cols != U.k()) throw DomainError("subspace lives in the wrong ambient space");
  check_entries(U.tower(), W);
  const int m = static_cast<int>(U.tower().m());
  const Mat Wb = row_space_basis(U.tower(), W);
  FlatSpan S = U.flat_span();
  for (int i = 0; i < Wb.rows; ++i) S.insert_ext_line(Wb.row(i));
  return U.n() + m * Wb.rows - S.rank();
}

struct EvasiveWitness {
  Mat W;  // RREF basis of an F_{q^m}-subspace
  int intersection_dim = 0;
};

enum class ScanMode { short_circuit, full };

struct EvasiveResult {
  bool value = false;
  /// Full scans: a subspace attaining the maximum.  Short-circuit scans that
  /// fail: the first subspace exceeding r.
  std::optional<EvasiveWitness> witness;
  /// Maximum intersection, known whenever the scan ran to completion.
  std::optional<int> max_intersection;
};

/// Largest dim_{F_q}(U ∩ W) over h-dimensional W, with the first subspace attaining it.
inline EvasiveWitness max_intersection(const QSystem& U, int h, const Budget& budget = Budget::from_env(),
                                       std::optional<int> stop_above = std::nullopt, bool* stopped = nullptr) {
  if (h < 0 || h > U.k()) throw DomainError("subspace dimension h out of range");
  const FieldTower& T = U.tower();
  const int n = U.n(), k = U.k(), m = static_cast<int>(T.m());
  FlatSpan base = U.flat_span();
  auto make_eval = [&] {
    return [S = base, h, k, m, n](std::span<const Elem> W) mutable {
      S.mark();
      for (int i = 0; i < h; ++i) S.insert_ext_line(W.subspan(static_cast<std::size_t>(i) * k, k));
      const int inter = n + m * h - S.rank();
      S.rollback();
      return inter;
    };
  };
  const ScanResult best = max_over_subspaces(k, h, T.order(), budget, make_eval, stop_above);
  if (stopped) *stopped = best.stopped_early;
  EvasiveWitness w;
  w.W = Mat(h, k, FieldTag::extension);
  w.W.data = best.basis;
  w.intersection_dim = best.value;
  return w;
}

/// (h,r)-evasive: every h-dimensional W meets U in F_q-dimension at most r.
inline EvasiveResult is_evasive(const QSystem& U, int h, int r, ScanMode mode = ScanMode::short_circuit,
                                const Budget& budget = Budget::from_env()) {
  if (h < 0 || h >= U.k()) throw DomainError("evasiveness needs 0 <= h < k");
  EvasiveResult res;
  if (r < h) return res;  // some h-dimensional W meets U in dimension h
  if (mode == ScanMode::short_circuit) {
    if (r >= U.n()) {
      res.value = true;
      return res;
    }
    bool stopped = false;
    auto w = max_intersection(U, h, budget, r, &stopped);
    res.value = !stopped;
    if (!stopped) res.max_intersection = w.intersection_dim;
    if (stopped) res.witness = std::move(w);
    return res;
  }
  auto w = max_intersection(U, h, budget);
  res.value = w.intersection_dim <= r;
  res.max_intersection = w.intersection_dim;
  res.witness = std::move(w);
  return res;
}

inline bool is_h_scattered(const QSystem& U, int h, const Budget& budget = Budget::from_env()) {
  return is_evasive(U, h, h, ScanMode::short_circuit, budget).value;
}

/// dim_{F_q}(U ∩ H) over all F_{q^m}-hyperplanes H, sorted.  Hyperplanes are
/// kernels of row functionals v normalized to a leading 1.
inline std::vector<int> hyperplane_spectrum(const QSystem& U, const Budget& budget = Budget::from_env()) {
  const FieldTower& T = U.tower();
  const int k = U.k(), n = U.n(), m = static_cast<int>(T.m());
  if (k == 1) return {0};
  SubspaceIter it = enumerate_subspaces(k, 1, T.order(), budget);
  FlatSpan S = U.flat_span();
  std::vector<int> out;
  out.reserve(it.total());
  std::vector<Elem> h(k);
  for (; !it.done(); it.next()) {
    const auto v = it.current();
    int j = 0;
    while (v[j] == 0) ++j;
    S.mark();
    for (int i = 0; i < k; ++i) {
      if (i == j) continue;
      std::fill(h.begin(), h.end(), 0);
      h[i] = 1;
      h[j] = T.neg(v[i]);
      S.insert_ext_line(h);
    }
    out.push_back(n + m * (k - 1) - S.rank());
    S.rollback();
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// U^⊥ := phi(psi(U)^⊥).  Needs k < n and d(psi(U)) ≥ 2 so that the dual code is nondegenerate.
inline QSystem rank_metric_dual(const QSystem& U, const Budget& budget = Budget::from_env()) {
  if (U.k() >= U.n()) throw DomainError("rank-metric dual needs k < n");
  const RankMetricCode C = psi(U);
  const int d = min_rank_distance(C, budget);
  if (d < 2)
    throw DomainError("rank-metric dual needs minimum distance at least 2, got " + std::to_string(d));
  return phi(dual_code(C));
}

}  // namespace rankgeo
