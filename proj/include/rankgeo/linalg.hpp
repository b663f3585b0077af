#pragma once

// Exact linear algebra over F_q and F_{q^m}: echelon forms, kernels,
// F_q-spans of flattened vectors, and canonical enumeration of subspaces.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rankgeo/errors.hpp"
#include "rankgeo/fields.hpp"

namespace rankgeo {

enum class FieldTag { base, extension };

/// Dense row-major matrix of packed field elements.
struct Mat {
  int rows = 0;
  int cols = 0;
  FieldTag tag = FieldTag::extension;
  std::vector<Elem> data;

  Mat() = default;
  Mat(int r, int c, FieldTag t = FieldTag::extension)
      : rows(r), cols(c), tag(t), data(static_cast<std::size_t>(r) * c, 0) {
    if (r < 0 || c < 0) throw DomainError("negative matrix dimension");
  }

  Elem& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  Elem operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  std::span<Elem> row(int i) { return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const Elem> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
  }

  std::vector<Elem> row_vec(int i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  std::vector<std::vector<Elem>> to_rows() const {
    std::vector<std::vector<Elem>> out;
    for (int i = 0; i < rows; ++i) out.push_back(row_vec(i));
    return out;
  }

  /// Rows must share a length; `cols` fixes the width when there are no rows.
  static Mat from_rows(const std::vector<std::vector<Elem>>& rs, FieldTag t = FieldTag::extension, int cols = -1) {
    const int c = rs.empty() ? std::max(cols, 0) : static_cast<int>(rs[0].size());
    Mat M(static_cast<int>(rs.size()), c, t);
    for (int i = 0; i < M.rows; ++i) {
      if (static_cast<int>(rs[i].size()) != c) throw DomainError("ragged matrix rows");
      std::copy(rs[i].begin(), rs[i].end(), M.row(i).begin());
    }
    return M;
  }

  static Mat identity(int n, FieldTag t = FieldTag::extension) {
    Mat M(n, n, t);
    for (int i = 0; i < n; ++i) M(i, i) = 1;
    return M;
  }

  Mat transposed() const {
    Mat T(cols, rows, tag);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) T(j, i) = (*this)(i, j);
    return T;
  }

  bool operator==(const Mat&) const = default;
};

inline const detail::GaloisField& field_of(const FieldTower& T, FieldTag tag) {
  return tag == FieldTag::base ? T.base_field() : T.field();
}

/// Throws unless every entry lies in the tagged field.
inline void check_entries(const FieldTower& T, const Mat& M) {
  const std::uint32_t bound = M.tag == FieldTag::base ? T.q() : T.order();
  for (auto x : M.data)
    if (x >= bound)
      throw DomainError("matrix entry " + std::to_string(x) + " is outside " +
                        (M.tag == FieldTag::base ? "F_q" : "F_{q^m}"));
}

inline Mat mat_mul(const FieldTower& T, const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw DomainError("matrix product dimension mismatch");
  const FieldTag tag = (A.tag == FieldTag::base && B.tag == FieldTag::base) ? FieldTag::base : FieldTag::extension;
  const auto& F = T.field();
  Mat C(A.rows, B.cols, tag);
  for (int i = 0; i < A.rows; ++i)
    for (int l = 0; l < A.cols; ++l) {
      const Elem a = A(i, l);
      if (a == 0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) = F.add(C(i, j), F.mul(a, B(l, j)));
    }
  return C;
}

/// v · M for a row vector v.
inline std::vector<Elem> vec_mat(const FieldTower& T, std::span<const Elem> v, const Mat& M) {
  if (static_cast<int>(v.size()) != M.rows) throw DomainError("vector-matrix dimension mismatch");
  const auto& F = T.field();
  std::vector<Elem> out(M.cols, 0);
  for (int i = 0; i < M.rows; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < M.cols; ++j) out[j] = F.add(out[j], F.mul(v[i], M(i, j)));
  }
  return out;
}

struct Rref {
  Mat matrix;  // full matrix with zero rows at the bottom
  int rank = 0;
  std::vector<int> pivots;

  /// The nonzero rows only.
  Mat basis() const {
    Mat B(rank, matrix.cols, matrix.tag);
    std::copy(matrix.data.begin(), matrix.data.begin() + static_cast<std::ptrdiff_t>(rank) * matrix.cols,
              B.data.begin());
    return B;
  }
};

inline Rref rref(const FieldTower& T, Mat M) {
  const auto& F = field_of(T, M.tag);
  Rref out;
  int r = 0;
  for (int c = 0; c < M.cols && r < M.rows; ++c) {
    int piv = -1;
    for (int i = r; i < M.rows; ++i)
      if (M(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < M.cols; ++j) std::swap(M(piv, j), M(r, j));
    const Elem inv = F.inv(M(r, c));
    for (int j = c; j < M.cols; ++j) M(r, j) = F.mul(M(r, j), inv);
    for (int i = 0; i < M.rows; ++i) {
      if (i == r) continue;
      const Elem f = M(i, c);
      if (f == 0) continue;
      for (int j = c; j < M.cols; ++j) M(i, j) = F.sub(M(i, j), F.mul(f, M(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.matrix = std::move(M);
  return out;
}

inline int rank(const FieldTower& T, const Mat& M) { return rref(T, M).rank; }

inline Mat row_space_basis(const FieldTower& T, const Mat& M) { return rref(T, M).basis(); }

inline bool same_row_space(const FieldTower& T, const Mat& A, const Mat& B) {
  if (A.cols != B.cols) return false;
  return row_space_basis(T, A).data == row_space_basis(T, B).data && rank(T, A) == rank(T, B);
}

/// Basis (as rows) of {x : M x^T = 0}, one vector per free column of the RREF.
inline Mat kernel(const FieldTower& T, const Mat& M) {
  const auto& F = field_of(T, M.tag);
  const Rref R = rref(T, M);
  std::vector<bool> is_pivot(M.cols, false);
  for (int c : R.pivots) is_pivot[c] = true;
  Mat K(M.cols - R.rank, M.cols, M.tag);
  int row = 0;
  for (int f = 0; f < M.cols; ++f) {
    if (is_pivot[f]) continue;
    K(row, f) = 1;
    for (int i = 0; i < R.rank; ++i) K(row, R.pivots[i]) = F.neg(R.matrix(i, f));
    ++row;
  }
  return K;
}

/// Flattens every row of an extension matrix into F_q^{m·cols}.
inline Mat flatten_rows(const FieldTower& T, const Mat& M) {
  Mat out(M.rows, M.cols * static_cast<int>(T.m()), FieldTag::base);
  for (int i = 0; i < M.rows; ++i) {
    auto f = T.flatten(M.row(i));
    std::copy(f.begin(), f.end(), out.row(i).begin());
  }
  return out;
}

/// F_q-basis of the F_{q^m}-row space of M, flattened: rows γ^i·b for each basis row b.
inline Mat flatten_ext_span(const FieldTower& T, const Mat& M) {
  const int m = static_cast<int>(T.m());
  Mat out(M.rows * m, M.cols * m, FieldTag::base);
  std::vector<Elem> scaled(M.cols);
  for (int i = 0; i < M.rows; ++i)
    for (int t = 0; t < m; ++t) {
      for (int j = 0; j < M.cols; ++j) scaled[j] = T.mul(T.basis(t), M(i, j));
      auto f = T.flatten(scaled);
      std::copy(f.begin(), f.end(), out.row(i * m + t).begin());
    }
  return out;
}

/// dim over F_q of the F_q-span of the given vectors of F_{q^m}^L.
inline int fq_span_dim(const FieldTower& T, const std::vector<std::vector<Elem>>& vectors) {
  if (vectors.empty()) return 0;
  return rank(T, flatten_rows(T, Mat::from_rows(vectors)));
}

/// Intersection of two F_q-row spaces in the same ambient F_q^N (Zassenhaus).
inline Mat intersect_fq(const FieldTower& T, const Mat& A, const Mat& B) {
  if (A.cols != B.cols) throw DomainError("intersect_fq: ambient dimensions differ");
  const int N = A.cols;
  Mat Z(A.rows + B.rows, 2 * N, FieldTag::base);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < N; ++j) Z(i, j) = Z(i, N + j) = A(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < N; ++j) Z(A.rows + i, j) = B(i, j);
  const Rref R = rref(T, Z);
  std::vector<std::vector<Elem>> rows;
  for (int i = 0; i < R.rank; ++i) {
    if (R.pivots[i] < N) continue;
    rows.emplace_back(R.matrix.row(i).begin() + N, R.matrix.row(i).end());
  }
  return row_space_basis(T, Mat::from_rows(rows, FieldTag::base, N));
}

/// Gaussian binomial [n,k]_s, saturating at uint64 max.
inline std::uint64_t gaussian_binomial(int n, int k, std::uint64_t s) {
  if (k < 0 || k > n) return 0;
  // Build row by row with the q-Pascal rule [n,k] = [n-1,k-1] + s^k [n-1,k].
  constexpr auto kSat = std::numeric_limits<std::uint64_t>::max();
  auto sat_add = [](std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; };
  auto sat_mul = [](std::uint64_t a, std::uint64_t b) { return (b != 0 && a > kSat / b) ? kSat : a * b; };
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = std::min(i, k); j >= 1; --j) {
      std::uint64_t sj = 1;
      for (int t = 0; t < j; ++t) sj = sat_mul(sj, s);
      row[j] = sat_add(row[j - 1], sat_mul(sj, row[j]));
    }
  return row[k];
}

/// Resource limits for enumerations.
struct Budget {
  std::uint64_t max_subspaces = 10'000'000;
  int workers = 1;

  /// Default budget, overridden by RANKGEO_BUDGET when set to a positive integer.
  static Budget from_env() {
    Budget b;
    if (const char* s = std::getenv("RANKGEO_BUDGET")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(s, &end, 10);
      if (end != s && *end == '\0' && v > 0) b.max_subspaces = v;
    }
    return b;
  }
};

/// Canonical RREF representatives of the dim-dimensional subspaces of K^ambient,
/// |K| = field_size, with elements coded 0..field_size-1.  Order: pivot column
/// sets lexicographically, then free entries as a row-major odometer with the
/// last free entry moving fastest.  Index i is the position in that order.
class SubspaceIter {
 public:
  SubspaceIter(int ambient, int dim, std::uint32_t field_size)
      : ambient_(ambient), dim_(dim), s_(field_size) {
    if (dim < 0 || dim > ambient) throw DomainError("subspace dimension out of range");
    if (field_size < 2) throw DomainError("field size must be at least 2");
    total_ = gaussian_binomial(ambient, dim, field_size);
    end_ = total_;
    seek(0);
  }

  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t index() const noexcept { return index_; }
  bool done() const noexcept { return index_ >= end_; }
  int ambient() const noexcept { return ambient_; }
  int dim() const noexcept { return dim_; }

  /// Restricts iteration to indices [begin, end).
  void set_range(std::uint64_t begin, std::uint64_t end) {
    end_ = std::min(end, total_);
    seek(begin);
  }

  /// Current basis, dim × ambient, row-major.
  std::span<const Elem> current() const noexcept { return mat_; }
  Mat current_mat(FieldTag tag) const {
    Mat M(dim_, ambient_, tag);
    M.data = mat_;
    return M;
  }
  const std::vector<int>& pivots() const noexcept { return pivots_; }

  void next() {
    if (done()) return;
    ++index_;
    if (done()) return;
    for (std::size_t t = free_.size(); t-- > 0;) {
      Elem& x = mat_[free_[t]];
      if (++x < s_) return;
      x = 0;
    }
    next_combination();
    load_combination();
  }

  /// Positions the iterator at index i (or at the end).
  void seek(std::uint64_t i) {
    index_ = i;
    if (i >= end_ || i >= total_) {
      index_ = std::max(i, end_);
      return;
    }
    pivots_.resize(dim_);
    for (int t = 0; t < dim_; ++t) pivots_[t] = t;
    std::uint64_t rem = i;
    while (true) {
      const std::uint64_t cnt = combo_count();
      if (rem < cnt) break;
      rem -= cnt;
      next_combination();
    }
    load_combination();
    for (std::size_t t = free_.size(); t-- > 0;) {
      mat_[free_[t]] = static_cast<Elem>(rem % s_);
      rem /= s_;
    }
  }

 private:
  int free_count() const {
    int f = 0;
    for (int r = 0; r < dim_; ++r) f += (ambient_ - pivots_[r] - 1) - (dim_ - 1 - r);
    return f;
  }
  std::uint64_t combo_count() const {
    std::uint64_t c = 1;
    for (int t = free_count(); t > 0; --t) c *= s_;
    return c;
  }
  void next_combination() {
    int t = dim_ - 1;
    while (t >= 0 && pivots_[t] == ambient_ - dim_ + t) --t;
    if (t < 0) return;
    ++pivots_[t];
    for (int u = t + 1; u < dim_; ++u) pivots_[u] = pivots_[u - 1] + 1;
  }
  void load_combination() {
    mat_.assign(static_cast<std::size_t>(dim_) * ambient_, 0);
    free_.clear();
    std::vector<bool> is_pivot(ambient_, false);
    for (int p : pivots_) is_pivot[p] = true;
    for (int r = 0; r < dim_; ++r) {
      mat_[static_cast<std::size_t>(r) * ambient_ + pivots_[r]] = 1;
      for (int c = pivots_[r] + 1; c < ambient_; ++c)
        if (!is_pivot[c]) free_.push_back(static_cast<std::size_t>(r) * ambient_ + c);
    }
  }

  int ambient_;
  int dim_;
  std::uint32_t s_;
  std::uint64_t total_ = 0;
  std::uint64_t end_ = 0;
  std::uint64_t index_ = 0;
  std::vector<int> pivots_;
  std::vector<std::size_t> free_;
  std::vector<Elem> mat_;
};

inline void check_budget(std::uint64_t count, const Budget& budget, const std::string& what) {
  if (count > budget.max_subspaces)
    throw BudgetExceeded(what + " needs " + std::to_string(count) + " subspaces, budget is " +
                         std::to_string(budget.max_subspaces));
}

/// Enumerates subspaces after checking the count against the budget.
inline SubspaceIter enumerate_subspaces(int ambient, int dim, std::uint32_t field_size,
                                        const Budget& budget = Budget::from_env()) {
  SubspaceIter it(ambient, dim, field_size);
  check_budget(it.total(), budget, "enumeration of " + std::to_string(dim) + "-subspaces of a " +
                                       std::to_string(ambient) + "-dimensional space");
  return it;
}

/// Incremental echelon basis of an F_q-subspace of F_q^N, supporting cheap
/// rollback.  Vectors of F_{q^m}^L are inserted through their flattening.
class FlatSpan {
 public:
  FlatSpan(const FieldTower& T, int length)
      : T_(&T), len_(length), N_(length * static_cast<int>(T.m())), binary_(T.q() == 2 && N_ <= 64) {}

  int rank() const noexcept { return static_cast<int>(binary_ ? bits_.size() : pivots_.size()); }
  int ambient() const noexcept { return N_; }

  void mark() { marks_.push_back(rank()); }
  void rollback() {
    const int r = marks_.back();
    marks_.pop_back();
    if (binary_) {
      bits_.resize(r);
    } else {
      pivots_.resize(r);
      rows_.resize(static_cast<std::size_t>(r) * N_);
    }
  }

  /// Inserts a flattened vector of F_q^N; returns true if the rank grew.
  bool insert_flat(std::span<const Elem> v) {
    if (binary_) {
      std::uint64_t b = 0;
      for (int i = 0; i < N_; ++i)
        if (v[i]) b |= std::uint64_t{1} << i;
      return insert_bits(b);
    }
    std::vector<Elem> w(v.begin(), v.end());
    return insert_generic(w);
  }

  /// Inserts the flattening of v ∈ F_{q^m}^L.
  bool insert_ext(std::span<const Elem> v) {
    if (binary_) return insert_bits(pack_binary(v));
    auto w = T_->flatten(v);
    return insert_generic(w);
  }

  /// Inserts the F_q-basis {γ^t v} of the F_{q^m}-line through v; returns the rank gain.
  int insert_ext_line(std::span<const Elem> v) {
    int gained = 0;
    std::vector<Elem> scaled(v.size());
    for (unsigned t = 0; t < T_->m(); ++t) {
      for (std::size_t j = 0; j < v.size(); ++j) scaled[j] = T_->mul(T_->basis(t), v[j]);
      gained += insert_ext(scaled);
    }
    return gained;
  }

 private:
  std::uint64_t pack_binary(std::span<const Elem> v) const {
    const unsigned m = T_->m();
    std::uint64_t b = 0;
    for (std::size_t j = 0; j < v.size(); ++j) b |= static_cast<std::uint64_t>(v[j]) << (j * m);
    return b;
  }

  bool insert_bits(std::uint64_t b) {
    for (auto r : bits_)
      if (b & (r & -r)) b ^= r;
    if (b == 0) return false;
    bits_.push_back(b);
    return true;
  }

  bool insert_generic(std::vector<Elem>& w) {
    const auto& F = T_->base_field();
    const int r = rank();
    for (int i = 0; i < r; ++i) {
      const Elem c = w[pivots_[i]];
      if (c == 0) continue;
      const Elem* row = rows_.data() + static_cast<std::size_t>(i) * N_;
      for (int j = 0; j < N_; ++j)
        if (row[j]) w[j] = F.sub(w[j], F.mul(c, row[j]));
    }
    int p = 0;
    while (p < N_ && w[p] == 0) ++p;
    if (p == N_) return false;
    const Elem inv = F.inv(w[p]);
    for (int j = p; j < N_; ++j) w[j] = F.mul(w[j], inv);
    pivots_.push_back(p);
    rows_.insert(rows_.end(), w.begin(), w.end());
    return true;
  }

  const FieldTower* T_;
  int len_;
  int N_;
  bool binary_;
  // Binary path: each row's pivot is its lowest set bit and no row contains
  // an earlier row's pivot, so one in-order pass reduces a vector.
  std::vector<std::uint64_t> bits_;
  std::vector<int> pivots_;
  std::vector<Elem> rows_;
  std::vector<int> marks_;
};

/// Result of a scan over subspaces: the best value and where it was attained.
struct ScanResult {
  int value = std::numeric_limits<int>::min();
  std::uint64_t index = 0;
  std::vector<Elem> basis;  // RREF basis of the attaining subspace
  bool stopped_early = false;
};

namespace detail {

/// Sequential kernel: scans [begin,end) and keeps the first maximum.  Stops at
/// the first value above `stop_above` when given, or once `cutoff` (an index
/// already known to satisfy the stop condition) is passed.
template <class Eval>
ScanResult scan_range(SubspaceIter it, std::uint64_t begin, std::uint64_t end, Eval& eval,
                      std::optional<int> stop_above, const std::atomic<std::uint64_t>* cutoff) {
  ScanResult best;
  it.set_range(begin, end);
  for (; !it.done(); it.next()) {
    if (cutoff && it.index() > cutoff->load(std::memory_order_relaxed)) break;
    const int v = eval(it.current());
    if (v > best.value) {
      best.value = v;
      best.index = it.index();
      best.basis.assign(it.current().begin(), it.current().end());
      if (stop_above && v > *stop_above) {
        best.stopped_early = true;
        break;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Maximizes eval over all dim-subspaces of K^ambient.  `make_eval()` returns a
/// fresh evaluator per worker.  With stop_above set, the scan returns the
/// earliest subspace (in enumeration order) whose value exceeds it, if any;
/// the outcome never depends on the number of workers.
template <class MakeEval>
ScanResult max_over_subspaces(int ambient, int dim, std::uint32_t field_size, const Budget& budget,
                              MakeEval make_eval, std::optional<int> stop_above = std::nullopt) {
  SubspaceIter it = enumerate_subspaces(ambient, dim, field_size, budget);
  const std::uint64_t total = it.total();
  const int workers = static_cast<int>(std::max<std::uint64_t>(
      1, std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(budget.workers, 1)), total / 64)));
  if (workers <= 1) {
    auto eval = make_eval();
    return detail::scan_range(it, 0, total, eval, stop_above, nullptr);
  }
  std::vector<ScanResult> parts(workers);
  std::atomic<std::uint64_t> cutoff{std::numeric_limits<std::uint64_t>::max()};
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      auto eval = make_eval();
      const std::uint64_t b = std::min(total, chunk * w), e = std::min(total, chunk * (w + 1));
      parts[w] = detail::scan_range(it, b, e, eval, stop_above, stop_above ? &cutoff : nullptr);
      if (parts[w].stopped_early) {
        std::uint64_t cur = cutoff.load();
        while (parts[w].index < cur && !cutoff.compare_exchange_weak(cur, parts[w].index)) {
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (stop_above) {
    for (auto& p : parts)
      if (p.stopped_early) return p;  // parts are in index order, so this is the earliest hit
  }
  ScanResult best;
  for (auto& p : parts)
    if (p.value > best.value) best = std::move(p);
  best.stopped_early = false;
  return best;
}

}  // namespace rankgeo
