#pragma once

// Theorem-verification suites.  Each suite is a predicate over one code plus a
// default parameter range; the runner enumerates every nondegenerate code in
// the range (one RREF generator per row space) and tallies the outcomes.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rankgeo/classify.hpp"
#include "rankgeo/codes.hpp"
#include "rankgeo/constructions.hpp"
#include "rankgeo/io.hpp"
#include "rankgeo/qsystems.hpp"

namespace rankgeo::verify {

using io::json;

struct SuiteParams {
  std::uint64_t q = 2;
  int m = 3;
  int k = 2;
  int n_min = 3;
  int n_max = 4;
  std::uint64_t seed = 0;
  int random_instances = 0;  // extra seeded random codes on top of the exhaustive range
  int bound_adjust = 0;      // shifts one-sided bounds; nonzero only in self-tests
};

struct InstanceOutcome {
  bool applicable = true;
  bool pass = true;
  json detail;  // both sides' values when the check fails
};

struct SuiteReport {
  std::string suite;
  SuiteParams params;
  std::uint64_t instances = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t not_applicable = 0;
  bool complete = true;
  std::string incomplete_reason;
  json first_counterexample;  // null when nothing failed
};

struct SuiteSpec {
  std::string name;
  std::string statement;
  bool two_sided = false;
  SuiteParams defaults;
  std::function<InstanceOutcome(const RankMetricCode&, const SuiteParams&, const Budget&)> check;
};

namespace detail {

inline InstanceOutcome fail(json detail) { return {true, false, std::move(detail)}; }
inline InstanceOutcome skip() { return {false, true, nullptr}; }

inline std::vector<int> dual_profile_or_empty(const RankMetricCode& C, const Budget& b) {
  if (C.k() == C.n()) return {};
  const RankMetricCode D = dual_code(C);
  if (!is_nondegenerate(D).value) return {};
  return generalized_weights(D, b).weights;
}

/// Weight d_s of the dual; d_0 = 0 and s beyond n−k is out of range.
inline int dual_weight(const std::vector<int>& dual, int s) {
  if (s == 0) return 0;
  return dual.at(static_cast<std::size_t>(s - 1));
}

inline InstanceOutcome check_prop29(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const int n = C.n(), k = C.k();
  const auto P = generalized_weights_geometric(C, b).weights;
  bool mono = P.back() == n;
  for (int s = 1; s < k; ++s) mono = mono && P[s - 1] < P[s];
  json det = {{"profile", P}};
  bool wei = true;
  if (k < n) {
    const RankMetricCode D = dual_code(C);
    if (is_nondegenerate(D).value) {
      const auto Q = generalized_weights(D, b).weights;
      std::vector<int> seen(n + 1, 0);
      for (int w : P) ++seen[w];
      for (int w : Q) {
        const int x = n + 1 - w;
        if (x >= 1 && x <= n) ++seen[x];
        else wei = false;
      }
      for (int i = 1; i <= n; ++i) wei = wei && seen[i] == 1;
      det["dual_profile"] = Q;
    }
  }
  if (mono && wei) return {};
  det["monotone"] = mono;
  det["wei_duality"] = wei;
  return fail(det);
}

inline InstanceOutcome check_prop210(const RankMetricCode& C, const SuiteParams& p, const Budget& b) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  const auto P = generalized_weights_geometric(C, b);
  for (int s = 1; s <= k; ++s) {
    const int bound = gen_weight_bound(n, k, m, s) - p.bound_adjust;
    if (P.at(s) > bound) return fail({{"s", s}, {"weight", P.at(s)}, {"bound", bound}});
  }
  return {};
}

inline InstanceOutcome check_eq2(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const FieldTower& T = C.tower();
  const int n = C.n(), k = C.k();
  const QSystem U = phi(C);
  SubspaceIter it = enumerate_subspaces(k, 1, T.order(), b);
  for (; !it.done(); it.next()) {
    const auto v = it.current();
    const int wt = rank_weight(T, C.encode(v));
    // ⟨v⟩^⊥ as an F_{q^m}-subspace: the kernel of the functional v.
    const Mat H = kernel(T, Mat::from_rows({std::vector<Elem>(v.begin(), v.end())}));
    const int geo = n - (H.rows == 0 ? 0 : intersection_dim(U, H));
    if (wt != geo)
      return fail({{"message", std::vector<Elem>(v.begin(), v.end())}, {"rank_weight", wt}, {"geometric", geo}});
  }
  return {};
}

inline InstanceOutcome check_theorem33(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const int n = C.n(), k = C.k();
  const QSystem U = phi(C);
  const auto P = generalized_weights_geometric(C, b);
  const auto D = dual_profile_or_empty(C, b);
  const bool dual_ok = !D.empty();
  for (int h = 0; h < k; ++h) {
    // Full scans give the max intersection, so every r follows from one scan per h.
    const auto ev = is_evasive(U, h, h, ScanMode::full, b);
    const int mx = *ev.max_intersection;
    for (int r = h; r <= n; ++r) {
      const bool c1 = mx <= r;
      const bool c2 = P.at(k - h) >= n - r;
      const int s = r - h + 1;
      bool c3 = c1;
      bool c3_checked = false;
      if (dual_ok && s <= n - k) {
        c3 = dual_weight(D, s) >= r + 2;
        c3_checked = true;
      }
      const bool sharp_lhs = P.at(k - h) == n - r;
      // (h, h−1)-evasive is impossible, so at r = h "not (h,r−1)-evasive" always holds.
      const bool sharp_geo = c1 && (r == h || mx > r - 1);
      const bool sharp_dual = c3_checked ? c3 && dual_weight(D, s - 1) <= r : sharp_geo;
      if (c1 != c2 || c1 != c3 || sharp_lhs != sharp_geo || sharp_lhs != sharp_dual)
        return fail({{"h", h},
                     {"r", r},
                     {"evasive", c1},
                     {"weight_clause", c2},
                     {"dual_weight_clause", c3_checked ? json(c3) : json(nullptr)},
                     {"sharp_weight", sharp_lhs},
                     {"sharp_evasive", sharp_geo},
                     {"sharp_dual", sharp_dual},
                     {"profile", P.weights},
                     {"dual_profile", D}});
    }
  }
  return {};
}

inline InstanceOutcome check_cor44(const RankMetricCode& C, const SuiteParams& p, const Budget& b) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  if (n == k) return skip();
  const QSystem U = phi(C);
  for (int h = 0; h < k; ++h) {
    if (!is_h_scattered(U, h, b)) continue;
    const long long bound = 1LL * k * m / (h + 1) - p.bound_adjust;
    if (n > bound) return fail({{"h", h}, {"n", n}, {"bound", bound}});
  }
  return {};
}

inline InstanceOutcome check_cor411(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  bool any = false;
  for (int h = 0; h < k; ++h) {
    if (1LL * n * (h + 1) != 1LL * k * m) continue;
    const QSystem U = phi(C);
    if (!is_h_scattered(U, h, b)) continue;  // only maximum h-scattered systems
    any = true;
    const int lo = n - m, hi = n - m + h;
    for (int x : hyperplane_spectrum(U, b))
      if (x < lo || x > hi) return fail({{"h", h}, {"intersection", x}, {"window", {lo, hi}}});
  }
  return any ? InstanceOutcome{} : skip();
}

inline InstanceOutcome check_theorem410(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  bool any = false;
  for (int h = 0; h < k; ++h) {
    if (1LL * n * (h + 1) != 1LL * k * m) continue;
    any = true;
    const bool geo = is_h_scattered(phi(C), h, b);
    const bool mrd = is_mrd(C, b);
    if (geo != mrd) return fail({{"h", h}, {"maximum_h_scattered", geo}, {"mrd", mrd}});
  }
  return any ? InstanceOutcome{} : skip();
}

inline InstanceOutcome check_prop53(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  try {
    (void)is_near_mrd(C, b);
  } catch (const ConsistencyError& e) {
    return fail({{"error", e.what()}});
  }
  return {};
}

inline InstanceOutcome check_theorem56(const RankMetricCode& C, const SuiteParams& p, const Budget& b) {
  if (!is_near_mrd(C, b).value) return skip();
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  const auto B = near_mrd_length_bound(k, m);
  if (!B.bound) return fail({{"reason", "near-MRD code with m < k"}, {"m", m}, {"k", k}});
  if (n > *B.bound - p.bound_adjust) return fail({{"n", n}, {"bound", *B.bound - p.bound_adjust}});
  return {};
}

inline InstanceOutcome check_def61(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  const int d = min_rank_distance(C, b);
  const int d_galois = generalized_weights_galois(C, b).at(1);
  const auto def = rank_defect(C, b);
  const long long expected = m - (1LL * k * m + n - 1) / n - d + 1;
  if (d != d_galois || def.value != expected || def.value < 0)
    return fail({{"d", d}, {"d_galois", d_galois}, {"defect", def.value}, {"expected", expected}});
  return {};
}

inline InstanceOutcome check_theorem63(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  if (n == k) return skip();
  const QSystem U = phi(C);
  const int def = rank_defect(dual_code(C), b).value;
  for (int h = 0; h < k; ++h) {
    const bool geo = is_h_scattered(U, h, b);
    const bool code = def <= 1LL * k * m / n - h - 1;
    if (geo != code) return fail({{"h", h}, {"h_scattered", geo}, {"dual_defect", def}});
  }
  return {};
}

inline InstanceOutcome check_theorem66(const RankMetricCode& C, const SuiteParams&, const Budget& b) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  if (n == k) return skip();
  bool any = false;
  for (int h = 0; h < k; ++h) {
    if (n != 1LL * k * m / (h + 1) || quasi_link_condition(k, m, h) >= 0) continue;
    any = true;
    const bool geo = is_h_scattered(phi(C), h, b);
    const bool quasi = is_quasi_mrd(dual_code(C), b);
    if (geo != quasi) return fail({{"h", h}, {"quasi_maximum", geo}, {"dual_quasi_mrd", quasi}});
  }
  return any ? InstanceOutcome{} : skip();
}

inline SuiteParams range(std::uint64_t q, int m, int k, int n_min, int n_max) {
  SuiteParams p;
  p.q = q;
  p.m = m;
  p.k = k;
  p.n_min = n_min;
  p.n_max = n_max;
  return p;
}

}  // namespace detail

inline const std::vector<SuiteSpec>& suites() {
  using namespace detail;
  static const std::vector<SuiteSpec> all = {
      {"prop-2.9", "generalized weights increase strictly to n; weights of C and reflected weights of C^perp partition 1..n",
       false, range(2, 3, 2, 2, 4), check_prop29},
      {"prop-2.10", "d_s <= min{n-k+s, sm, m(n-k)/n + m(s-1) + 1}", false, range(2, 3, 2, 2, 4), check_prop210},
      {"eq-2", "wt(vG) = n - dim(<v>^perp cap U) for every projective message v", true, range(2, 3, 2, 2, 4),
       check_eq2},
      {"theorem-3.3", "(h,r)-evasive <=> d_{k-h}(C) >= n-r <=> d_{r-h+1}(C^perp) >= r+2, with the sharp case", true,
       range(2, 3, 2, 3, 5), check_theorem33},
      {"cor-4.4", "h-scattered [n,k] systems with n > k satisfy n <= km/(h+1)", false, range(2, 3, 2, 3, 4),
       check_cor44},
      {"cor-4.11", "maximum h-scattered systems meet every hyperplane in dimension within [n-m, n-m+h]", false,
       range(2, 4, 2, 4, 4), check_cor411},
      {"theorem-4.10", "for n = km/(h+1): maximum h-scattered <=> MRD", true, range(2, 4, 2, 4, 4),
       check_theorem410},
      {"prop-5.3", "near-MRD profile, duality and geometric criteria agree", true, range(2, 3, 2, 3, 5),
       check_prop53},
      {"theorem-5.6", "near-MRD codes have m >= k and n <= m+2 (m = 2k-2) or m+1", false, range(2, 3, 2, 3, 5),
       check_theorem56},
      {"def-6.1", "Rdef = m - ceil(km/n) - d + 1 >= 0 with d from both weight algorithms", false,
       range(2, 3, 2, 2, 5), check_def61},
      {"theorem-6.3", "h-scattered <=> Rdef(C^perp) <= floor(km/n) - h - 1", true, range(2, 3, 2, 3, 5),
       check_theorem63},
      {"theorem-6.6", "for n = floor(km/(h+1)) and km - (h+2)floor(km/(h+1)) < 0: quasi-maximum <=> dual quasi-MRD",
       true, range(2, 3, 2, 3, 3), check_theorem66},
  };
  return all;
}

inline const SuiteSpec* find_suite(const std::string& name) {
  for (const auto& s : suites())
    if (s.name == name) return &s;
  return nullptr;
}

/// A uniformly random generator over F_{q^m}, retried until the code is nondegenerate.
template <class Rng>
RankMetricCode random_nondegenerate_code(const TowerPtr& T, int n, int k, Rng& rng) {
  if (n > k * static_cast<int>(T->m())) throw DomainError("no nondegenerate code with n > km");
  std::uniform_int_distribution<Elem> elem(0, T->order() - 1);
  for (;;) {
    Mat G(k, n);
    for (auto& x : G.data) x = elem(rng);
    if (rank(*T, G) != k) continue;
    RankMetricCode C(T, std::move(G));
    if (is_nondegenerate(C).value) return C;
  }
}

/// Every nondegenerate code of the range, one RREF generator per row space,
/// in enumeration order; then `random_instances` seeded random codes.
template <class Visit>
void for_each_instance(const SuiteParams& p, const Budget& budget, Visit visit) {
  const TowerPtr T = make_tower_q(p.q, static_cast<unsigned>(p.m));
  if (p.k < 1 || p.n_min < p.k || p.n_max < p.n_min) throw DomainError("suite range needs 1 <= k <= n_min <= n_max");
  for (int n = p.n_min; n <= p.n_max; ++n) {
    if (n > p.k * p.m) break;
    SubspaceIter it = enumerate_subspaces(n, p.k, T->order(), budget);
    for (; !it.done(); it.next()) {
      RankMetricCode C(T, it.current_mat(FieldTag::extension));
      if (!is_nondegenerate(C).value) continue;
      visit(C);
    }
  }
  if (p.random_instances > 0) {
    std::mt19937_64 rng(p.seed);
    const int n_hi = std::min(p.n_max, p.k * p.m);
    if (n_hi < p.n_min) return;
    std::uniform_int_distribution<int> len(p.n_min, n_hi);
    for (int i = 0; i < p.random_instances; ++i) visit(random_nondegenerate_code(T, len(rng), p.k, rng));
  }
}

inline SuiteReport run_suite(const SuiteSpec& spec, const SuiteParams& p, const Budget& budget = Budget::from_env()) {
  SuiteReport rep;
  rep.suite = spec.name;
  rep.params = p;
  try {
    for_each_instance(p, budget, [&](const RankMetricCode& C) {
      const InstanceOutcome o = spec.check(C, p, budget);
      ++rep.instances;
      if (!o.applicable) {
        ++rep.not_applicable;
      } else if (o.pass) {
        ++rep.passed;
      } else {
        ++rep.failed;
        if (rep.first_counterexample.is_null())
          rep.first_counterexample = {{"code", io::code_to_json(C)}, {"values", o.detail}};
      }
    });
  } catch (const BudgetExceeded& e) {
    rep.complete = false;
    rep.incomplete_reason = e.what();
  }
  return rep;
}

inline json report_to_json(const SuiteSpec& spec, const SuiteReport& r) {
  return {{"suite", r.suite},
          {"statement", spec.statement},
          {"params",
           {{"q", r.params.q},
            {"m", r.params.m},
            {"k", r.params.k},
            {"n_min", r.params.n_min},
            {"n_max", r.params.n_max},
            {"seed", r.params.seed},
            {"random_instances", r.params.random_instances},
            {"bound_adjust", r.params.bound_adjust}}},
          {"instances", r.instances},
          {"passed", r.passed},
          {"failed", r.failed},
          {"not_applicable", r.not_applicable},
          {"complete", r.complete},
          {"incomplete_reason", r.complete ? json(nullptr) : json(r.incomplete_reason)},
          {"first_counterexample", r.first_counterexample}};
}

}  // namespace rankgeo::verify
