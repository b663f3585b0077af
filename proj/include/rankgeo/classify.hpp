#pragma once

// Bounds and membership predicates: Singleton, generalized-weight bounds,
// s-MRD / MRD / near-MRD / quasi-MRD, rank defect and evasive parameter bounds.
// All rational expressions are evaluated with exact integer floors.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankgeo/codes.hpp"
#include "rankgeo/errors.hpp"
#include "rankgeo/qsystems.hpp"

namespace rankgeo {

namespace detail {

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

inline long long isqrt(long long x) {
  if (x < 0) throw DomainError("square root of a negative number");
  long long r = 0;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

inline void check_nkm(int n, int k, int m) {
  if (k < 1 || k > n || m < 1) throw DomainError("parameters need 1 <= k <= n and m >= 1");
}

}  // namespace detail

/// Largest d with mk ≤ min{m(n−d+1), n(m−d+1)}.
inline int singleton_max_d(int n, int k, int m) {
  detail::check_nkm(n, k, m);
  return static_cast<int>(std::min<long long>(n - k + 1, m - detail::ceil_div(1LL * k * m, n) + 1));
}

/// floor(min{n−k+s, sm, m(n−k)/n + m(s−1) + 1}).
inline int gen_weight_bound(int n, int k, int m, int s) {
  detail::check_nkm(n, k, m);
  if (s < 1 || s > k) throw DomainError("gen_weight_bound needs 1 <= s <= k");
  const long long third = detail::floor_div(1LL * m * (n - k), n) + 1LL * m * (s - 1) + 1;
  return static_cast<int>(std::min({static_cast<long long>(n - k + s), 1LL * s * m, third}));
}

inline bool meets_singleton(int n, int k, int m, int d) {
  return 1LL * m * k == std::min(1LL * m * (n - d + 1), 1LL * n * (m - d + 1));
}

inline bool is_mrd(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  return meets_singleton(C.n(), C.k(), static_cast<int>(C.tower().m()), min_rank_distance(C, budget));
}

inline bool is_s_mrd(const RankMetricCode& C, int s, const Budget& budget = Budget::from_env()) {
  if (s < 1 || s > C.k()) throw DomainError("is_s_mrd needs 1 <= s <= k");
  return generalized_weights_geometric(C, budget).at(s) == C.n() - C.k() + s;
}

// ---- rank defect ---------------------------------------------------------------

struct DefectResult {
  int value = 0;
  /// Set when n ≤ m, where the defect no longer measures distance to a sharp bound.
  bool advisory = false;
};

inline DefectResult rank_defect(int n, int k, int m, int d) {
  if (n < 1 || k < 0 || k > n || m < 1) throw DomainError("rank_defect parameters out of range");
  return {static_cast<int>(m - detail::ceil_div(1LL * k * m, n) - d + 1), n <= m};
}

inline DefectResult rank_defect(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  return rank_defect(C.n(), C.k(), static_cast<int>(C.tower().m()), min_rank_distance(C, budget));
}

inline bool is_quasi_mrd(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  return rank_defect(C, budget).value == 0;
}

// ---- near MRD ------------------------------------------------------------------

struct NearMrdResult {
  bool value = false;
  bool by_profile = false;    // d = n−k and d_2 = n−k+2
  bool by_duality = false;    // d(C) + d(C^⊥) = n
  bool by_geometry = false;   // (k−2)-scattered, not (k−1)-scattered, (k−1,k)-evasive
  std::string criterion;
};

/// Evaluates the three equivalent near-MRD criteria and insists they agree.
inline NearMrdResult is_near_mrd(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  auto nd = is_nondegenerate(C);
  if (!nd.value) throw DomainError("is_near_mrd requires a nondegenerate code (" + nd.criterion + ")");
  const int n = C.n(), k = C.k();
  NearMrdResult res;

  const WeightProfile P = generalized_weights_geometric(C, budget);
  res.by_profile = P.at(1) == n - k && (k < 2 || P.at(2) == n - k + 2);

  const int d = P.at(1);
  auto D = dual(C);
  const int d_dual = std::holds_alternative<ZeroCode>(D) ? n + 1 : min_rank_distance(std::get<RankMetricCode>(D), budget);
  res.by_duality = d + d_dual == n;

  const QSystem U = phi(C);
  const bool scattered_k2 = k < 2 || is_h_scattered(U, k - 2, budget);
  const bool scattered_k1 = is_h_scattered(U, k - 1, budget);
  const bool evasive = is_evasive(U, k - 1, k, ScanMode::short_circuit, budget).value;
  res.by_geometry = scattered_k2 && !scattered_k1 && evasive;

  if (res.by_profile != res.by_duality || res.by_profile != res.by_geometry)
    throw ConsistencyError("near-MRD criteria disagree: profile " + std::to_string(res.by_profile) + ", duality " +
                           std::to_string(res.by_duality) + ", geometry " + std::to_string(res.by_geometry));
  res.value = res.by_profile;
  res.criterion = "profile, duality and geometric criteria agree";
  return res;
}

struct NearMrdLengthBound {
  /// Largest possible length, or nullopt when no near-MRD code exists (m < k).
  std::optional<int> bound;
  /// min{floor(km/(k−1)), m+t}; defined for k ≥ 2.
  std::optional<int> general;
  int t = 0;
};

inline NearMrdLengthBound near_mrd_length_bound(int k, int m) {
  if (k < 1 || m < 1) throw DomainError("near_mrd_length_bound needs k, m >= 1");
  NearMrdLengthBound out;
  // t = max{i ≥ 0 : i² + (m−k−1)i − m ≤ 0}
  long long t = 0;
  while ((t + 1) * (t + 1) + 1LL * (m - k - 1) * (t + 1) - m <= 0) ++t;
  out.t = static_cast<int>(t);
  // Closed form floor((k+1−m+√D)/2) with D = (m−k−1)² + 4m, evaluated with isqrt.
  const long long D = 1LL * (m - k - 1) * (m - k - 1) + 4LL * m;
  const long long t_closed = detail::floor_div(k + 1 - m + detail::isqrt(D), 2);
  if (t_closed != t) throw ConsistencyError("closed form for t disagrees with its integer definition");
  if (k >= 2) out.general = static_cast<int>(std::min<long long>(detail::floor_div(1LL * k * m, k - 1), m + t));
  if (m >= k) out.bound = m == 2 * k - 2 ? m + 2 : m + 1;
  if (out.bound && out.general && *out.bound > *out.general)
    throw ConsistencyError("sharp near-MRD length bound exceeds the general one");
  return out;
}

// ---- scattered / evasive parameters ----------------------------------------------

inline int scattered_dim_bound(int k, int m, int h) {
  if (h < 0 || h >= k || m < 1) throw DomainError("scattered_dim_bound needs 0 <= h < k and m >= 1");
  return static_cast<int>(1LL * k * m / (h + 1));
}

struct Feasibility {
  bool feasible = true;
  std::vector<std::string> violated;  // the failed necessary conditions
};

/// Necessary conditions for an (h,r)-evasive [n,k] system over F_{q^m}/F_q.
/// Conditions routed through the dual code only apply when n > k and the
/// dual index r−h+1 is at most n−k; for n = k the system F_q^k is h-scattered
/// for every h.
inline Feasibility evasive_feasible(int k, int m, int h, int r, int n) {
  if (h < 0 || h >= k || m < 1 || n < k) throw DomainError("evasive_feasible needs 0 <= h < k <= n, m >= 1");
  Feasibility f;
  auto fail = [&](const std::string& why) {
    f.feasible = false;
    f.violated.push_back(why);
  };
  if (r < h) {
    fail("r >= h");
    return f;
  }
  const bool dual_applies = n > k && r - h + 1 <= n - k;
  if (r == h && n > k) {
    if (1LL * n * (h + 1) > 1LL * k * m) fail("n <= km/(h+1)");
    if (m < h + 2) fail("m >= h+2");
  }
  if (h == k - 1 && 1LL * k * m > 1LL * n * (m - n + r + 1)) fail("km <= n(m-n+r+1)");
  if (dual_applies && 1LL * (r - h + 1) * (m - 1) < h + 1) fail("r >= h-1+(h+1)/(m-1)");
  if (n > 1LL * k * m - 1LL * h * m + r) fail("n <= km-hm+r");
  if (dual_applies && 1LL * r * (m - 1) <= 1LL * m * h) {
    const long long denom = r + 1 - 1LL * m * (r - h);
    if (1LL * n * denom > 1LL * k * m) fail("n <= km/(r+1-m(r-h))");
  }
  return f;
}

/// km − (h+2)·floor(km/(h+1)); negative values make quasi-maximum h-scattered
/// systems correspond to quasi-MRD duals.
inline long long quasi_link_condition(int k, int m, int h) {
  const long long km = 1LL * k * m;
  return km - (h + 2LL) * (km / (h + 1));
}

struct LinkCheck {
  std::string name;
  bool geometric = false;  // the system-side truth value
  bool coding = false;     // the code-side truth value
};

struct LinkResult {
  bool value = false;  // U is h-scattered
  std::vector<LinkCheck> checks;
};

/// Evaluates every applicable h-scattered ⇔ code property equivalence on both
/// sides independently.  Throws ConsistencyError on any disagreement.
inline LinkResult hscattered_code_link(const RankMetricCode& C, int h, const Budget& budget = Budget::from_env()) {
  const int n = C.n(), k = C.k(), m = static_cast<int>(C.tower().m());
  if (h < 0 || h >= k) throw DomainError("hscattered_code_link needs 0 <= h < k");
  const QSystem U = phi(C);
  LinkResult res;
  res.value = is_h_scattered(U, h, budget);

  const WeightProfile P = generalized_weights_galois(C, budget);
  res.checks.push_back({"h-scattered vs (k-h)-MRD", res.value, P.at(k - h) == n - h});

  if (n > k) {
    const RankMetricCode Cd = dual_code(C);
    const DefectResult def = rank_defect(Cd, budget);
    res.checks.push_back({"h-scattered vs dual defect bound", res.value,
                          def.value <= static_cast<long long>(1LL * k * m / n) - h - 1});
    const long long km = 1LL * k * m;
    const long long a = km / (h + 1), eps = km - (h + 1) * a;
    if (n == a) {
      res.checks.push_back({"quasi-maximum vs dual defect bound", res.value, def.value <= eps / a});
      if (quasi_link_condition(k, m, h) < 0)
        res.checks.push_back({"quasi-maximum vs quasi-MRD dual", res.value, def.value == 0});
    }
  }
  if (1LL * k * m % (h + 1) == 0 && 1LL * n * (h + 1) == 1LL * k * m)
    res.checks.push_back({"maximum h-scattered vs MRD", res.value, is_mrd(C, budget)});

  for (const auto& c : res.checks)
    if (c.geometric != c.coding)
      throw ConsistencyError("equivalence '" + c.name + "' failed: system side " + std::to_string(c.geometric) +
                             ", code side " + std::to_string(c.coding));
  return res;
}

// ---- report --------------------------------------------------------------------

struct ClassificationReport {
  int n = 0, k = 0, m = 0;
  std::uint32_t q = 0;
  std::optional<int> d;
  std::optional<WeightProfile> profile;
  std::optional<WeightProfile> dual_profile;
  std::optional<int> rank_defect;
  bool defect_advisory = false;
  std::map<std::string, bool> flags;
  std::vector<bool> s_mrd;  // s_mrd[s-1]
  std::map<std::string, long long> bounds;
  std::map<std::string, std::string> unavailable;
};

inline ClassificationReport classify_report(const RankMetricCode& C, const Budget& budget = Budget::from_env()) {
  ClassificationReport R;
  R.n = C.n();
  R.k = C.k();
  R.m = static_cast<int>(C.tower().m());
  R.q = C.tower().q();
  const int n = R.n, k = R.k, m = R.m;

  R.bounds["singleton_max_d"] = singleton_max_d(n, k, m);
  for (int s = 1; s <= k; ++s) R.bounds["gen_weight_bound_" + std::to_string(s)] = gen_weight_bound(n, k, m, s);
  const auto nb = near_mrd_length_bound(k, m);
  if (nb.bound) R.bounds["near_mrd_length_bound"] = *nb.bound;
  for (int h = 0; h < k; ++h) R.bounds["scattered_dim_bound_" + std::to_string(h)] = scattered_dim_bound(k, m, h);

  const bool nondeg = is_nondegenerate(C).value;
  R.flags["is_nondegenerate"] = nondeg;

  try {
    R.d = min_rank_distance(C, budget);
    R.flags["is_mrd"] = meets_singleton(n, k, m, *R.d);
    const auto def = rank_defect(n, k, m, *R.d);
    R.rank_defect = def.value;
    R.defect_advisory = def.advisory;
    R.flags["is_quasi_mrd"] = def.value == 0;
  } catch (const BudgetExceeded& e) {
    R.unavailable["d"] = e.what();
  }

  if (!nondeg) {
    R.unavailable["profile"] = "code is degenerate";
    R.unavailable["is_near_mrd"] = "code is degenerate";
    R.unavailable["s_mrd"] = "code is degenerate";
  } else {
    try {
      R.profile = generalized_weights_geometric(C, budget);
      for (int s = 1; s <= k; ++s) R.s_mrd.push_back(R.profile->at(s) == n - k + s);
      R.flags["is_1_mrd"] = R.s_mrd[0];
    } catch (const BudgetExceeded& e) {
      R.unavailable["profile"] = e.what();
    }
    try {
      R.flags["is_near_mrd"] = is_near_mrd(C, budget).value;
    } catch (const BudgetExceeded& e) {
      R.unavailable["is_near_mrd"] = e.what();
    }
  }

  if (k < n) {
    const RankMetricCode Cd = dual_code(C);
    if (is_nondegenerate(Cd).value) {
      try {
        R.dual_profile = generalized_weights(Cd, budget);
      } catch (const BudgetExceeded& e) {
        R.unavailable["dual_profile"] = e.what();
      }
    } else {
      R.unavailable["dual_profile"] = "dual code is degenerate";
    }
  } else {
    R.unavailable["dual_profile"] = "dual is the zero code";
  }
  return R;
}

}  // namespace rankgeo
