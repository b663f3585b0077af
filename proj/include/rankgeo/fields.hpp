#pragma once

// Arithmetic in a finite field tower F_p ⊆ F_q ⊆ F_{q^m}.
//
// Elements of F_{q^m} are packed coefficient vectors: an element
//   c_0 + c_1 x + ... + c_{m-1} x^{m-1}   (c_i ∈ F_q, power basis of gqm)
// is stored as the integer code  c_0 + c_1 q + ... + c_{m-1} q^{m-1},  and each
// F_q coordinate c_i is itself packed as  d_0 + d_1 p + ... + d_{e-1} p^{e-1}
// over the power basis of gq.  Codes below q are exactly the elements of F_q,
// so the same code type serves both fields.  Addition is digit-wise mod p;
// multiplication goes through exp/log tables built once per tower.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankgeo/errors.hpp"

namespace rankgeo {

using Elem = std::uint32_t;
/// Polynomial coefficients, constant term first.
using Poly = std::vector<Elem>;

/// Largest supported q^m.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 20;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Splits a prime power q = p^e; returns nullopt if q is not a prime power.
inline std::optional<std::pair<std::uint32_t, unsigned>> split_prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  auto primes = prime_divisors(q);
  if (primes.size() != 1) return std::nullopt;
  unsigned e = 0;
  while (q > 1) {
    q /= primes[0];
    ++e;
  }
  return std::make_pair(static_cast<std::uint32_t>(primes[0]), e);
}

/// Field GF(p^N) on packed base-p digit codes.
class GaloisField {
 public:
  GaloisField() = default;

  /// `slow_mul` is any correct multiplication on codes; it is only used to
  /// build the tables.
  GaloisField(std::uint32_t p, unsigned digits, const std::function<Elem(Elem, Elem)>& slow_mul)
      : p_(p), digits_(digits) {
    size_ = 1;
    for (unsigned i = 0; i < digits; ++i) size_ *= p;
    build_negation();
    build_tables(slow_mul);
  }

  std::uint32_t size() const noexcept { return size_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  unsigned digits() const noexcept { return digits_; }
  Elem primitive() const noexcept { return primitive_; }

  Elem add(Elem a, Elem b) const noexcept {
    if (p_ == 2) return a ^ b;
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint32_t la = log_[a];
    const std::uint32_t lb = log_[b];
    const std::uint32_t d = lb >= la ? lb - la : lb + (size_ - 1) - la;
    const std::uint32_t z = zech_[d];
    if (z == kNoLog) return 0;
    return exp_[la + z];
  }
  Elem neg(Elem a) const noexcept { return p_ == 2 ? a : neg_[a]; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const {
    if (a == 0) throw DomainError("inversion of zero");
    return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
  }
  Elem pow(Elem a, std::int64_t e) const {
    if (e == 0) return 1;
    if (a == 0) {
      if (e < 0) throw DomainError("inversion of zero");
      return 0;
    }
    const std::int64_t ord = size_ - 1;
    std::int64_t r = (static_cast<std::int64_t>(log_[a]) * (e % ord)) % ord;
    if (r < 0) r += ord;
    return exp_[static_cast<std::size_t>(r)];
  }
  /// Discrete log to the table's primitive element; a must be nonzero.
  std::uint32_t log(Elem a) const noexcept { return log_[a]; }
  Elem exp(std::uint64_t i) const noexcept { return exp_[i % (size_ - 1)]; }

  /// Digit-wise sum of two codes (valid addition for any code layout in base p).
  Elem digit_add(Elem a, Elem b) const noexcept {
    if (p_ == 2) return a ^ b;
    Elem out = 0, pw = 1;
    for (unsigned i = 0; i < digits_; ++i) {
      out += ((a % p_ + b % p_) % p_) * pw;
      a /= p_;
      b /= p_;
      pw *= p_;
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kNoLog = 0xffffffffu;

  void build_negation() {
    if (p_ == 2) return;
    neg_.resize(size_);
    for (Elem a = 0; a < size_; ++a) {
      Elem x = a, out = 0, pw = 1;
      for (unsigned i = 0; i < digits_; ++i) {
        out += ((p_ - x % p_) % p_) * pw;
        x /= p_;
        pw *= p_;
      }
      neg_[a] = out;
    }
  }

  void build_tables(const std::function<Elem(Elem, Elem)>& slow_mul) {
    const std::uint32_t ord = size_ - 1;
    auto slow_pow = [&](Elem a, std::uint64_t e) {
      Elem r = 1;
      while (e) {
        if (e & 1) r = slow_mul(r, a);
        a = slow_mul(a, a);
        e >>= 1;
      }
      return r;
    };
    primitive_ = 1;
    if (ord > 1) {
      const auto primes = prime_divisors(ord);
      primitive_ = 0;
      for (Elem c = 2; c < size_; ++c) {
        bool ok = true;
        for (auto r : primes) {
          if (slow_pow(c, ord / r) == 1) {
            ok = false;
            break;
          }
        }
        if (ok) {
          primitive_ = c;
          break;
        }
      }
      if (primitive_ == 0) throw ConsistencyError("no primitive element: modulus is not irreducible");
    }
    exp_.assign(2 * static_cast<std::size_t>(ord), 0);
    log_.assign(size_, kNoLog);
    Elem x = 1;
    for (std::uint32_t i = 0; i < ord; ++i) {
      if (log_[x] != kNoLog) throw ConsistencyError("multiplicative group is not cyclic of full order");
      exp_[i] = x;
      log_[x] = i;
      x = slow_mul(x, primitive_);
    }
    for (std::uint32_t i = 0; i < ord; ++i) exp_[ord + i] = exp_[i];
    if (p_ != 2) {
      zech_.assign(ord, kNoLog);
      for (std::uint32_t d = 0; d < ord; ++d) {
        const Elem s = digit_add(1, exp_[d]);
        zech_[d] = s == 0 ? kNoLog : log_[s];
      }
    }
  }

  std::uint32_t p_ = 2;
  unsigned digits_ = 1;
  std::uint32_t size_ = 2;
  Elem primitive_ = 1;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;
  std::vector<Elem> neg_;
};

// ---- polynomials over a GaloisField ------------------------------------------

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly code_to_poly(Elem code, std::uint32_t base, unsigned len) {
  Poly f(len);
  for (unsigned i = 0; i < len; ++i) {
    f[i] = code % base;
    code /= base;
  }
  return f;
}

inline Elem poly_to_code(const Poly& f, std::uint32_t base) {
  Elem code = 0;
  for (std::size_t i = f.size(); i-- > 0;) code = code * base + f[i];
  return code;
}

/// Remainder of a modulo a nonzero polynomial m.
inline Poly poly_rem(Poly a, const Poly& m, const GaloisField& F) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const Elem lead_inv = F.inv(m.back());
  while (a.size() > dm) {
    const Elem c = F.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, m[i]));
    trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, const GaloisField& F) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = F.add(prod[i + j], F.mul(a[i], b[j]));
  }
  return poly_rem(std::move(prod), m, F);
}

/// Trial division by every monic polynomial of degree ≤ deg/2.
inline bool is_irreducible(Poly f, const GaloisField& F) {
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  const std::uint64_t s = F.size();
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= s;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly g = code_to_poly(static_cast<Elem>(c), F.size(), static_cast<unsigned>(d));
      g.push_back(1);
      if (poly_rem(f, g, F).empty()) return false;
    }
  }
  return true;
}

/// Smallest monic irreducible of the given degree, ordering candidates by
/// the integer Σ c_i s^i of their lower coefficients (c_i as codes).
inline Poly smallest_irreducible(unsigned degree, const GaloisField& F) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < degree; ++i) count *= F.size();
  for (std::uint64_t c = 0; c < count; ++c) {
    Poly f = code_to_poly(static_cast<Elem>(c), F.size(), degree);
    f.push_back(1);
    if (is_irreducible(f, F)) return f;
  }
  throw ConsistencyError("no irreducible polynomial found");
}

}  // namespace detail

/// The tower F_p ⊆ F_q ⊆ F_{q^m}.  Immutable once built; share through TowerPtr.
class FieldTower {
 public:
  /// Builds and validates a tower.  Omitted polynomials default to the
  /// smallest monic irreducible.  `gq` holds F_p coefficients (length e+1),
  /// `gqm` holds F_q codes (length m+1), both constant term first.
  FieldTower(std::uint32_t p, unsigned e, unsigned m, std::optional<Poly> gq = std::nullopt,
             std::optional<Poly> gqm = std::nullopt)
      : p_(p), e_(e), m_(m) {
    if (!detail::is_prime(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
    if (e < 1 || m < 1) throw DomainError("field degrees e and m must be at least 1");
    std::uint64_t q = 1, order = 1;
    for (unsigned i = 0; i < e; ++i) {
      q *= p;
      if (q > kMaxFieldOrder) throw DomainError("field order exceeds 2^20");
    }
    for (unsigned i = 0; i < m; ++i) {
      order *= q;
      if (order > kMaxFieldOrder) throw DomainError("field order q^m exceeds 2^20");
    }
    q_ = static_cast<std::uint32_t>(q);
    order_ = static_cast<std::uint32_t>(order);

    const detail::GaloisField prime(p, 1, [p](Elem a, Elem b) {
      return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p);
    });
    gq_ = gq ? validate_modulus(*gq, e, prime, "gq") : detail::smallest_irreducible(e, prime);
    base_ = detail::GaloisField(p, e, [this, &prime](Elem a, Elem b) {
      return detail::poly_to_code(
          detail::poly_mulmod(detail::code_to_poly(a, p_, e_), detail::code_to_poly(b, p_, e_), gq_, prime), p_);
    });
    gqm_ = gqm ? validate_modulus(*gqm, m, base_, "gqm") : detail::smallest_irreducible(m, base_);
    ext_ = detail::GaloisField(p, e * m, [this](Elem a, Elem b) {
      return detail::poly_to_code(
          detail::poly_mulmod(detail::code_to_poly(a, q_, m_), detail::code_to_poly(b, q_, m_), gqm_, base_), q_);
    });

    q_powers_.resize(m_);
    frob_exp_.resize(m_);
    std::uint64_t pw = 1, fe = 1;
    for (unsigned i = 0; i < m_; ++i) {
      q_powers_[i] = static_cast<Elem>(pw);
      frob_exp_[i] = order_ > 1 ? fe % (order_ - 1) : 0;
      pw *= q_;
      fe = (fe * q_) % std::max<std::uint64_t>(order_ - 1, 1);
    }
  }

  std::uint32_t p() const noexcept { return p_; }
  unsigned e() const noexcept { return e_; }
  unsigned m() const noexcept { return m_; }
  std::uint32_t q() const noexcept { return q_; }
  /// q^m.
  std::uint32_t order() const noexcept { return order_; }
  const Poly& gq() const noexcept { return gq_; }
  const Poly& gqm() const noexcept { return gqm_; }

  bool contains(Elem x) const noexcept { return x < order_; }
  bool in_base(Elem x) const noexcept { return x < q_; }

  Elem add(Elem a, Elem b) const noexcept { return ext_.add(a, b); }
  Elem sub(Elem a, Elem b) const noexcept { return ext_.sub(a, b); }
  Elem neg(Elem a) const noexcept { return ext_.neg(a); }
  Elem mul(Elem a, Elem b) const noexcept { return ext_.mul(a, b); }
  Elem inv(Elem a) const { return ext_.inv(a); }
  Elem div(Elem a, Elem b) const { return ext_.mul(a, ext_.inv(b)); }
  Elem pow(Elem a, std::int64_t e) const { return ext_.pow(a, e); }

  /// x^{q^i}; i is taken mod m.
  Elem frobenius(Elem x, std::int64_t i = 1) const noexcept {
    if (x == 0) return 0;
    std::int64_t j = i % static_cast<std::int64_t>(m_);
    if (j < 0) j += m_;
    return ext_.exp(static_cast<std::uint64_t>(ext_.log(x)) * frob_exp_[static_cast<std::size_t>(j)]);
  }

  /// Tr_{F_{q^m}/F_q}(x) = Σ_{i<m} x^{q^i}; always a code below q.
  Elem trace(Elem x) const noexcept {
    Elem t = 0;
    for (unsigned i = 0; i < m_; ++i) t = add(t, frobenius(x, i));
    return t;
  }

  /// The power-basis element x^i (0 ≤ i < m) of F_{q^m} over F_q.
  Elem basis(unsigned i) const noexcept { return q_powers_[i]; }

  /// i-th F_q coordinate of x in the power basis.
  Elem coord(Elem x, unsigned i) const noexcept { return (x / q_powers_[i]) % q_; }

  std::vector<Elem> coords(Elem x) const {
    std::vector<Elem> c(m_);
    for (unsigned i = 0; i < m_; ++i) c[i] = coord(x, i);
    return c;
  }

  Elem from_coords(std::span<const Elem> c) const {
    if (c.size() > m_) throw DomainError("too many F_q coordinates for an element of F_{q^m}");
    Elem x = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= q_) throw DomainError("coordinate is not an element of F_q");
      x += c[i] * q_powers_[i];
    }
    return x;
  }

  /// F_p digits of an F_q element in the power basis of gq.
  std::vector<Elem> base_digits(Elem c) const { return detail::code_to_poly(c, p_, e_); }

  Elem from_base_digits(std::span<const Elem> d) const {
    if (d.size() > e_) throw DomainError("too many F_p coordinates for an element of F_q");
    Elem x = 0, pw = 1;
    for (auto v : d) {
      if (v >= p_) throw DomainError("coordinate is not an element of F_p");
      x += v * pw;
      pw *= p_;
    }
    return x;
  }

  /// Coordinate-wise expansion of v ∈ F_{q^m}^L into F_q^{mL}.
  std::vector<Elem> flatten(std::span<const Elem> v) const {
    std::vector<Elem> out;
    out.reserve(v.size() * m_);
    for (auto x : v)
      for (unsigned i = 0; i < m_; ++i) out.push_back(coord(x, i));
    return out;
  }

  std::vector<Elem> unflatten(std::span<const Elem> flat) const {
    if (flat.size() % m_ != 0) throw DomainError("flattened length is not a multiple of m");
    std::vector<Elem> out(flat.size() / m_);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = from_coords(flat.subspan(j * m_, m_));
    return out;
  }

  bool same_as(const FieldTower& o) const noexcept {
    return p_ == o.p_ && e_ == o.e_ && m_ == o.m_ && gq_ == o.gq_ && gqm_ == o.gqm_;
  }

  std::string describe() const {
    return "F_" + std::to_string(order_) + "/F_" + std::to_string(q_);
  }

  const detail::GaloisField& base_field() const noexcept { return base_; }
  const detail::GaloisField& field() const noexcept { return ext_; }

 private:
  static Poly validate_modulus(Poly f, unsigned degree, const detail::GaloisField& F, const char* name) {
    if (f.size() != degree + 1)
      throw DomainError(std::string(name) + " must have degree " + std::to_string(degree));
    for (auto c : f)
      if (c >= F.size()) throw DomainError(std::string(name) + " has a coefficient outside its field");
    if (f.back() != 1) throw DomainError(std::string(name) + " must be monic");
    if (!detail::is_irreducible(f, F)) throw DomainError(std::string(name) + " is reducible");
    return f;
  }

  std::uint32_t p_;
  unsigned e_;
  unsigned m_;
  std::uint32_t q_ = 0;
  std::uint32_t order_ = 0;
  Poly gq_;
  Poly gqm_;
  detail::GaloisField base_;
  detail::GaloisField ext_;
  std::vector<Elem> q_powers_;
  std::vector<std::uint64_t> frob_exp_;
};

using TowerPtr = std::shared_ptr<const FieldTower>;

inline TowerPtr make_tower(std::uint32_t p, unsigned e, unsigned m, std::optional<Poly> gq = std::nullopt,
                           std::optional<Poly> gqm = std::nullopt) {
  return std::make_shared<const FieldTower>(p, e, m, std::move(gq), std::move(gqm));
}

/// Tower F_{q^m}/F_q for a prime power q with default polynomials.
inline TowerPtr make_tower_q(std::uint64_t q, unsigned m) {
  auto pe = detail::split_prime_power(q);
  if (!pe) throw DomainError("q = " + std::to_string(q) + " is not a prime power");
  return make_tower(pe->first, pe->second, m);
}

}  // namespace rankgeo
