#pragma once

// JSON documents for fields, codes, systems, witnesses and reports.
//
// An F_{q^m} element is an array of m F_q coordinates (power basis of gqm,
// low to high).  An F_q element is an integer when e = 1 and otherwise an
// array of e F_p coordinates.  On input a bare integer is also accepted for
// either kind and read as the packed code.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "rankgeo/classify.hpp"
#include "rankgeo/codes.hpp"
#include "rankgeo/errors.hpp"
#include "rankgeo/fields.hpp"
#include "rankgeo/qsystems.hpp"

namespace rankgeo::io {

using json = nlohmann::json;

inline json fq_to_json(const FieldTower& T, Elem c) {
  if (T.e() == 1) return c;
  json a = json::array();
  for (auto d : T.base_digits(c)) a.push_back(d);
  return a;
}

inline Elem fq_from_json(const FieldTower& T, const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v < 0 || v >= static_cast<long long>(T.q())) throw DomainError("F_q element " + j.dump() + " out of range");
    return static_cast<Elem>(v);
  }
  if (!j.is_array()) throw DomainError("F_q element must be an integer or an array");
  std::vector<Elem> digits;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<long long>() < 0) throw DomainError("F_p coordinate must be a nonnegative integer");
    digits.push_back(static_cast<Elem>(d.get<long long>()));
  }
  return T.from_base_digits(digits);
}

inline json elem_to_json(const FieldTower& T, Elem x) {
  json a = json::array();
  for (auto c : T.coords(x)) a.push_back(fq_to_json(T, c));
  return a;
}

inline Elem elem_from_json(const FieldTower& T, const json& j) {
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v < 0 || v >= static_cast<long long>(T.order())) throw DomainError("element " + j.dump() + " out of range");
    return static_cast<Elem>(v);
  }
  if (!j.is_array()) throw DomainError("field element must be an array of F_q coordinates");
  std::vector<Elem> cs;
  for (const auto& c : j) cs.push_back(fq_from_json(T, c));
  return T.from_coords(cs);
}

inline json field_to_json(const FieldTower& T) {
  json gq = json::array(), gqm = json::array();
  for (auto c : T.gq()) gq.push_back(c);
  for (auto c : T.gqm()) gqm.push_back(fq_to_json(T, c));
  return {{"p", T.p()}, {"e", T.e()}, {"m", T.m()}, {"gq", gq}, {"gqm", gqm}};
}

inline TowerPtr field_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("field specification must be an object");
  auto uint_field = [&](const char* key, long long def) -> long long {
    if (!j.contains(key)) {
      if (def < 0) throw DomainError(std::string("field specification lacks \"") + key + "\"");
      return def;
    }
    if (!j[key].is_number_integer() || j[key].get<long long>() < 1)
      throw DomainError(std::string("field \"") + key + "\" must be a positive integer");
    return j[key].get<long long>();
  };
  const long long p = uint_field("p", -1), e = uint_field("e", 1), m = uint_field("m", -1);
  if (p > (1 << 20) || e > 20 || m > 20) throw DomainError("field parameters too large");
  std::optional<Poly> gq, gqm;
  if (j.contains("gq")) {
    if (!j["gq"].is_array()) throw DomainError("\"gq\" must be an array");
    Poly f;
    for (const auto& c : j["gq"]) {
      if (!c.is_number_integer() || c.get<long long>() < 0 || c.get<long long>() >= p)
        throw DomainError("\"gq\" coefficients must be F_p elements");
      f.push_back(static_cast<Elem>(c.get<long long>()));
    }
    gq = f;
  }
  if (j.contains("gqm")) {
    if (!j["gqm"].is_array()) throw DomainError("\"gqm\" must be an array");
    // Coefficients are F_q elements; decode them against a tower carrying gq.
    const auto probe = make_tower(static_cast<std::uint32_t>(p), static_cast<unsigned>(e), 1, gq);
    Poly f;
    for (const auto& c : j["gqm"]) f.push_back(fq_from_json(*probe, c));
    gqm = f;
  }
  return make_tower(static_cast<std::uint32_t>(p), static_cast<unsigned>(e), static_cast<unsigned>(m), gq, gqm);
}

inline json mat_to_json(const FieldTower& T, const Mat& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows; ++i) {
    json r = json::array();
    for (int j = 0; j < M.cols; ++j) r.push_back(M.tag == FieldTag::base ? fq_to_json(T, M(i, j)) : elem_to_json(T, M(i, j)));
    rows.push_back(r);
  }
  return rows;
}

inline Mat mat_from_json(const FieldTower& T, const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw DomainError(std::string("\"") + what + "\" must be a nonempty array of rows");
  std::vector<std::vector<Elem>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw DomainError(std::string("rows of \"") + what + "\" must be arrays");
    std::vector<Elem> row;
    for (const auto& x : r) row.push_back(elem_from_json(T, x));
    rows.push_back(std::move(row));
  }
  return Mat::from_rows(rows);
}

inline json code_to_json(const RankMetricCode& C) {
  return {{"field", field_to_json(C.tower())}, {"generator", mat_to_json(C.tower(), C.generator())}};
}

inline RankMetricCode code_from_json(const json& j) {
  if (!j.is_object() || !j.contains("field") || !j.contains("generator"))
    throw DomainError("code document needs \"field\" and \"generator\"");
  auto T = field_from_json(j["field"]);
  return RankMetricCode(T, mat_from_json(*T, j["generator"], "generator"));
}

inline json system_to_json(const QSystem& U) {
  return {{"field", field_to_json(U.tower())}, {"basis", mat_to_json(U.tower(), U.basis())}};
}

inline QSystem system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("field") || !j.contains("basis"))
    throw DomainError("system document needs \"field\" and \"basis\"");
  auto T = field_from_json(j["field"]);
  return QSystem(T, mat_from_json(*T, j["basis"], "basis"));
}

inline json profile_to_json(const WeightProfile& P) { return P.weights; }

inline json witness_to_json(const FieldTower& T, const EvasiveWitness& w) {
  return {{"W", mat_to_json(T, w.W)}, {"intersection_dim", w.intersection_dim}};
}

inline json report_to_json(const ClassificationReport& R) {
  json j;
  j["n"] = R.n;
  j["k"] = R.k;
  j["m"] = R.m;
  j["q"] = R.q;
  j["d"] = R.d ? json(*R.d) : json(nullptr);
  j["profile"] = R.profile ? profile_to_json(*R.profile) : json(nullptr);
  j["dual_profile"] = R.dual_profile ? profile_to_json(*R.dual_profile) : json(nullptr);
  j["rank_defect"] = R.rank_defect ? json(*R.rank_defect) : json(nullptr);
  j["defect_advisory"] = R.defect_advisory;
  j["flags"] = R.flags;
  json s = json::object();
  for (std::size_t i = 0; i < R.s_mrd.size(); ++i) s[std::to_string(i + 1)] = static_cast<bool>(R.s_mrd[i]);
  j["is_s_mrd"] = s;
  j["bounds"] = R.bounds;
  j["unavailable"] = R.unavailable;
  return j;
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(origin + ": invalid JSON: " + e.what());
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError(path + ": file not found or unreadable");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

}  // namespace rankgeo::io
