#pragma once

// The rankgeo command-line front end.  `run` is separate from main so tests
// can drive it with captured streams.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rankgeo/rankgeo.hpp"

namespace rankgeo::cli {

using io::json;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int domain = 1;
inline constexpr int budget = 2;
inline constexpr int consistency = 3;
}  // namespace exit_code

namespace detail {

inline void render_table(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      render_table(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_object(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) render_table(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << j.dump() << "\n";
  }
}

struct Input {
  std::string code;
  std::string system;
};

inline RankMetricCode load_code(const std::string& path) { return io::code_from_json(io::load_json_file(path)); }

inline QSystem load_system_or_code(const Input& in) {
  if (!in.system.empty()) return io::system_from_json(io::load_json_file(in.system));
  if (!in.code.empty()) return phi(load_code(in.code));
  throw DomainError("one of --system or --code is required");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact toolkit for F_{q^m}-linear rank-metric codes and q-systems", "rankgeo"};
  // Subcommands inherit this; it frees "-h" for the --h options.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> budget_opt;
  int workers = 1;
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
  app.add_option("--budget", budget_opt, "maximum subspaces per enumeration (default 10^7 or RANKGEO_BUDGET)")
      ->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "worker threads for subspace scans")->check(CLI::Range(1, 256));
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--output", output, "write the result to this file instead of stdout");
  app.add_option("--seed", seed, "seed for randomized modes");

  detail::Input in;
  std::string algorithm = "geometric";
  auto* weights = app.add_subcommand("weights", "minimum distance and generalized rank weights of a code");
  weights->add_option("--code", in.code, "code document")->required();
  weights->add_option("--algorithm", algorithm, "weight algorithm")->check(CLI::IsMember({"geometric", "galois"}));

  auto* classify = app.add_subcommand("classify", "bounds, defect and MRD-family membership of a code");
  classify->add_option("--code", in.code, "code document")->required();

  std::optional<int> h_opt, r_opt;
  bool witness = false;
  auto* evasive = app.add_subcommand("evasive", "(h,r)-evasiveness of a system, or its intersection table");
  auto* ev_sys = evasive->add_option("--system", in.system, "system document");
  auto* ev_code = evasive->add_option("--code", in.code, "code document (its columns give the system)");
  ev_sys->excludes(ev_code);
  evasive->add_option("--h", h_opt, "F_{q^m}-dimension of the test subspaces");
  evasive->add_option("--r", r_opt, "intersection threshold");
  evasive->add_flag("--witness", witness, "scan fully and report a subspace of maximal intersection");

  auto* dual_cmd = app.add_subcommand("dual", "dual code, or rank-metric dual of a system");
  auto* du_sys = dual_cmd->add_option("--system", in.system, "system document");
  auto* du_code = dual_cmd->add_option("--code", in.code, "code document");
  du_sys->excludes(du_code);

  auto* spectrum = app.add_subcommand("spectrum", "intersection dimensions with all F_{q^m}-hyperplanes");
  auto* sp_sys = spectrum->add_option("--system", in.system, "system document");
  auto* sp_code = spectrum->add_option("--code", in.code, "code document");
  sp_sys->excludes(sp_code);

  // construct
  std::uint64_t q = 2;
  int m = 3, k = 2, n = 0, h = 1;
  std::vector<std::string> sum_codes;
  std::string mode = "exhaustive";
  std::uint64_t max_candidates = 10'000'000;
  int max_seconds = 60;
  auto* construct = app.add_subcommand("construct", "build codes and systems");
  construct->require_subcommand(1);
  auto add_field = [&](CLI::App* c) {
    c->add_option("--q", q, "base field size (a prime power)");
    c->add_option("--m", m, "extension degree");
  };
  auto* c_gab = construct->add_subcommand("gabidulin", "Gabidulin code on the power basis");
  add_field(c_gab);
  c_gab->add_option("--n", n, "length")->required();
  c_gab->add_option("--k", k, "dimension")->required();
  auto* c_pr = construct->add_subcommand("pseudoregulus", "the [m,k] system {(x, x^q, ...)}");
  add_field(c_pr);
  c_pr->add_option("--k", k, "dimension")->required();
  auto* c_nm = construct->add_subcommand("near-mrd", "the [m+1,k] system giving a near-MRD code");
  add_field(c_nm);
  c_nm->add_option("--k", k, "dimension")->required();
  auto* c_ds = construct->add_subcommand("direct-sum", "block-diagonal sum of codes");
  c_ds->add_option("--code", sum_codes, "code documents (repeatable)")->required();
  auto* c_search = construct->add_subcommand("search", "budgeted search for an h-scattered system");
  add_field(c_search);
  c_search->add_option("--k", k, "dimension")->required();
  c_search->add_option("--h", h, "scatteredness level")->required();
  c_search->add_option("--n", n, "F_q-dimension of the system")->required();
  c_search->add_option("--mode", mode, "search mode")->check(CLI::IsMember({"exhaustive", "random"}));
  c_search->add_option("--max-candidates", max_candidates, "candidate limit")->check(CLI::PositiveNumber);
  c_search->add_option("--max-seconds", max_seconds, "time limit")->check(CLI::PositiveNumber);

  // verify
  std::string suite_name;
  bool list = false;
  verify::SuiteParams vp;
  std::optional<std::uint64_t> v_q;
  std::optional<int> v_m, v_k, v_nmin, v_nmax, v_random, v_adjust;
  auto* verify_cmd = app.add_subcommand("verify", "run a theorem-verification suite");
  verify_cmd->add_option("suite", suite_name, "suite name");
  verify_cmd->add_flag("--list", list, "list the available suites");
  verify_cmd->add_option("--q", v_q, "base field size");
  verify_cmd->add_option("--m", v_m, "extension degree");
  verify_cmd->add_option("--k", v_k, "code dimension");
  verify_cmd->add_option("--n-min", v_nmin, "smallest length");
  verify_cmd->add_option("--n-max", v_nmax, "largest length");
  verify_cmd->add_option("--random", v_random, "extra seeded random instances");
  verify_cmd->add_option("--bound-adjust", v_adjust, "tighten one-sided bounds by this amount (self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::domain;
  }

  Budget budget = Budget::from_env();
  if (budget_opt) budget.max_subspaces = *budget_opt;
  budget.workers = workers;

  json result;
  int status = exit_code::ok;
  try {
    if (*weights) {
      const RankMetricCode C = detail::load_code(in.code);
      const WeightProfile P = algorithm == "galois" ? generalized_weights_galois(C, budget)
                                                    : generalized_weights_geometric(C, budget);
      result = {{"d", P.at(1)}, {"profile", P.weights}};
    } else if (*classify) {
      result = io::report_to_json(classify_report(detail::load_code(in.code), budget));
    } else if (*evasive) {
      const QSystem U = detail::load_system_or_code(in);
      if (h_opt.has_value() != r_opt.has_value()) throw DomainError("--h and --r must be given together");
      if (h_opt) {
        const auto res = is_evasive(U, *h_opt, *r_opt, witness ? ScanMode::full : ScanMode::short_circuit, budget);
        result = {{"h", *h_opt}, {"r", *r_opt}, {"evasive", res.value}};
        if (res.max_intersection) result["max_intersection"] = *res.max_intersection;
        if (res.witness) result["witness"] = io::witness_to_json(U.tower(), *res.witness);
      } else {
        json table = json::array();
        for (int hh = 0; hh < U.k(); ++hh) {
          const auto w = max_intersection(U, hh, budget);
          json row = {{"h", hh}, {"max_intersection", w.intersection_dim}};
          if (witness) row["witness"] = io::witness_to_json(U.tower(), w);
          table.push_back(row);
        }
        result = {{"n", U.n()}, {"k", U.k()}, {"intersections", table}};
      }
    } else if (*dual_cmd) {
      if (!in.system.empty()) {
        result = io::system_to_json(rank_metric_dual(io::system_from_json(io::load_json_file(in.system)), budget));
      } else if (!in.code.empty()) {
        const auto D = dual(detail::load_code(in.code));
        if (const auto* z = std::get_if<ZeroCode>(&D))
          result = {{"zero_code", {{"n", z->n}}}};
        else
          result = io::code_to_json(std::get<RankMetricCode>(D));
      } else {
        throw DomainError("one of --system or --code is required");
      }
    } else if (*spectrum) {
      const QSystem U = detail::load_system_or_code(in);
      const auto S = hyperplane_spectrum(U, budget);
      result = {{"spectrum", S}, {"max", S.back()}, {"d", U.n() - S.back()}};
    } else if (*construct) {
      auto tower = [&] { return make_tower_q(q, static_cast<unsigned>(m)); };
      if (*c_gab) {
        result = io::code_to_json(gabidulin(tower(), n, k));
      } else if (*c_pr) {
        result = io::system_to_json(pseudoregulus_system(tower(), k, budget));
      } else if (*c_nm) {
        result = io::system_to_json(near_mrd_system(tower(), k, budget));
      } else if (*c_ds) {
        std::vector<RankMetricCode> codes;
        for (const auto& p : sum_codes) codes.push_back(detail::load_code(p));
        result = io::code_to_json(direct_sum(codes));
      } else if (*c_search) {
        SearchBudget sb;
        sb.max_candidates = max_candidates;
        sb.max_seconds = max_seconds;
        sb.mode = mode == "random" ? SearchBudget::Mode::random : SearchBudget::Mode::exhaustive;
        sb.seed = seed;
        const auto res = search_scattered(tower(), k, h, n, sb, budget);
        result = {{"status", to_string(res.status)}, {"candidates", res.candidates}, {"reason", res.reason}};
        result["system"] = res.system ? io::system_to_json(*res.system) : json(nullptr);
        if (res.status == SearchResult::Status::budget_exhausted) status = exit_code::budget;
      }
    } else if (*verify_cmd) {
      if (list) {
        result = json::array();
        for (const auto& s : verify::suites())
          result.push_back({{"suite", s.name}, {"statement", s.statement}, {"two_sided", s.two_sided}});
      } else {
        const verify::SuiteSpec* spec = verify::find_suite(suite_name);
        if (!spec) throw DomainError("unknown suite '" + suite_name + "' (try verify --list)");
        vp = spec->defaults;
        if (v_q) vp.q = *v_q;
        if (v_m) vp.m = *v_m;
        if (v_k) vp.k = *v_k;
        if (v_nmin) vp.n_min = *v_nmin;
        if (v_nmax) vp.n_max = *v_nmax;
        if (v_random) vp.random_instances = *v_random;
        if (v_adjust) vp.bound_adjust = *v_adjust;
        vp.seed = seed;
        const auto rep = verify::run_suite(*spec, vp, budget);
        result = verify::report_to_json(*spec, rep);
        if (rep.failed > 0)
          status = spec->two_sided ? exit_code::consistency : exit_code::domain;
        else if (!rep.complete)
          status = exit_code::budget;
        if (rep.failed > 0) err << "suite " << spec->name << ": " << rep.failed << " failing instance(s)\n";
        if (!rep.complete) err << "suite " << spec->name << " incomplete: " << rep.incomplete_reason << "\n";
      }
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::domain;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return exit_code::budget;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << "\n";
    return exit_code::consistency;
  } catch (const json::exception& e) {
    err << "error: malformed document: " << e.what() << "\n";
    return exit_code::domain;
  }

  std::ostringstream text;
  if (format == "table")
    detail::render_table(result, "", text);
  else
    text << result.dump(2) << "\n";
  if (output.empty()) {
    out << text.str();
  } else {
    std::ofstream f(output);
    if (!f) {
      err << "error: cannot write " << output << "\n";
      return exit_code::domain;
    }
    f << text.str();
  }
  return status;
}

}  // namespace rankgeo::cli
