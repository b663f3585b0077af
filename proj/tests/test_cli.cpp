#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using rankgeo::io::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rankgeo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rankgeo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(RANKGEO_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, Weights) {
  const auto r = cli({"weights", "--code", data("code_4_2_f8.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["d"], 2);
  EXPECT_EQ(r.doc()["profile"], json({2, 4}));
  const auto g = cli({"weights", "--code", data("code_5_2_f8.json"), "--algorithm", "galois"});
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(g.doc()["profile"], json({2, 5}));
}

TEST(Cli, Classify) {
  const auto r = cli({"classify", "--code", data("code_4_2_f8.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.doc();
  EXPECT_EQ(j["flags"]["is_near_mrd"], true);
  EXPECT_EQ(j["flags"]["is_mrd"], false);
  EXPECT_EQ(j["rank_defect"], 0);
  EXPECT_EQ(j["dual_profile"], json({2, 4}));
  EXPECT_EQ(j["is_s_mrd"]["2"], true);
}

TEST(Cli, EvasiveAndWitness) {
  const auto a = cli({"evasive", "--code", data("code_5_2_f8.json"), "--h", "1", "--r", "2"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.doc()["evasive"], false);
  EXPECT_EQ(a.doc()["witness"]["intersection_dim"], 3);
  const auto b = cli({"evasive", "--code", data("code_5_2_f8.json"), "--h", "1", "--r", "3", "--witness"});
  EXPECT_EQ(b.doc()["evasive"], true);
  EXPECT_EQ(b.doc()["max_intersection"], 3);
  const auto t = cli({"evasive", "--code", data("code_5_2_f8.json")});
  EXPECT_EQ(t.doc()["intersections"][1]["max_intersection"], 3);
  EXPECT_EQ(cli({"evasive", "--code", data("code_5_2_f8.json"), "--h", "1"}).code, 1);
  EXPECT_EQ(cli({"evasive", "--code", data("code_5_2_f8.json"), "--h", "2", "--r", "2"}).code, 1);
}

TEST(Cli, DualAndSpectrum) {
  const auto d = cli({"dual", "--code", data("code_4_2_f8.json")});
  ASSERT_EQ(d.code, 0);
  // rows (a,0,1,0) and (0,a^2,0,1), a = [0,1,0]
  EXPECT_EQ(d.doc()["generator"][0][0], json({0, 1, 0}));
  EXPECT_EQ(d.doc()["generator"][1][1], json({0, 0, 1}));
  const auto s = cli({"spectrum", "--code", data("code_4_2_f8.json")});
  EXPECT_EQ(s.doc()["max"], 2);
  EXPECT_EQ(s.doc()["d"], 2);
  // system round trip through a file
  const auto sys = cli({"construct", "pseudoregulus", "--q", "2", "--m", "3", "--k", "2"});
  ASSERT_EQ(sys.code, 0);
  const auto path = temp_file("pr.json", sys.out);
  const auto ev = cli({"evasive", "--system", path, "--h", "1", "--r", "1"});
  EXPECT_EQ(ev.doc()["evasive"], true);
  const auto full = cli({"construct", "gabidulin", "--q", "2", "--m", "3", "--n", "3", "--k", "3"});
  const auto zero = cli({"dual", "--code", temp_file("full.json", full.out)});
  EXPECT_EQ(zero.doc()["zero_code"]["n"], 3);
}

TEST(Cli, Construct) {
  const auto g = cli({"construct", "gabidulin", "--q", "2", "--m", "4", "--n", "4", "--k", "2"});
  ASSERT_EQ(g.code, 0) << g.err;
  const auto w = cli({"weights", "--code", temp_file("gab.json", g.out)});
  EXPECT_EQ(w.doc()["d"], 3);
  const auto nm = cli({"construct", "near-mrd", "--q", "2", "--m", "4", "--k", "3"});
  ASSERT_EQ(nm.code, 0);
  EXPECT_EQ(nm.doc()["basis"].size(), 5u);
  const auto ds = cli({"construct", "direct-sum", "--code", data("code_4_2_f8.json"), "--code", data("code_4_2_f8.json")});
  EXPECT_EQ(ds.doc()["generator"].size(), 4u);
  const auto found = cli({"construct", "search", "--q", "2", "--m", "4", "--k", "2", "--h", "1", "--n", "4"});
  EXPECT_EQ(found.code, 0);
  EXPECT_EQ(found.doc()["status"], "found");
  const auto pruned = cli({"construct", "search", "--q", "2", "--m", "3", "--k", "2", "--h", "1", "--n", "4"});
  EXPECT_EQ(pruned.code, 0);
  EXPECT_EQ(pruned.doc()["status"], "pruned");
  const auto limited = cli({"construct", "search", "--q", "2", "--m", "4", "--k", "2", "--h", "1", "--n", "4",
                            "--mode", "random", "--max-candidates", "1", "--seed", "3"});
  EXPECT_TRUE(limited.code == 2 || limited.doc()["status"] == "found");
}

TEST(Cli, Verify) {
  const auto list = cli({"verify", "--list"});
  ASSERT_EQ(list.code, 0);
  EXPECT_EQ(list.doc().size(), 12u);
  const auto ok = cli({"verify", "prop-2.9"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_GT(ok.doc()["passed"].get<int>(), 0);
  const auto mutated = cli({"verify", "cor-4.4", "--bound-adjust", "1"});
  EXPECT_EQ(mutated.code, 1);
  EXPECT_GT(mutated.doc()["failed"].get<int>(), 0);
  const auto incomplete = cli({"verify", "prop-2.9", "--budget", "3"});
  EXPECT_EQ(incomplete.code, 2);
  EXPECT_EQ(cli({"verify", "no-such-suite"}).code, 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"weights", "--code", "/nonexistent/file.json"}).code, 1);
  EXPECT_EQ(cli({"weights", "--code", temp_file("bad.json", "{not json")}).code, 1);
  EXPECT_EQ(cli({"weights", "--code", temp_file("shape.json", R"({"field": {"p": 2, "m": 3}})")}).code, 1);
  EXPECT_EQ(cli({"weights"}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"--budget", "2", "weights", "--code", data("code_5_2_f8.json")}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
  // rank-deficient generator
  const auto deficient = temp_file(
      "deficient.json", R"({"field": {"p": 2, "m": 3}, "generator": [[[1,0,0],[0,1,0]], [[1,0,0],[0,1,0]]]})");
  const auto r = cli({"weights", "--code", deficient});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("rank"), std::string::npos);
}

TEST(Cli, TableFormatAndOutputFile) {
  const auto t = cli({"--format", "table", "weights", "--code", data("code_4_2_f8.json")});
  ASSERT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("d: 2"), std::string::npos);
  EXPECT_NE(t.out.find("profile: [2,4]"), std::string::npos);
  const std::string path = testing::TempDir() + "out.json";
  const auto o = cli({"--output", path, "weights", "--code", data("code_4_2_f8.json")});
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  std::ifstream f(path);
  EXPECT_EQ(json::parse(f)["d"], 2);
}

TEST(Cli, OutputIsByteStable) {
  const auto a = cli({"classify", "--code", data("code_5_2_f8.json")});
  rankgeo::clear_profile_cache();
  const auto b = cli({"--workers", "2", "classify", "--code", data("code_5_2_f8.json")});
  EXPECT_EQ(a.out, b.out);
}
