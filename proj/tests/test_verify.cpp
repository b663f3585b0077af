#include <gtest/gtest.h>

#include "rankgeo/verify.hpp"

using namespace rankgeo;

namespace {

verify::SuiteReport run(const std::string& name, verify::SuiteParams p) {
  const auto* spec = verify::find_suite(name);
  EXPECT_NE(spec, nullptr) << name;
  return verify::run_suite(*spec, p);
}

verify::SuiteReport run_defaults(const std::string& name) { return run(name, verify::find_suite(name)->defaults); }

}  // namespace

TEST(Verify, RegistryNames) {
  std::vector<std::string> names;
  for (const auto& s : verify::suites()) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"prop-2.9", "prop-2.10", "eq-2", "theorem-3.3", "cor-4.4", "cor-4.11",
                                             "theorem-4.10", "prop-5.3", "theorem-5.6", "def-6.1", "theorem-6.3",
                                             "theorem-6.6"}));
  EXPECT_EQ(verify::find_suite("nope"), nullptr);
}

// Each suite on its (small) default range: no failures and a complete run.
class SuiteDefaults : public testing::TestWithParam<std::string> {};

TEST_P(SuiteDefaults, PassesOnDefaultRange) {
  const auto rep = run_defaults(GetParam());
  EXPECT_TRUE(rep.complete) << rep.incomplete_reason;
  EXPECT_EQ(rep.failed, 0u) << rep.first_counterexample.dump();
  EXPECT_GT(rep.instances, 0u);
}

INSTANTIATE_TEST_SUITE_P(All, SuiteDefaults,
                         testing::Values("prop-2.9", "prop-2.10", "eq-2", "theorem-3.3", "cor-4.4", "cor-4.11",
                                         "theorem-4.10", "prop-5.3", "theorem-5.6", "def-6.1", "theorem-6.3",
                                         "theorem-6.6"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& c : s)
                             if (c == '-' || c == '.') c = '_';
                           return s;
                         });

TEST(Verify, MaximumScatteredSuitesHaveApplicableInstances) {
  EXPECT_GT(run_defaults("cor-4.11").passed, 0u);
  EXPECT_GT(run_defaults("theorem-4.10").passed, 0u);
  EXPECT_GT(run_defaults("theorem-6.6").passed, 0u);
}

TEST(Verify, BoundMutationIsCaught) {
  auto p = verify::find_suite("cor-4.4")->defaults;
  p.bound_adjust = 1;
  const auto rep = run("cor-4.4", p);
  EXPECT_GT(rep.failed, 0u);
  EXPECT_FALSE(rep.first_counterexample.is_null());
}

TEST(Verify, RandomInstancesAreSeeded) {
  auto p = verify::find_suite("prop-2.9")->defaults;
  p.random_instances = 10;
  p.seed = 4;
  const auto a = run("prop-2.9", p);
  const auto b = run("prop-2.9", p);
  EXPECT_EQ(a.instances, b.instances);
  EXPECT_EQ(verify::report_to_json(*verify::find_suite("prop-2.9"), a).dump(),
            verify::report_to_json(*verify::find_suite("prop-2.9"), b).dump());
}

TEST(Verify, OddCharacteristicRange) {
  auto p = verify::find_suite("theorem-3.3")->defaults;
  p.q = 3;
  p.m = 2;
  p.n_min = 3;
  p.n_max = 4;
  const auto rep = run("theorem-3.3", p);
  EXPECT_EQ(rep.failed, 0u) << rep.first_counterexample.dump();
  EXPECT_GT(rep.instances, 0u);
}

TEST(Verify, BudgetMarksRunIncomplete) {
  Budget tiny;
  tiny.max_subspaces = 5;
  const auto* spec = verify::find_suite("prop-2.9");
  const auto rep = verify::run_suite(*spec, spec->defaults, tiny);
  EXPECT_FALSE(rep.complete);
  EXPECT_FALSE(rep.incomplete_reason.empty());
}

TEST(Verify, InvalidRangeRejected) {
  auto p = verify::find_suite("prop-2.9")->defaults;
  p.n_min = 1;
  EXPECT_THROW(run("prop-2.9", p), DomainError);
}
