#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rankgeo/io.hpp"
#include "samples.hpp"

using namespace rankgeo;
using io::json;

TEST(Io, ElementsAsCoordinateArrays) {
  auto T = samples::f8();
  EXPECT_EQ(io::elem_to_json(*T, 2), json({0, 1, 0}));
  EXPECT_EQ(io::elem_from_json(*T, json({1, 1, 0})), 3u);
  EXPECT_EQ(io::elem_from_json(*T, json(6)), 6u);
  EXPECT_THROW(io::elem_from_json(*T, json({2, 0, 0})), DomainError);
  EXPECT_THROW(io::elem_from_json(*T, json(8)), DomainError);
  EXPECT_THROW(io::elem_from_json(*T, json("x")), DomainError);
  EXPECT_THROW(io::elem_from_json(*T, json({0, 0, 0, 1})), DomainError);
}

TEST(Io, NonPrimeBaseFieldElements) {
  auto T = make_tower_q(4, 2);
  // an F_16 element is m = 2 F_4 coordinates, each e = 2 F_2 digits
  for (Elem x = 0; x < T->order(); ++x) ASSERT_EQ(io::elem_from_json(*T, io::elem_to_json(*T, x)), x);
  EXPECT_EQ(io::elem_to_json(*T, 7), json({json({1, 1}), json({1, 0})}));
}

TEST(Io, FieldRoundTrip) {
  for (auto T : {make_tower_q(2, 3), make_tower_q(3, 2), make_tower_q(4, 2), samples::f16()}) {
    const auto j = io::field_to_json(*T);
    EXPECT_TRUE(io::field_from_json(j)->same_as(*T));
  }
  const auto T = io::field_from_json(json::parse(R"({"p": 2, "m": 3, "gqm": [1, 0, 1, 1]})"));
  EXPECT_EQ(T->gqm(), (Poly{1, 0, 1, 1}));
  EXPECT_THROW(io::field_from_json(json::parse(R"({"p": 2, "m": 2, "gqm": [1, 0, 1]})")), DomainError);
  EXPECT_THROW(io::field_from_json(json::parse(R"({"m": 2})")), DomainError);
  EXPECT_THROW(io::field_from_json(json::parse(R"({"p": 2, "m": -1})")), DomainError);
  EXPECT_THROW(io::field_from_json(json::parse(R"([1])")), DomainError);
}

TEST(Io, CodeAndSystemRoundTrip) {
  oracle::Gen g(60);
  for (std::uint64_t q : {2u, 3u, 4u}) {
    auto T = make_tower_q(q, 2);
    const auto C = g.code(T, 3, 2);
    const auto D = io::code_from_json(json::parse(io::code_to_json(C).dump()));
    EXPECT_EQ(D.generator(), C.generator());
    EXPECT_TRUE(D.tower().same_as(C.tower()));
    const QSystem U = phi(C);
    const QSystem V = io::system_from_json(json::parse(io::system_to_json(U).dump()));
    EXPECT_TRUE(V.same_subspace(U));
  }
}

TEST(Io, SampleDocumentsMatchFixtures) {
  const auto a = io::code_from_json(io::load_json_file(std::string(RANKGEO_DATA_DIR) + "/code_4_2_f8.json"));
  EXPECT_EQ(a.generator(), samples::code_4_2().generator());
  const auto b = io::code_from_json(io::load_json_file(std::string(RANKGEO_DATA_DIR) + "/code_5_2_f8.json"));
  EXPECT_EQ(b.generator(), samples::code_5_2().generator());
}

TEST(Io, MalformedDocuments) {
  EXPECT_THROW(io::load_json_file("/nonexistent/x.json"), DomainError);
  EXPECT_THROW(io::parse_json("{", "test"), DomainError);
  EXPECT_THROW(io::code_from_json(json::parse(R"({"generator": []})")), DomainError);
  EXPECT_THROW(io::code_from_json(json::parse(R"({"field": {"p": 2, "m": 2}, "generator": []})")), DomainError);
  EXPECT_THROW(io::code_from_json(json::parse(R"({"field": {"p": 2, "m": 2}, "generator": [5]})")), DomainError);
  EXPECT_THROW(io::system_from_json(json::parse(R"({"field": {"p": 2, "m": 2}})")), DomainError);
}

TEST(Io, ReportSerialization) {
  const auto j = io::report_to_json(classify_report(samples::code_4_2()));
  EXPECT_EQ(j["d"], 2);
  EXPECT_EQ(j["profile"], json({2, 4}));
  EXPECT_EQ(j["is_s_mrd"]["1"], false);
  EXPECT_EQ(j["is_s_mrd"]["2"], true);
  EXPECT_EQ(j["bounds"]["near_mrd_length_bound"], 4);
  // sorted keys make the dump deterministic
  EXPECT_EQ(j.dump(), io::report_to_json(classify_report(samples::code_4_2())).dump());
}
