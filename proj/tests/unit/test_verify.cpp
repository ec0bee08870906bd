#include <gtest/gtest.h>

#include <set>

#include "dsim/config.hpp"
#include "dsim/verify.hpp"

using namespace dsim;

class VerifySuite : public ::testing::TestWithParam<std::string> {};

TEST_P(VerifySuite, PassesWithFixedSeed) {
  const VerifyReport rep = run_suite(GetParam(), 7);
  ASSERT_FALSE(rep.properties.empty());
  for (const auto& p : rep.properties)
    EXPECT_TRUE(p.pass) << p.name << " residual " << p.max_residual << " tolerance " << p.tolerance << " "
                        << p.note;
  EXPECT_TRUE(rep.all_pass());
}

INSTANTIATE_TEST_SUITE_P(AllSuites, VerifySuite, ::testing::ValuesIn(suite_names()),
                         [](const auto& info) { return info.param; });

TEST(Verify, CatalogNamesAreUniqueAndCoverEverySuite) {
  std::set<std::string> names, suites;
  for (const auto& p : property_catalog()) {
    EXPECT_TRUE(names.insert(p.name).second) << "duplicate " << p.name;
    suites.insert(p.suite);
    EXPECT_GT(p.default_samples, 0u) << p.name;
    EXPECT_GT(p.tolerance, 0.0) << p.name;
    EXPECT_TRUE(p.comparison == "below" || p.comparison == "above") << p.name;
    EXPECT_FALSE(p.about.empty()) << p.name;
  }
  const std::vector<std::string> all = suite_names();
  EXPECT_EQ(suites, std::set<std::string>(all.begin(), all.end()));
}

TEST(Verify, CatalogContainsTheCheckedInvariants) {
  std::set<std::string> names;
  for (const auto& p : property_catalog()) names.insert(p.name);
  for (const char* required :
       {"iwasawa_roundtrip", "left_right_b_identity", "cartan_kernel", "antisymmetry", "cdybe",
        "coth_matches_torus_formula", "reduced_matches_unreduced", "model_map_is_poisson",
        "model_map_derivative_identities", "exact_flow_group_law", "projection_method", "spin_sutherland_identity",
        "quasi_jacobi_on_invariants", "quasi_jacobi_fails_generically", "quasi_casimir", "sl2z_relations",
        "sl2z_preserves_brackets", "dressing_derivative_equivariance", "transformed_initial_value",
        "haar_average_flow_constant"})
    EXPECT_TRUE(names.count(required)) << required;
}

TEST(Verify, SameSeedGivesByteIdenticalReports) {
  const std::string a = dump(to_json(run_suite("rmatrix", 11)));
  const std::string b = dump(to_json(run_suite("rmatrix", 11)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("time"), std::string::npos);
}

TEST(Verify, PropertyAloneMatchesPropertyInSuite) {
  const VerifyReport rep = run_suite("cxmat", 3);
  for (const auto& p : rep.properties) {
    const PropertyRecord alone = run_property(p.name, 3);
    EXPECT_EQ(alone.max_residual, p.max_residual) << p.name;
  }
}

TEST(Verify, DifferentSeedsDrawDifferentSamples) {
  EXPECT_NE(run_property("qr_roundtrip", 1).max_residual, run_property("qr_roundtrip", 2).max_residual);
}

TEST(Verify, SampleCountOverride) {
  const PropertyRecord r = run_property("iwasawa_roundtrip", 5, 9);
  EXPECT_EQ(r.samples, 9u);
  EXPECT_TRUE(r.pass);
}

TEST(Verify, UnknownNamesAreUsageErrors) {
  try {
    run_suite("nope", 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Usage);
  }
  EXPECT_THROW(run_property("nope", 1), Error);
}

TEST(Verify, ReportJsonShape) {
  const Json j = to_json(run_suite("lie", 7));
  EXPECT_EQ(j.at("suite"), "lie");
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("failed"), 0);
  for (const auto& p : j.at("properties")) {
    for (const char* k : {"name", "suite", "about", "samples", "max_residual", "tolerance", "comparison", "pass"})
      EXPECT_TRUE(p.contains(k)) << k;
  }
  EXPECT_EQ(j.at("environment").at("library"), "dsim");
}
