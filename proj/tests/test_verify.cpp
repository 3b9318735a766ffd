#include <gtest/gtest.h>

#include <set>

#include "weaktype/verify.hpp"

using namespace weaktype;

namespace {

const CheckReport& find(const std::vector<CheckReport>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return r;
    throw std::runtime_error("missing report " + name);
}

}  // namespace

TEST(Verify, EigenPasses) {
    const auto rs = run_suite({"eigen"}, 42);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].status, Status::Pass);
    EXPECT_LT(rs[0].worst_residual, 1e-10);
    EXPECT_EQ(rs[0].seed, 42u);
}

TEST(Verify, Table1Passes) {
    const auto rs = run_suite({"table1"}, 0);
    EXPECT_TRUE(all_pass(rs));
    EXPECT_LE(find(rs, "table1/value").worst_residual, 2e-3);
    EXPECT_LE(find(rs, "table1/argmax").worst_residual, 5e-2);
}

TEST(Verify, DualityPasses) {
    const auto rs = run_suite({"duality"}, 7);
    EXPECT_TRUE(all_pass(rs));
    EXPECT_LT(find(rs, "duality").worst_residual, 1e-8);
}

TEST(Verify, EverySuitePasses) {
    const auto rs = run_suite({}, 0);
    std::set<std::string> prefixes;
    for (const auto& r : rs) {
        EXPECT_EQ(r.status, Status::Pass) << r.name << " " << r.worst_residual;
        EXPECT_EQ(r.status == Status::Pass, r.worst_residual <= r.tolerance);
        prefixes.insert(r.name.substr(0, r.name.find('/')));
    }
    EXPECT_EQ(prefixes.size(), suite_names().size());
}

TEST(Verify, UnknownSuiteThrowsBeforeRunning) {
    EXPECT_THROW(run_suite({"eigen", "nope"}, 0), UnknownSuite);
}

TEST(Verify, ByteIdenticalReruns) {
    const auto a = to_json(run_suite({"oracle", "lemma23", "scaling"}, 5)).dump();
    const auto b = to_json(run_suite({"oracle", "lemma23", "scaling"}, 5)).dump();
    EXPECT_EQ(a, b);
}

TEST(Verify, SeedChangesRandomInputs) {
    const auto a = run_suite({"lemma33"}, 1), b = run_suite({"lemma33"}, 2);
    EXPECT_NE(a[0].details[0].input, b[0].details[0].input);
}

TEST(Verify, SuitesIndependent) {
    // a suite's reports do not depend on which other suites ran alongside it
    const auto alone = to_json(run_suite({"scaling"}, 3)).dump();
    const auto both = run_suite({"lemma23", "scaling"}, 3);
    EXPECT_EQ(to_json({both[1]}).dump(), alone);
}

TEST(Verify, FailingCheckReported) {
    detail::Check c("demo", 1e-3, 0, 2);
    c.add("x=1", 1e-4);
    c.add("x=2", 5e-3);
    c.add("x=3", 2e-4);
    const auto r = c.done();
    EXPECT_EQ(r.status, Status::Fail);
    EXPECT_DOUBLE_EQ(r.worst_residual, 5e-3);
    ASSERT_EQ(r.details.size(), 2u);
    EXPECT_EQ(r.details[0].input, "x=2");
    EXPECT_EQ(r.details[1].input, "x=3");
}

TEST(Verify, InequalityResidualConvention) {
    detail::Check c("ineq", 0.0, 0, 5);
    c.at_least("a", 1.5, 1.34);
    c.at_most("b", 1.0, 1.1);
    const auto r = c.done();
    EXPECT_EQ(r.status, Status::Pass);
    EXPECT_NEAR(r.worst_residual, -0.1, 1e-15);
}

TEST(Verify, NonFiniteResidualFails) {
    detail::Check c("nan", 1.0, 0, 5);
    c.add("x", std::nan(""));
    EXPECT_EQ(c.done().status, Status::Fail);
}

TEST(Verify, JsonSchemaAndPrecision) {
    const auto j = to_json(run_suite({"asymptotic"}, 9), 4);
    ASSERT_TRUE(j.is_array());
    for (const auto& r : j) {
        for (const char* k : {"name", "status", "worst_residual", "tolerance", "seed", "details"})
            EXPECT_TRUE(r.contains(k)) << k;
        EXPECT_EQ(r["seed"].get<std::uint64_t>(), 9u);
    }
    const double v = j[0]["worst_residual"].get<double>();
    EXPECT_EQ(v, round_sig(v, 4));
}

TEST(Verify, RoundSig) {
    EXPECT_EQ(round_sig(1.23456789, 3), 1.23);
    EXPECT_EQ(round_sig(-0.000123456, 4), -0.0001235);
    EXPECT_EQ(round_sig(0.0, 5), 0.0);
}

TEST(Verify, Bound134HonoursRange) {
    VerifyOptions o;
    o.m_lo = 5;
    o.m_hi = 30;
    const auto rs = run_suite({"bound134"}, 0, o);
    EXPECT_TRUE(all_pass(rs));
    EXPECT_NE(find(rs, "bound134/direct").details[0].input.find("m="), std::string::npos);
}
