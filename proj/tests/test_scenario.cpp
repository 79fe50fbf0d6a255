#include "membw/dynamic_analysis.hpp"
#include "membw/scenario.hpp"
#include "membw/static_analysis.hpp"

#include <gtest/gtest.h>

using namespace membw;

namespace {

json base_doc()
{
    return json::parse(R"({
      "config": { "P": 0.001, "L_max": 6.25e-5, "Q": 16 },
      "schedule": [ { "budgets": [2, 2, 5, 7], "length": "unbounded" } ],
      "workloads": [ { "core": 3, "E": 40, "mu": 35, "D": 1.0 } ]
    })");
}

std::string error_of(const json& doc)
{
    try {
        parse_scenario(doc);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Scenario, ParsesWorkedExample)
{
    const auto sc = parse_scenario(base_doc());
    EXPECT_EQ(sc.config.transactions, 16);
    ASSERT_EQ(sc.schedule.size(), 1u);
    EXPECT_TRUE(sc.schedule[0].unbounded());
    ASSERT_EQ(sc.workloads.size(), 1u);
    EXPECT_EQ(sc.workloads[0].core, Core{3});
    const auto r = analyze_static(sc.workloads[0].workload, sc.schedule[0].budgets, Core{3}, sc.config);
    EXPECT_EQ(r.span, 10);
}

TEST(Scenario, DerivesQWhenAbsent)
{
    auto doc = base_doc();
    doc["config"].erase("Q");
    EXPECT_EQ(parse_scenario(doc).config.transactions, 16);
}

TEST(Scenario, MultiIntervalLengths)
{
    auto doc = base_doc();
    doc["schedule"] = json::parse(R"([{"budgets": [2, 2, 5, 7], "length": 5},
                                      {"budgets": [4, 4, 4, 4], "length": "unbounded"}])");
    const auto sc = parse_scenario(doc);
    ASSERT_EQ(sc.schedule.size(), 2u);
    EXPECT_EQ(*sc.schedule[0].length, 5);
}

TEST(Scenario, ErrorsNameTheViolatedInvariant)
{
    auto doc = base_doc();
    doc["schedule"][0]["budgets"] = {2, 2, 5, 6};
    EXPECT_NE(error_of(doc).find("sum to Q"), std::string::npos);

    doc = base_doc();
    doc["schedule"][0]["budgets"] = {2, 0, 7, 7};
    EXPECT_NE(error_of(doc).find(">= 1"), std::string::npos);

    doc = base_doc();
    doc["schedule"][0]["budgets"] = {16};
    EXPECT_NE(error_of(doc).find("m >= 2"), std::string::npos);

    doc = base_doc();
    doc["workloads"][0]["core"] = 5;
    EXPECT_NE(error_of(doc).find("core"), std::string::npos);

    doc = base_doc();
    doc["workloads"][0]["E"] = 0;
    EXPECT_NE(error_of(doc).find("E must be > 0"), std::string::npos);

    doc = base_doc();
    doc["workloads"][0]["mu"] = -1;
    EXPECT_NE(error_of(doc).find("mu must be >= 0"), std::string::npos);

    doc = base_doc();
    doc["schedule"][0]["length"] = "forever";
    EXPECT_NE(error_of(doc).find("unbounded"), std::string::npos);

    doc = base_doc();
    doc["schedule"] = json::parse(R"([{"budgets": [2, 2, 5, 7], "length": "unbounded"},
                                      {"budgets": [4, 4, 4, 4], "length": 3}])");
    EXPECT_FALSE(error_of(doc).empty());

    doc = base_doc();
    doc.erase("config");
    EXPECT_NE(error_of(doc).find("config"), std::string::npos);
}

TEST(Scenario, CurveJson)
{
    const BudgetVector b({2, 2, 5, 7});
    const auto raw = build_raw_points(b, Core{3});
    const auto j = to_json(concave_envelope(raw), raw);
    EXPECT_EQ(j["points"], json({0, 3, 6, 7, 8, 11}));
    EXPECT_EQ(j["start_points"], json({0, 2}));
    EXPECT_EQ(j["segments"][0]["slope"], "3");
    EXPECT_EQ(j["segments"][1]["slope"], "5/3");
}

TEST(Scenario, ResultJson)
{
    const auto sc = parse_scenario(base_doc());
    const auto r = analyze_dynamic(sc.workloads[0].workload, sc.schedule, Core{3}, sc.config);
    const auto j = to_json(r);
    EXPECT_EQ(j["status"], "Converged");
    EXPECT_EQ(j["W"], 10);
    EXPECT_EQ(j["length_slots"], 160);
    EXPECT_EQ(j["stall"]["exact"], "85");
    EXPECT_EQ(j["trace"].size(), 4u);
}
