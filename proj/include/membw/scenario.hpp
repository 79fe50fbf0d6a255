#pragma once

/// @file scenario.hpp
/// @brief JSON scenario files and JSON views of curves and results.
///
/// Scenario layout:
///
///     {
///       "config":    { "P": 0.001, "L_max": 6.25e-5, "Q": 16 },
///       "schedule":  [ { "budgets": [2, 2, 5, 7], "length": "unbounded" } ],
///       "workloads": [ { "core": 3, "E": 40, "mu": 35, "D": 1.0 } ]
///     }
///
/// "Q" is optional and defaults to floor(P / L_max); "L_min" and "L_size"
/// are accepted and carried along. "length" is a positive integer number of
/// regulation periods or the string "unbounded" (last interval only).

#include "membw/analysis_result.hpp"
#include "membw/errors.hpp"
#include "membw/schedule.hpp"
#include "membw/stall_curve.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace membw {

using json = nlohmann::json;

struct ScenarioWorkload
{
    Core core;
    Workload workload;
};

struct Scenario
{
    RegulationConfig config;
    MemorySchedule schedule;
    std::vector<ScenarioWorkload> workloads;

    std::vector<ScenarioWorkload> on_core(Core c) const
    {
        std::vector<ScenarioWorkload> out;
        for (const auto& w : workloads)
            if (w.core == c)
                out.push_back(w);
        return out;
    }
};

namespace detail {

inline const json& field(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw ValidationError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

inline double number(const json& v, const std::string& what)
{
    if (!v.is_number())
        throw ValidationError(what + " must be a number");
    return v.get<double>();
}

inline std::int64_t natural(const json& v, const std::string& what)
{
    if (!v.is_number_integer())
        throw ValidationError(what + " must be an integer");
    return v.get<std::int64_t>();
}

} // namespace detail

inline Scenario parse_scenario(const json& doc)
{
    using detail::field;
    using detail::natural;
    using detail::number;

    detail::require(doc.is_object(), "scenario must be a JSON object");
    const json& c = field(doc, "config", "scenario");
    std::optional<std::int64_t> q;
    if (c.contains("Q"))
        q = natural(c.at("Q"), "config.Q");
    Scenario sc;
    sc.config = RegulationConfig::from_latency(number(field(c, "P", "config"), "config.P"),
                                               number(field(c, "L_max", "config"), "config.L_max"), q);
    if (c.contains("L_min"))
        sc.config.min_latency = number(c.at("L_min"), "config.L_min");
    if (c.contains("L_size"))
        sc.config.transaction_size = number(c.at("L_size"), "config.L_size");

    const json& sched = field(doc, "schedule", "scenario");
    detail::require(sched.is_array() && !sched.empty(), "schedule must be a non-empty array");
    std::vector<BudgetInterval> intervals;
    for (std::size_t j = 0; j < sched.size(); ++j) {
        const std::string where = "schedule[" + std::to_string(j) + "]";
        const json& b = field(sched[j], "budgets", where);
        detail::require(b.is_array(), where + ".budgets must be an array");
        std::vector<std::int64_t> budgets;
        for (const auto& x : b)
            budgets.push_back(natural(x, where + ".budgets[]"));
        detail::require(budgets.size() >= 2, where + ": m >= 2 cores required");
        BudgetVector bv(std::move(budgets));
        detail::require(bv.total() == sc.config.transactions,
                        where + ": budgets must sum to Q = " + std::to_string(sc.config.transactions) +
                            " (got " + std::to_string(bv.total()) + ")");
        const json& len = field(sched[j], "length", where);
        std::optional<std::int64_t> length;
        if (len.is_string()) {
            detail::require(len.get<std::string>() == "unbounded", where + ".length must be an integer or \"unbounded\"");
        } else {
            length = natural(len, where + ".length");
        }
        intervals.push_back({std::move(bv), length});
    }
    sc.schedule = MemorySchedule(std::move(intervals));

    if (doc.contains("workloads")) {
        const json& ws = doc.at("workloads");
        detail::require(ws.is_array(), "workloads must be an array");
        for (std::size_t k = 0; k < ws.size(); ++k) {
            const std::string where = "workloads[" + std::to_string(k) + "]";
            const auto core = natural(field(ws[k], "core", where), where + ".core");
            detail::require(core >= 1 && static_cast<std::size_t>(core) <= sc.schedule.cores(),
                            where + ": core must lie in [1, m]");
            Workload w{natural(field(ws[k], "E", where), where + ".E"),
                       natural(field(ws[k], "mu", where), where + ".mu"),
                       number(field(ws[k], "D", where), where + ".D")};
            detail::require(w.exec > 0, where + ": E must be > 0");
            detail::require(w.mem >= 0, where + ": mu must be >= 0");
            detail::require(w.deadline > 0, where + ": D must be > 0");
            sc.workloads.push_back({Core{static_cast<std::size_t>(core)}, w});
        }
    }
    return sc;
}

inline json rational_json(const Rational& r) { return json{{"exact", to_string(r)}, {"value", to_double(r)}}; }

inline json to_json(const StallCurve& curve, const RawStallPoints& raw)
{
    json segs = json::array();
    for (const auto& s : curve.segments())
        segs.push_back({{"start", s.start},
                        {"value", s.value},
                        {"slope", to_string(s.slope())},
                        {"width", s.width()}});
    return {{"core", curve.core().index},
            {"q", curve.budget()},
            {"points", raw.stall},
            {"segments", segs},
            {"start_points", curve.start_points()}};
}

inline json to_json(const AnalysisResult& r)
{
    json trace = json::array();
    for (const auto& t : r.trace)
        trace.push_back({{"k", t.k}, {"W", t.span}, {"S", to_string(t.stall)}});
    json breakdown = json::array();
    for (const auto& b : r.breakdown)
        breakdown.push_back({{"interval", b.interval}, {"W", b.span}, {"mu", b.mem}, {"S", to_string(b.stall)}});
    json out{{"status", std::string(to_string(r.status))},
             {"W", r.span},
             {"length_slots", r.length_slots},
             {"iterations", r.trace.size()},
             {"trace", trace}};
    if (r.converged()) {
        out["stall"] = rational_json(r.stall);
        out["breakdown"] = breakdown;
    }
    if (r.status == Status::ScheduleExhausted)
        out["shortfall"] = r.shortfall;
    return out;
}

} // namespace membw
