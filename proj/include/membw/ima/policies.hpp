#pragma once

/// @file policies.hpp
/// @brief Budget assignment policies and per-set schedulability.
///
/// SE splits Q evenly. SU weighs each core by mu / (mu + E) of its
/// partitions once at t = 0. DY recomputes the same weights from the
/// partitions still to finish every time one completes, which yields a
/// memory schedule whose interval boundaries are completion instants.

#include "membw/dynamic_analysis.hpp"
#include "membw/ima/partitions.hpp"
#include "membw/rational.hpp"
#include "membw/static_analysis.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string_view>
#include <vector>

namespace membw::ima {

enum class Policy
{
    SE,
    SU,
    DY,
};

inline std::string_view to_string(Policy p)
{
    switch (p) {
    case Policy::SE: return "SE";
    case Policy::SU: return "SU";
    case Policy::DY: return "DY";
    }
    return "?";
}

inline BudgetVector policy_se(const ExperimentConfig& cfg)
{
    validate(cfg);
    const auto m = static_cast<std::int64_t>(cfg.cores);
    std::vector<std::int64_t> q(cfg.cores, cfg.transactions / m);
    for (std::int64_t k = 0; k < cfg.transactions % m; ++k)
        ++q[static_cast<std::size_t>(k)];
    return BudgetVector(std::move(q));
}

/// Split @p total among cores in proportion to @p weights: one transaction
/// per core first, the rest by largest remainder (ties to the lower index).
/// All-zero weights fall back to an even split.
inline BudgetVector apportion(const std::vector<Rational>& weights, std::int64_t total)
{
    const auto m = static_cast<std::int64_t>(weights.size());
    detail::require(m >= 1 && total >= m, "cannot give every core at least one transaction");
    Rational sum(0);
    for (const auto& w : weights) {
        detail::require(w >= 0, "weights must be non-negative");
        sum += w;
    }
    std::vector<Rational> share;
    share.reserve(weights.size());
    const std::int64_t rest = total - m;
    for (const auto& w : weights)
        share.push_back(sum == 0 ? make_rational(rest, m) : w * static_cast<long>(rest) / sum);

    std::vector<std::int64_t> q(weights.size());
    std::int64_t used = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = floor_int(share[i]);
        used += q[i];
    }
    std::vector<std::size_t> order(q.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return share[a] - q[a] > share[b] - q[b];
    });
    for (std::int64_t k = 0; k < rest - used; ++k)
        ++q[order[static_cast<std::size_t>(k)]];
    for (auto& x : q)
        ++x;
    return BudgetVector(std::move(q));
}

/// mu / (mu + E) over the partitions of each core listed in @p pending.
inline std::vector<Rational> core_weights(const PartitionSet& set,
                                          const std::vector<std::vector<std::size_t>>& pending)
{
    std::vector<Rational> w;
    w.reserve(set.cores);
    for (const auto& list : pending) {
        std::int64_t mem = 0;
        std::int64_t exec = 0;
        for (auto idx : list) {
            mem += set.partitions[idx].mem;
            exec += set.partitions[idx].exec;
        }
        w.push_back(mem + exec == 0 ? Rational(0) : make_rational(mem, mem + exec));
    }
    return w;
}

inline std::vector<std::vector<std::size_t>> execution_order(const PartitionSet& set)
{
    std::vector<std::vector<std::size_t>> order;
    for (std::size_t c = 1; c <= set.cores; ++c)
        order.push_back(set.on_core(Core{c}));
    return order;
}

inline BudgetVector policy_su(const PartitionSet& set, const ExperimentConfig& cfg)
{
    return apportion(core_weights(set, execution_order(set)), cfg.transactions);
}

/// Outcome of running one set under one policy.
struct SetVerdict
{
    bool schedulable = false;
    /// Completion period of each partition (indexed like PartitionSet::partitions);
    /// -1 for partitions that never completed within H.
    std::vector<std::int64_t> completion;
};

struct DynamicPlan
{
    SetVerdict verdict;
    /// Budget intervals up to the last completion (or the failure point).
    MemorySchedule schedule;
};

/// Static budgets: partitions on a core run back to back, each analyzed
/// from its predecessor's completion against the absolute deadline H.
inline SetVerdict evaluate_static(const PartitionSet& set, const BudgetVector& budgets,
                                  const ExperimentConfig& cfg)
{
    const std::int64_t horizon = cfg.hyperperiod_periods();
    SetVerdict v{true, std::vector<std::int64_t>(set.partitions.size(), -1)};
    for (std::size_t c = 1; c <= set.cores; ++c) {
        const auto curve = make_stall_curve(budgets, Core{c});
        std::int64_t now = 0;
        for (auto idx : set.on_core(Core{c})) {
            if (now >= horizon) {
                v.schedulable = false;
                break;
            }
            const auto& p = set.partitions[idx];
            const Workload w{p.exec, p.mem, static_cast<double>(horizon - now) * cfg.period};
            const auto res = analyze_static(w, curve, budgets.total(), horizon - now);
            if (!res.converged()) {
                v.schedulable = false;
                break;
            }
            now += res.span;
            v.completion[idx] = now;
        }
        if (!v.schedulable)
            break;
    }
    return v;
}

/// Co-analysis of all cores under recomputed budgets. Between completion
/// events the budgets are fixed; at each event (all completions in the same
/// period count as one) the weights are recomputed from the partitions not
/// yet finished, including the ones just started.
inline DynamicPlan policy_dy(const PartitionSet& set, const ExperimentConfig& cfg)
{
    validate(cfg);
    const std::int64_t horizon = cfg.hyperperiod_periods();
    const std::size_t m = set.cores;
    const auto order = execution_order(set);

    std::vector<std::size_t> next(m, 0);     // position in order[c] of the running partition
    std::vector<std::int64_t> start(m, 0);   // release period of the running partition
    std::vector<BudgetInterval> fixed;
    std::vector<std::int64_t> fixed_end;     // end period of each fixed interval
    std::vector<std::vector<StallCurve>> curves; // [interval][core offset]

    DynamicPlan plan{{true, std::vector<std::int64_t>(set.partitions.size(), -1)}, {}};

    auto pending = [&] {
        std::vector<std::vector<std::size_t>> p(m);
        for (std::size_t c = 0; c < m; ++c)
            p[c].assign(order[c].begin() + static_cast<std::ptrdiff_t>(next[c]), order[c].end());
        return p;
    };
    auto curves_for = [&](const BudgetVector& b) {
        std::vector<StallCurve> out;
        out.reserve(m);
        for (std::size_t c = 1; c <= m; ++c)
            out.push_back(make_stall_curve(b, Core{c}));
        return out;
    };

    std::int64_t now = 0;
    BudgetVector current = apportion(core_weights(set, pending()), cfg.transactions);
    std::vector<StallCurve> current_curves = curves_for(current);
    std::vector<std::int64_t> done(m, 0);

    auto active = [&](std::size_t c) { return next[c] < order[c].size(); };

    auto fail = [&] {
        plan.verdict.schedulable = false;
        plan.schedule = MemorySchedule(fixed.empty() ? std::vector<BudgetInterval>{{current, std::nullopt}} : fixed);
        return plan;
    };
    constexpr std::int64_t never = std::numeric_limits<std::int64_t>::max();

    while (true) {
        std::int64_t earliest = never;
        bool any = false;
        for (std::size_t c = 0; c < m; ++c) {
            if (!active(c))
                continue;
            any = true;
            if (start[c] >= horizon)
                return fail();
            // intervals seen by a workload released at start[c]
            std::size_t first = 0;
            while (first < fixed.size() && fixed_end[first] <= start[c])
                ++first;
            std::vector<BudgetInterval> iv;
            std::vector<StallCurve> cv;
            for (std::size_t j = first; j < fixed.size(); ++j) {
                const std::int64_t begin = j == 0 ? 0 : fixed_end[j - 1];
                iv.push_back({fixed[j].budgets, fixed_end[j] - std::max(begin, start[c])});
                cv.push_back(curves[j][c]);
            }
            iv.push_back({current, std::nullopt});
            cv.push_back(current_curves[c]);
            const MemorySchedule sched(std::move(iv));

            const auto& p = set.partitions[order[c][next[c]]];
            const std::int64_t deadline = horizon - start[c];
            const Workload w{p.exec, p.mem, static_cast<double>(deadline) * cfg.period};
            const auto res = analyze_dynamic(w, sched, cv, deadline);
            // a miss under the current budgets is final only if no other core
            // completes first and triggers a recomputation
            done[c] = res.converged() ? start[c] + res.span : never;
            earliest = std::min(earliest, done[c]);
        }
        if (!any)
            break;
        if (earliest == never)
            return fail();

        fixed.push_back({current, earliest - now});
        fixed_end.push_back(earliest);
        curves.push_back(std::move(current_curves));
        now = earliest;
        for (std::size_t c = 0; c < m; ++c) {
            if (active(c) && done[c] == earliest) {
                plan.verdict.completion[order[c][next[c]]] = earliest;
                ++next[c];
                start[c] = earliest;
            }
        }
        current = apportion(core_weights(set, pending()), cfg.transactions);
        current_curves = curves_for(current);
    }
    plan.schedule = MemorySchedule(std::move(fixed));
    return plan;
}

inline SetVerdict evaluate_schedulability(const PartitionSet& set, Policy policy, const ExperimentConfig& cfg)
{
    switch (policy) {
    case Policy::SE: return evaluate_static(set, policy_se(cfg), cfg);
    case Policy::SU: return evaluate_static(set, policy_su(set, cfg), cfg);
    case Policy::DY: return policy_dy(set, cfg).verdict;
    }
    return {};
}

} // namespace membw::ima
