#pragma once

/// @file dynamic_analysis.hpp
/// @brief Span of a workload across a memory schedule.
///
/// Each iteration splits the current span over the schedule intervals,
/// places the mu transactions where they cause the most stall, and
/// recomputes
///
///     W_(k) = ceil((beta + sum_j Ī^j(mu^j / W^j) * W^j) / Q).
///
/// The placement is a separable concave maximization over integers. Every
/// curve is piecewise linear with integer breakpoints, so repeatedly
/// filling the unsaturated interval whose current segment is steepest, up
/// to that segment's end, reaches the optimum.

#include "membw/analysis_result.hpp"
#include "membw/errors.hpp"
#include "membw/schedule.hpp"
#include "membw/stall_curve.hpp"

#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace membw {

struct MemoryAssignment
{
    std::vector<std::int64_t> mem;
    /// Every interval is full and some of mu could not be placed.
    bool saturated = false;

    std::int64_t total() const { return std::accumulate(mem.begin(), mem.end(), std::int64_t{0}); }
};

/// Greedy stall-maximizing distribution of @p mu transactions over intervals
/// with spans @p splits. Equal slopes go to the lowest interval index.
inline MemoryAssignment distribute_memory(std::span<const std::int64_t> splits, std::int64_t mu,
                                          std::span<const StallCurve> curves)
{
    detail::require(splits.size() == curves.size(), "one stall curve per interval is required");
    detail::require(mu >= 0, "mu must be >= 0");

    struct Candidate
    {
        std::int64_t rise;
        std::int64_t run;
        std::size_t interval;
    };
    // max-heap on slope, then on lower index
    auto lower = [](const Candidate& a, const Candidate& b) {
        const __int128 lhs = static_cast<__int128>(a.rise) * b.run;
        const __int128 rhs = static_cast<__int128>(b.rise) * a.run;
        if (lhs != rhs)
            return lhs < rhs;
        return a.interval > b.interval;
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(lower)> heap(lower);

    MemoryAssignment out;
    out.mem.assign(splits.size(), 0);
    auto push = [&](std::size_t j) {
        const auto& c = curves[j];
        if (out.mem[j] >= splits[j] * c.budget())
            return;
        const Segment& s = c.segments()[c.segment_index(out.mem[j], splits[j])];
        heap.push({s.rise, s.run, j});
    };
    for (std::size_t j = 0; j < splits.size(); ++j) {
        detail::require(splits[j] >= 0, "interval spans must be >= 0");
        push(j);
    }

    std::int64_t assigned = 0;
    while (assigned < mu && !heap.empty()) {
        const std::size_t p = heap.top().interval;
        heap.pop();
        const auto& c = curves[p];
        const auto segs = c.segments();
        const std::size_t idx = c.segment_index(out.mem[p], splits[p]);
        const std::int64_t next = idx + 1 < segs.size() ? segs[idx + 1].start : c.budget();
        const std::int64_t before = out.mem[p];
        out.mem[p] = std::min(mu - (assigned - before), next * splits[p]);
        assigned += out.mem[p] - before;
        push(p);
    }
    out.saturated = assigned < mu;
    return out;
}

/// S^j = Ī^j(mu^j / W^j) * W^j per interval.
inline std::vector<Rational> interval_stalls(std::span<const std::int64_t> splits,
                                             const MemoryAssignment& assignment,
                                             std::span<const StallCurve> curves)
{
    std::vector<Rational> out;
    out.reserve(splits.size());
    for (std::size_t j = 0; j < splits.size(); ++j)
        out.push_back(curves[j].stall_over(assignment.mem[j], splits[j]));
    return out;
}

/// Per-interval curves for @p core.
inline std::vector<StallCurve> schedule_curves(const MemorySchedule& schedule, Core core)
{
    std::vector<StallCurve> curves;
    curves.reserve(schedule.size());
    for (const auto& b : schedule.intervals())
        curves.push_back(make_stall_curve(b.budgets, core));
    return curves;
}

/// Fixed-point iteration with prebuilt per-interval curves; @p deadline is
/// in regulation periods.
inline AnalysisResult analyze_dynamic(const Workload& w, const MemorySchedule& schedule,
                                      std::span<const StallCurve> curves, std::int64_t deadline)
{
    validate(w);
    detail::require(curves.size() == schedule.size(), "one stall curve per interval is required");
    for (std::size_t j = 0; j < curves.size(); ++j)
        detail::require(curves[j].budget() == schedule[j].budgets[curves[j].core()],
                        "stall curve " + std::to_string(j + 1) + " does not match its interval");

    const std::int64_t total = schedule.total();
    const std::int64_t beta = w.beta();
    const auto length = schedule.total_length();

    AnalysisResult res;
    auto finish = [&](Status st, std::int64_t span) {
        res.status = st;
        res.span = span;
        res.length_slots = span * total;
        return res;
    };

    std::int64_t span = ceil_int(make_rational(beta, total));
    res.trace.push_back({0, span, Rational(0)});
    if (span > deadline)
        return finish(Status::DeadlineMiss, span);

    for (std::size_t k = 1;; ++k) {
        if (static_cast<std::int64_t>(k) > deadline + 1)
            throw std::logic_error("dynamic iteration exceeded its termination bound");
        if (length && span > *length) {
            res.shortfall = span - *length;
            return finish(Status::ScheduleExhausted, span);
        }
        const auto splits = split_span(schedule, span);
        const auto assignment = distribute_memory(splits, w.mem, curves);
        const auto stalls = interval_stalls(splits, assignment, curves);
        Rational stall(0);
        for (const auto& s : stalls)
            stall += s;
        const std::int64_t next = ceil_int((stall + static_cast<long>(beta)) / static_cast<long>(total));
        res.trace.push_back({k, next, stall});
        if (next < span)
            throw std::logic_error("dynamic iteration decreased");
        if (next > deadline)
            return finish(Status::DeadlineMiss, next);
        if (next == span) {
            if (assignment.saturated)
                throw std::logic_error("fixed point reached with unplaced memory transactions");
            res.stall = stall;
            for (std::size_t j = 0; j < splits.size(); ++j)
                res.breakdown.push_back({j + 1, splits[j], assignment.mem[j], stalls[j]});
            return finish(Status::Converged, span);
        }
        span = next;
    }
}

inline AnalysisResult analyze_dynamic(const Workload& w, const MemorySchedule& schedule, Core core,
                                      const RegulationConfig& cfg)
{
    validate(w);
    detail::require(schedule.total() == cfg.transactions,
                    "budget vectors must sum to Q (" + std::to_string(cfg.transactions) + ")");
    detail::require(core.index >= 1 && core.index <= schedule.cores(),
                    "core index " + std::to_string(core.index) + " outside [1, " +
                        std::to_string(schedule.cores()) + "]");
    const auto curves = schedule_curves(schedule, core);
    return analyze_dynamic(w, schedule, curves, deadline_periods(w, cfg));
}

} // namespace membw
