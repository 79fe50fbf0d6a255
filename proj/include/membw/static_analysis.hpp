#pragma once

/// @file static_analysis.hpp
/// @brief Span of a workload under one static budget vector.
///
///     W_(0) = ceil(beta / Q)
///     W_(k) = ceil((beta + Ī(min(mu / W_(k-1), q)) * W_(k-1)) / Q)
///
/// iterated until W_(k) = W_(k-1) or W_(k) * Q * L_max > D.

#include "membw/analysis_result.hpp"
#include "membw/errors.hpp"
#include "membw/schedule.hpp"
#include "membw/stall_curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace membw {

/// Fixed-point iteration against a prebuilt curve; @p deadline is in
/// regulation periods.
inline AnalysisResult analyze_static(const Workload& w, const StallCurve& curve, std::int64_t total,
                                     std::int64_t deadline)
{
    validate(w);
    const std::int64_t beta = w.beta();
    const std::int64_t q = curve.budget();

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

    // W_(k) is non-decreasing and bounded by the deadline, so at most
    // deadline + 1 steps can occur before one of the exits fires.
    for (std::size_t k = 1;; ++k) {
        if (static_cast<std::int64_t>(k) > deadline + 1)
            throw std::logic_error("static iteration exceeded its termination bound");
        const std::int64_t mem = std::min(w.mem, span * q);
        Rational stall = curve.stall_over(mem, span);
        const std::int64_t next = ceil_int((stall + static_cast<long>(beta)) / static_cast<long>(total));
        res.trace.push_back({k, next, stall});
        if (next < span)
            throw std::logic_error("static iteration decreased");
        if (next > deadline)
            return finish(Status::DeadlineMiss, next);
        if (next == span) {
            if (!(w.mem < span * q))
                throw std::logic_error("fixed point with mu >= W * q");
            res.stall = stall;
            res.breakdown.push_back({1, span, mem, stall});
            return finish(Status::Converged, span);
        }
        span = next;
    }
}

inline AnalysisResult analyze_static(const Workload& w, const BudgetVector& budgets, Core core,
                                     const RegulationConfig& cfg)
{
    validate(w);
    detail::require(budgets.total() == cfg.transactions,
                    "budget vector must sum to Q (" + std::to_string(cfg.transactions) + ")");
    return analyze_static(w, make_stall_curve(budgets, core), budgets.total(), deadline_periods(w, cfg));
}

} // namespace membw
