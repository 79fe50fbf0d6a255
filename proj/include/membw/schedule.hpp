#pragma once

/// @file schedule.hpp
/// @brief Regulation parameters, workloads and memory schedules.

#include "membw/errors.hpp"
#include "membw/stall_curve.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace membw {

/// Relative slack accepted when comparing times in seconds, so that e.g.
/// 128 * 1ms compares equal to 128ms despite binary rounding.
inline constexpr double time_tolerance = 1e-9;

/// Regulation period P, transaction latencies and the per-period
/// transaction capacity Q. min_latency and transaction_size are recorded
/// for completeness; the analysis always assumes max_latency.
struct RegulationConfig
{
    double period = 1e-3;
    double max_latency = 1e-3 / 16;
    double min_latency = 0.0;
    double transaction_size = 0.0;
    std::int64_t transactions = 16;

    /// Q = floor(P / L_max) unless @p explicit_q is given.
    static RegulationConfig from_latency(double period, double max_latency,
                                         std::optional<std::int64_t> explicit_q = std::nullopt)
    {
        detail::require(period > 0, "regulation period P must be > 0");
        detail::require(max_latency > 0, "L_max must be > 0");
        RegulationConfig cfg;
        cfg.period = period;
        cfg.max_latency = max_latency;
        if (explicit_q) {
            cfg.transactions = *explicit_q;
        } else {
            const double ratio = period / max_latency;
            cfg.transactions = static_cast<std::int64_t>(std::floor(ratio * (1 + time_tolerance)));
        }
        detail::require(cfg.transactions >= 1, "Q must be >= 1");
        return cfg;
    }

    /// Configuration where Q slots of L_max fill exactly one period.
    static RegulationConfig exact(double period, std::int64_t transactions)
    {
        return from_latency(period, period / static_cast<double>(transactions), transactions);
    }
};

/// Pure execution E (slots of L_max), memory transactions mu and relative
/// deadline D (seconds).
struct Workload
{
    std::int64_t exec = 1;
    std::int64_t mem = 0;
    double deadline = 1.0;

    std::int64_t beta() const { return exec + mem; }
};

inline void validate(const Workload& w)
{
    detail::require(w.exec > 0, "workload E must be > 0");
    detail::require(w.mem >= 0, "workload mu must be >= 0");
    detail::require(w.deadline > 0, "workload deadline D must be > 0");
}

/// Greatest W with W * Q * L_max <= D.
inline std::int64_t deadline_periods(const Workload& w, const RegulationConfig& cfg)
{
    detail::require(w.deadline > 0, "workload deadline D must be > 0");
    const double span_len = static_cast<double>(cfg.transactions) * cfg.max_latency;
    const double ratio = w.deadline / span_len;
    return static_cast<std::int64_t>(std::floor(ratio * (1 + time_tolerance)));
}

/// B^j = (Q^j, L^j); length is std::nullopt for an unbounded final interval.
struct BudgetInterval
{
    BudgetVector budgets;
    std::optional<std::int64_t> length;

    bool unbounded() const { return !length.has_value(); }
};

class MemorySchedule
{
public:
    MemorySchedule() = default;

    explicit MemorySchedule(std::vector<BudgetInterval> intervals) : intervals_(std::move(intervals))
    {
        detail::require(!intervals_.empty(), "memory schedule must have at least one interval");
        const auto& first = intervals_.front().budgets;
        for (std::size_t j = 0; j < intervals_.size(); ++j) {
            const auto& b = intervals_[j];
            const std::string tag = "interval " + std::to_string(j + 1);
            detail::require(b.budgets.cores() == first.cores(), tag + ": all intervals must share m");
            detail::require(b.budgets.total() == first.total(), tag + ": all intervals must share Q");
            if (b.unbounded())
                detail::require(j + 1 == intervals_.size(), tag + ": only the last interval may be unbounded");
            else
                detail::require(*b.length >= 1, tag + ": length must be >= 1");
        }
    }

    /// Static budget: one unbounded interval.
    static MemorySchedule constant(BudgetVector budgets)
    {
        return MemorySchedule({BudgetInterval{std::move(budgets), std::nullopt}});
    }

    std::span<const BudgetInterval> intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    const BudgetInterval& operator[](std::size_t j) const { return intervals_.at(j); }
    std::size_t cores() const { return intervals_.front().budgets.cores(); }
    std::int64_t total() const { return intervals_.front().budgets.total(); }

    /// Sum of lengths, or std::nullopt if the last interval is unbounded.
    std::optional<std::int64_t> total_length() const
    {
        std::int64_t sum = 0;
        for (const auto& b : intervals_) {
            if (b.unbounded())
                return std::nullopt;
            sum += *b.length;
        }
        return sum;
    }

    /// The schedule as seen by a workload released @p offset periods in.
    MemorySchedule suffix(std::int64_t offset) const
    {
        detail::require(offset >= 0, "schedule offset must be >= 0");
        std::vector<BudgetInterval> out;
        std::int64_t begin = 0;
        for (const auto& b : intervals_) {
            if (b.unbounded()) {
                out.push_back(b);
                break;
            }
            const std::int64_t end = begin + *b.length;
            if (end > offset)
                out.push_back({b.budgets, end - std::max(begin, offset)});
            begin = end;
        }
        if (out.empty())
            throw ScheduleExhausted(offset - begin + 1);
        return MemorySchedule(std::move(out));
    }

private:
    std::vector<BudgetInterval> intervals_;
};

/// W^j = max(0, min(L^j, W - sum_{k<j} L^k)).
inline std::vector<std::int64_t> split_span(const MemorySchedule& schedule, std::int64_t span)
{
    detail::require(span >= 0, "span must be >= 0");
    std::vector<std::int64_t> out;
    out.reserve(schedule.size());
    std::int64_t left = span;
    for (const auto& b : schedule.intervals()) {
        const std::int64_t take = b.unbounded() ? left : std::min(*b.length, left);
        out.push_back(take);
        left -= take;
    }
    if (left > 0)
        throw ScheduleExhausted(left);
    return out;
}

} // namespace membw
