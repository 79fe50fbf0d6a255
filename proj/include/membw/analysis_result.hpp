#pragma once

#include "membw/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace membw {

enum class Status
{
    Converged,
    DeadlineMiss,
    ScheduleExhausted,
};

inline std::string_view to_string(Status s)
{
    switch (s) {
    case Status::Converged: return "Converged";
    case Status::DeadlineMiss: return "DeadlineMiss";
    case Status::ScheduleExhausted: return "ScheduleExhausted";
    }
    return "?";
}

/// W_(k) together with the stall term that produced it (zero for k = 0).
struct TraceStep
{
    std::size_t k = 0;
    std::int64_t span = 0;
    Rational stall;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// (W^j, mu^j, S^j) for one schedule interval at the fixed point.
struct IntervalBreakdown
{
    std::size_t interval = 0; // 1-based
    std::int64_t span = 0;
    std::int64_t mem = 0;
    Rational stall;
};

struct AnalysisResult
{
    Status status = Status::Converged;
    /// Converged span, or the first W_(k) that violated the deadline.
    std::int64_t span = 0;
    /// span * Q, in slots of L_max.
    std::int64_t length_slots = 0;
    /// Cumulative stall bound at the fixed point.
    Rational stall;
    std::vector<TraceStep> trace;
    std::vector<IntervalBreakdown> breakdown;
    /// Periods missing from a bounded schedule (ScheduleExhausted only).
    std::int64_t shortfall = 0;

    bool converged() const { return status == Status::Converged; }
};

} // namespace membw
