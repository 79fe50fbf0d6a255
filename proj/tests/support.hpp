#pragma once

// Shared fixtures and random instance generators for the test suites.

#include "membw/schedule.hpp"
#include "membw/stall_curve.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace membw::testing {

using Gen = std::mt19937_64;

inline std::int64_t uniform(Gen& g, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
}

/// m budgets, each in [1, max_q].
inline BudgetVector random_budgets(Gen& g, std::size_t m, std::int64_t max_q)
{
    std::vector<std::int64_t> q(m);
    for (auto& x : q)
        x = uniform(g, 1, max_q);
    return BudgetVector(std::move(q));
}

/// Budgets with a fixed total, each in [1, max_q].
inline BudgetVector random_budgets_with_total(Gen& g, std::size_t m, std::int64_t total, std::int64_t max_q)
{
    while (true) {
        std::vector<std::int64_t> q(m, 1);
        std::int64_t left = total - static_cast<std::int64_t>(m);
        bool ok = true;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const std::int64_t hi = std::min(max_q - 1, left);
            q[i] += uniform(g, 0, std::max<std::int64_t>(0, hi));
            left -= q[i] - 1;
        }
        q[m - 1] += left;
        for (auto x : q)
            ok = ok && x >= 1 && x <= max_q;
        if (ok) {
            std::shuffle(q.begin(), q.end(), g);
            return BudgetVector(std::move(q));
        }
    }
}

/// Schedule of 1..max_n intervals sharing m and Q; the last is unbounded
/// when @p open_end is set.
inline MemorySchedule random_schedule(Gen& g, std::size_t m, std::int64_t max_q, std::size_t max_n,
                                      std::int64_t max_len, bool open_end)
{
    const auto first = random_budgets(g, m, max_q);
    const auto n = static_cast<std::size_t>(uniform(g, 1, static_cast<std::int64_t>(max_n)));
    std::vector<BudgetInterval> iv;
    for (std::size_t j = 0; j < n; ++j) {
        BudgetVector b = j == 0 ? first : random_budgets_with_total(g, m, first.total(), max_q);
        std::optional<std::int64_t> len = uniform(g, 1, max_len);
        if (open_end && j + 1 == n)
            len.reset();
        iv.push_back({std::move(b), len});
    }
    return MemorySchedule(std::move(iv));
}

/// 4-core {2, 2, 5, 7} budget used throughout the worked examples (Q = 16).
inline BudgetVector example_budgets() { return BudgetVector({2, 2, 5, 7}); }

/// Configuration with Q = 16 transactions filling a 1 ms period.
inline RegulationConfig example_config(std::int64_t q = 16) { return RegulationConfig::exact(1e-3, q); }

/// A deadline that never binds for the small instances used in tests.
inline constexpr double far_deadline = 1e3;

/// The three intervals of the dynamic worked example, lengths 5, 3, 7.
/// Budget vectors chosen so that core 3 has start points {0,2}, {0,2,3,4}
/// and {0} on the three intervals.
inline MemorySchedule example_dynamic_schedule()
{
    return MemorySchedule({{BudgetVector({2, 2, 5, 7}), 5},
                           {BudgetVector({2, 3, 7, 4}), 3},
                           {BudgetVector({4, 4, 4, 4}), 7}});
}

} // namespace membw::testing
