#pragma once

/// @file oracles.hpp
/// @brief Brute-force references for the stall and span analyses.
///
/// Nothing here uses StallCurve: the oracles work from raw per-period stall
/// points and recompute the concave envelope pointwise by exhaustive chord
/// search. They are exponential or pseudo-polynomial and only meant for
/// small instances.

#include "membw/errors.hpp"
#include "membw/rational.hpp"
#include "membw/schedule.hpp"
#include "membw/stall_curve.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <tuple>
#include <vector>

namespace membw::oracle {

inline constexpr std::int64_t max_enumeration = 10'000'000;

/// max sum_k I(k) * a_k over a_0..a_q with sum a_k = W and sum k * a_k = mu.
inline std::int64_t max_stall(std::int64_t mu, std::int64_t periods, const RawStallPoints& raw)
{
    const std::int64_t q = raw.budget();
    detail::require(periods >= 0 && mu >= 0, "mu and W must be >= 0");
    detail::require(mu <= periods * q, "infeasible: mu > W * q");
    if ((periods + 1) * (mu + 1) * (q + 1) > max_enumeration)
        throw InstanceTooLarge("max_stall: instance too large");

    constexpr std::int64_t none = std::numeric_limits<std::int64_t>::min();
    // best[u]: max stall using exactly u accesses over the periods so far
    std::vector<std::int64_t> best(static_cast<std::size_t>(mu) + 1, none);
    best[0] = 0;
    for (std::int64_t t = 0; t < periods; ++t) {
        std::vector<std::int64_t> next(best.size(), none);
        for (std::int64_t u = 0; u <= mu; ++u) {
            if (best[static_cast<std::size_t>(u)] == none)
                continue;
            for (std::int64_t k = 0; k <= q && u + k <= mu; ++k) {
                auto& slot = next[static_cast<std::size_t>(u + k)];
                slot = std::max(slot, best[static_cast<std::size_t>(u)] + raw.stall[static_cast<std::size_t>(k)]);
            }
        }
        best = std::move(next);
    }
    return best[static_cast<std::size_t>(mu)];
}

/// Upper concave envelope of the raw points at r, as the best chord between
/// two integer points bracketing r.
inline Rational envelope_at(const RawStallPoints& raw, const Rational& r)
{
    const std::int64_t q = raw.budget();
    detail::require(r >= 0 && r <= q, "rate outside [0, q]");
    Rational best(-1);
    for (std::int64_t a = 0; a <= q; ++a) {
        if (a > r)
            break;
        for (std::int64_t b = a; b <= q; ++b) {
            if (b < r)
                continue;
            const Rational ya(static_cast<long>(raw.stall[static_cast<std::size_t>(a)]));
            const Rational yb(static_cast<long>(raw.stall[static_cast<std::size_t>(b)]));
            const Rational v = (a == b) ? ya : ya + (yb - ya) * (r - a) / (b - a);
            if (v > best)
                best = v;
        }
    }
    return best;
}

struct Distribution
{
    Rational objective;
    std::vector<std::int64_t> mem;
};

/// Exact optimum of sum_j Ī^j(mu^j / W^j) * W^j over integer mu^j with
/// mu^j <= W^j * q^j and sum mu^j <= mu, by exhaustive enumeration.
inline Distribution distribute(std::span<const std::int64_t> splits, std::int64_t mu,
                               std::span<const RawStallPoints> raws)
{
    detail::require(splits.size() == raws.size(), "one raw curve per interval is required");
    std::int64_t product = 1;
    std::vector<std::vector<Rational>> table(splits.size());
    for (std::size_t j = 0; j < splits.size(); ++j) {
        const std::int64_t cap = std::min(mu, splits[j] * raws[j].budget());
        product *= cap + 1;
        if (product > max_enumeration)
            throw InstanceTooLarge("distribute: instance too large");
        for (std::int64_t x = 0; x <= cap; ++x)
            table[j].push_back(splits[j] == 0 ? Rational(0)
                                              : envelope_at(raws[j], make_rational(x, splits[j])) *
                                                    static_cast<long>(splits[j]));
    }

    Distribution best{Rational(-1), {}};
    std::vector<std::int64_t> cur(splits.size(), 0);
    auto rec = [&](auto&& self, std::size_t j, std::int64_t left, const Rational& acc) -> void {
        if (j == splits.size()) {
            if (acc > best.objective)
                best = {acc, cur};
            return;
        }
        const auto cap = static_cast<std::int64_t>(table[j].size()) - 1;
        for (std::int64_t x = 0; x <= std::min(cap, left); ++x) {
            cur[j] = x;
            self(self, j + 1, left - x, acc + table[j][static_cast<std::size_t>(x)]);
        }
        cur[j] = 0;
    };
    rec(rec, 0, mu, Rational(0));
    return best;
}

/// Worst simulated span of a workload on @p core over every per-period
/// access pattern. In each period the adversary picks the number k of
/// transactions issued (k <= q^j); the core then suffers the raw stall
/// I^j(k) and executes as much pure work as fits in the remaining slots.
/// A period may be left partly idle only when the workload completes.
inline std::int64_t worst_span(const Workload& w, const MemorySchedule& schedule, Core core)
{
    validate(w);
    const std::int64_t total = schedule.total();
    std::vector<RawStallPoints> raws;
    std::vector<std::int64_t> ends;
    std::int64_t acc = 0;
    for (const auto& b : schedule.intervals()) {
        raws.push_back(build_raw_points(b.budgets, core));
        acc = b.unbounded() ? std::numeric_limits<std::int64_t>::max() : acc + *b.length;
        ends.push_back(acc);
    }
    const std::int64_t last_start =
        schedule.size() == 1 ? 0 : ends[schedule.size() - 2];

    if ((w.exec + 1) * (w.mem + 1) * static_cast<std::int64_t>(schedule.size()) > max_enumeration)
        throw InstanceTooLarge("worst_span: instance too large");

    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::int64_t> memo;
    auto rec = [&](auto&& self, std::int64_t t, std::int64_t exec, std::int64_t mem) -> std::int64_t {
        // once in the last interval, the period index no longer matters
        const std::int64_t key_t = schedule[schedule.size() - 1].unbounded() ? std::min(t, last_start) : t;
        const auto key = std::make_tuple(key_t, exec, mem);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        const auto j = static_cast<std::size_t>(
            std::distance(ends.begin(), std::upper_bound(ends.begin(), ends.end(), t)));
        if (j >= ends.size())
            throw ScheduleExhausted(1);
        const auto& raw = raws[j];
        std::int64_t worst = 0;
        for (std::int64_t k = 0; k <= std::min(raw.budget(), mem); ++k) {
            const std::int64_t stall = raw.stall[static_cast<std::size_t>(k)];
            const std::int64_t room = total - k - stall;
            const std::int64_t e = std::min(exec, room);
            const bool done = (k == mem && e == exec);
            if (!done && k + stall + e != total)
                continue;
            const std::int64_t span = done ? 1 : 1 + self(self, t + 1, exec - e, mem - k);
            worst = std::max(worst, span);
        }
        memo.emplace(key, worst);
        return worst;
    };
    return rec(rec, 0, w.exec, w.mem);
}

} // namespace membw::oracle
