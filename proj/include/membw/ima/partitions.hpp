#pragma once

/// @file partitions.hpp
/// @brief Random IMA partition sets.
///
/// Each of the m cores hosts a fixed number of partitions that run back to
/// back within one hyperperiod. A partition is either HIGH or LOW memory
/// intensity (MI = mu / (E + mu) in the contention-free case); per-core
/// utilizations are drawn with UUniFast.

#include "membw/errors.hpp"
#include "membw/schedule.hpp"
#include "membw/stall_curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace membw::ima {

/// All experiment randomness flows through this generator.
using Rng = std::mt19937_64;

struct MiRange
{
    double lo = 0.0;
    double hi = 1.0;
};

struct ExperimentConfig
{
    std::size_t cores = 4;
    std::size_t partitions_per_core = 4;
    double hyperperiod = 0.128; // seconds
    double period = 1e-3;       // regulation period P, seconds
    std::int64_t transactions = 41666;
    double mir = 0.25;
    MiRange high{0.5, 0.99};
    MiRange low{0.001, 0.1};
    double utilization = 0.5; // cumulative single-core utilization per core

    /// L_max is taken as P / Q so that Q transactions fill one period.
    RegulationConfig regulation() const { return RegulationConfig::exact(period, transactions); }

    std::int64_t hyperperiod_periods() const
    {
        return static_cast<std::int64_t>(std::llround(hyperperiod / period));
    }

    std::size_t partitions() const { return cores * partitions_per_core; }

    std::size_t high_count() const
    {
        const auto n = static_cast<double>(partitions());
        return static_cast<std::size_t>(std::clamp(std::llround(mir * n), 0LL, static_cast<long long>(partitions())));
    }
};

inline void validate(const ExperimentConfig& cfg)
{
    detail::require(cfg.cores >= 2, "experiment needs m >= 2");
    detail::require(cfg.partitions_per_core >= 1, "need at least one partition per core");
    detail::require(cfg.mir >= 0 && cfg.mir <= 1, "MIr must lie in [0, 1]");
    detail::require(cfg.utilization > 0, "U must be > 0");
    detail::require(cfg.hyperperiod > 0 && cfg.period > 0, "H and P must be > 0");
    detail::require(cfg.transactions >= static_cast<std::int64_t>(cfg.cores), "Q must be >= m");
}

struct Partition
{
    std::size_t id = 0;
    Core core;
    bool high = false;
    double mi = 0.0;
    double utilization = 0.0;
    std::int64_t exec = 1;
    std::int64_t mem = 0;
};

struct PartitionSet
{
    std::size_t cores = 0;
    std::vector<Partition> partitions;

    /// Indices into partitions for @p core, in execution (ascending id) order.
    std::vector<std::size_t> on_core(Core core) const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < partitions.size(); ++k)
            if (partitions[k].core == core)
                out.push_back(k);
        std::sort(out.begin(), out.end(),
                  [&](std::size_t a, std::size_t b) { return partitions[a].id < partitions[b].id; });
        return out;
    }
};

/// n utilizations uniformly distributed over the simplex summing to @p total.
inline std::vector<double> uunifast(std::size_t n, double total, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> out;
    out.reserve(n);
    double sum = total;
    for (std::size_t i = 1; i < n; ++i) {
        const double next = sum * std::pow(unit(rng), 1.0 / static_cast<double>(n - i));
        out.push_back(sum - next);
        sum = next;
    }
    out.push_back(sum);
    return out;
}

inline PartitionSet generate_partition_set(const ExperimentConfig& cfg, Rng& rng)
{
    validate(cfg);
    const std::size_t n = cfg.partitions();

    std::vector<bool> high(n, false);
    std::fill_n(high.begin(), cfg.high_count(), true);
    std::shuffle(high.begin(), high.end(), rng);

    std::vector<std::size_t> core_of;
    core_of.reserve(n);
    for (std::size_t c = 0; c < cfg.cores; ++c)
        core_of.insert(core_of.end(), cfg.partitions_per_core, c + 1);
    std::shuffle(core_of.begin(), core_of.end(), rng);

    PartitionSet set{cfg.cores, {}};
    set.partitions.reserve(n);
    for (std::size_t id = 0; id < n; ++id) {
        const MiRange r = high[id] ? cfg.high : cfg.low;
        std::uniform_real_distribution<double> mi(r.lo, r.hi);
        set.partitions.push_back({id, Core{core_of[id]}, high[id], mi(rng), 0.0, 1, 0});
    }

    // H / L_max slots per unit of utilization
    const double slots = cfg.hyperperiod / cfg.regulation().max_latency;
    for (std::size_t c = 1; c <= cfg.cores; ++c) {
        const auto members = set.on_core(Core{c});
        const auto utils = uunifast(members.size(), cfg.utilization, rng);
        for (std::size_t k = 0; k < members.size(); ++k) {
            auto& p = set.partitions[members[k]];
            p.utilization = utils[k];
            p.exec = std::max<std::int64_t>(1, std::llround(p.utilization * slots * (1.0 - p.mi)));
            p.mem = std::llround(p.utilization * slots * p.mi);
        }
    }
    return set;
}

} // namespace membw::ima
