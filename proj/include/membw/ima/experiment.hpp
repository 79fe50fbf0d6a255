#pragma once

/// @file experiment.hpp
/// @brief Schedulability-ratio sweeps over generated partition sets.

#include "membw/ima/partitions.hpp"
#include "membw/ima/policies.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace membw::ima {

struct SweepPoint
{
    std::size_t cores = 4;
    double mir = 0.25;
    std::size_t sets = 10;
};

struct SweepConfig
{
    std::string preset = "custom";
    std::vector<SweepPoint> points;
    std::vector<double> utilizations;
    std::vector<Policy> policies{Policy::SE, Policy::SU, Policy::DY};
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    /// Common parameters; cores, mir and utilization are overwritten per point.
    ExperimentConfig base;
};

struct ExperimentRow
{
    Policy policy = Policy::SE;
    std::size_t cores = 0;
    double mir = 0.0;
    double utilization = 0.0;
    std::size_t schedulable = 0;
    std::size_t total = 0;
    std::uint64_t seed = 0;

    double ratio() const { return total == 0 ? 0.0 : static_cast<double>(schedulable) / static_cast<double>(total); }
};

/// U = lo, lo + step, ..., hi, computed on an integer grid of hundredths.
inline std::vector<double> utilization_grid(int lo_pct, int hi_pct, int step_pct)
{
    std::vector<double> out;
    for (int u = lo_pct; u <= hi_pct; u += step_pct)
        out.push_back(u / 100.0);
    return out;
}

/// Generator for set @p index of a sweep point; identical across policies so
/// every policy sees the same sets.
inline Rng set_rng(std::uint64_t seed, const SweepPoint& pt, double u, std::size_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(pt.cores),
                      static_cast<std::uint32_t>(std::llround(pt.mir * 10000)),
                      static_cast<std::uint32_t>(std::llround(u * 10000)), static_cast<std::uint32_t>(index)};
    return Rng(seq);
}

inline SweepConfig preset(const std::string& name, std::uint64_t seed)
{
    SweepConfig cfg;
    cfg.preset = name;
    cfg.seed = seed;
    if (name == "smoke") {
        cfg.points = {{4, 0.25, 10}};
        cfg.utilizations = {0.1, 0.5, 0.9};
    } else if (name == "vary-m") {
        cfg.points = {{4, 0.25, 1000}, {8, 0.25, 100}, {12, 0.25, 100}};
        cfg.utilizations = utilization_grid(10, 90, 1);
    } else if (name == "vary-mir") {
        for (int mir = 15; mir <= 50; mir += 5)
            cfg.points.push_back({8, mir / 100.0, 100});
        cfg.utilizations = utilization_grid(10, 90, 1);
    } else {
        throw std::invalid_argument("unknown preset '" + name + "' (expected smoke, vary-m or vary-mir)");
    }
    return cfg;
}

/// One row per (point, U, policy), in that nesting order. Deterministic for
/// a given seed regardless of the thread count.
inline std::vector<ExperimentRow> run_sweep(const SweepConfig& cfg)
{
    struct Task
    {
        std::size_t point;
        std::size_t u;
        std::size_t set;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < cfg.points.size(); ++p)
        for (std::size_t u = 0; u < cfg.utilizations.size(); ++u)
            for (std::size_t s = 0; s < cfg.points[p].sets; ++s)
                tasks.push_back({p, u, s});

    const std::size_t npol = cfg.policies.size();
    std::vector<unsigned char> verdicts(tasks.size() * npol, 0);
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        for (std::size_t t = cursor++; t < tasks.size(); t = cursor++) {
            const auto& task = tasks[t];
            const auto& pt = cfg.points[task.point];
            ExperimentConfig ec = cfg.base;
            ec.cores = pt.cores;
            ec.mir = pt.mir;
            ec.utilization = cfg.utilizations[task.u];
            auto rng = set_rng(cfg.seed, pt, ec.utilization, task.set);
            const auto set = generate_partition_set(ec, rng);
            for (std::size_t k = 0; k < npol; ++k)
                verdicts[t * npol + k] = evaluate_schedulability(set, cfg.policies[k], ec).schedulable ? 1 : 0;
        }
    };
    const std::size_t nthreads = std::max<std::size_t>(1, std::min(cfg.threads, tasks.size()));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nthreads; ++i)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }

    std::vector<ExperimentRow> rows;
    std::size_t t = 0;
    for (std::size_t p = 0; p < cfg.points.size(); ++p) {
        for (std::size_t u = 0; u < cfg.utilizations.size(); ++u) {
            std::vector<ExperimentRow> block;
            for (auto pol : cfg.policies)
                block.push_back({pol, cfg.points[p].cores, cfg.points[p].mir, cfg.utilizations[u], 0,
                                 cfg.points[p].sets, cfg.seed});
            for (std::size_t s = 0; s < cfg.points[p].sets; ++s, ++t)
                for (std::size_t k = 0; k < npol; ++k)
                    block[k].schedulable += verdicts[t * npol + k];
            rows.insert(rows.end(), block.begin(), block.end());
        }
    }
    return rows;
}

inline void write_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<ExperimentRow>& rows)
{
    os << "# preset=" << cfg.preset << " seed=" << cfg.seed << " rng=mt19937_64\n";
    os << "policy,m,MIr,U,schedulable,total,ratio,seed\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%.2f,%.2f,%zu,%zu,%.4f,%llu\n", std::string(to_string(r.policy)).c_str(),
                      r.cores, r.mir, r.utilization, r.schedulable, r.total, r.ratio(),
                      static_cast<unsigned long long>(r.seed));
        os << buf;
    }
}

/// gnuplot script plotting ratio against U, one curve per (policy, m, MIr).
inline void write_gnuplot(std::ostream& os, const SweepConfig& cfg, const std::string& csv_path)
{
    os << "set datafile separator ','\n"
          "set key outside right\n"
          "set xlabel 'U'\n"
          "set ylabel 'schedulability ratio'\n"
          "set yrange [0:1.05]\n"
          "set terminal pngcairo size 1200,700\n"
          "set output '"
       << csv_path << ".png'\n";
    os << "plot \\\n";
    bool first = true;
    for (const auto& pt : cfg.points) {
        for (auto pol : cfg.policies) {
            char sel[200];
            std::snprintf(sel, sizeof sel,
                          "'%s' using ((strcol(1) eq '%s' && $2 == %zu && abs($3 - %.2f) < 1e-6) ? $4 : NaN):7 "
                          "with linespoints title '%s m=%zu MIr=%.2f'",
                          csv_path.c_str(), std::string(to_string(pol)).c_str(), pt.cores, pt.mir,
                          std::string(to_string(pol)).c_str(), pt.cores, pt.mir);
            os << (first ? "  " : ", \\\n  ") << sel;
            first = false;
        }
    }
    os << "\n";
}

} // namespace membw::ima
