// membw: command-line front end for the bandwidth-regulated span analysis.
//
// Exit codes: 0 success, 1 internal error, 2 invalid or malformed input,
// 3 oracle instance too large, 64 bad command line.

#include "membw/membw.hpp"
#include "membw/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

namespace {

using namespace membw;

constexpr int exit_invalid = 2;
constexpr int exit_too_large = 3;
constexpr int exit_usage = 64;

struct MalformedJson : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open scenario file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw MalformedJson(e.what());
    }
    return parse_scenario(doc);
}

Core checked_core(const Scenario& sc, std::size_t core)
{
    detail::require(core >= 1 && core <= sc.schedule.cores(),
                    "core " + std::to_string(core) + " outside [1, " + std::to_string(sc.schedule.cores()) + "]");
    return Core{core};
}

std::vector<ScenarioWorkload> workloads_for(const Scenario& sc, Core core)
{
    auto ws = sc.on_core(core);
    detail::require(!ws.empty(), "no workload is assigned to core " + std::to_string(core.index));
    return ws;
}

json workload_json(const ScenarioWorkload& w)
{
    return {{"core", w.core.index}, {"E", w.workload.exec}, {"mu", w.workload.mem}, {"D", w.workload.deadline}};
}

void print_trace(const std::vector<AnalysisResult>& results)
{
    for (std::size_t n = 0; n < results.size(); ++n) {
        if (results.size() > 1)
            std::cout << "# workload " << n + 1 << "\n";
        std::cout << "k,W,S\n";
        for (const auto& t : results[n].trace)
            std::cout << t.k << ',' << t.span << ',' << to_string(t.stall) << '\n';
    }
}

void print_breakdown(const std::vector<AnalysisResult>& results)
{
    for (std::size_t n = 0; n < results.size(); ++n) {
        if (results.size() > 1)
            std::cout << "# workload " << n + 1 << "\n";
        std::cout << "interval,W,mu,S\n";
        for (const auto& b : results[n].breakdown)
            std::cout << b.interval << ',' << b.span << ',' << b.mem << ',' << to_string(b.stall) << '\n';
    }
}

void print_results(const std::vector<ScenarioWorkload>& ws, const std::vector<AnalysisResult>& results)
{
    json out = json::array();
    for (std::size_t n = 0; n < results.size(); ++n) {
        json r = to_json(results[n]);
        r["workload"] = workload_json(ws[n]);
        out.push_back(std::move(r));
    }
    std::cout << out.dump(2) << '\n';
}

std::size_t harness_threads()
{
    if (const char* env = std::getenv("MEMBW_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1)
            return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Worst-case span analysis under memory bandwidth regulation"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::size_t core = 1;
    bool trace = false;
    bool breakdown = false;

    auto* st = app.add_subcommand("analyze-static", "Span under the static budget of a single-interval schedule");
    st->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    st->add_option("--core", core, "Core under analysis (1-based)")->required();
    st->add_flag("--trace", trace, "Print the iteration trace as CSV (k,W,S)");

    auto* dy = app.add_subcommand("analyze-dynamic", "Span across the scenario's memory schedule");
    dy->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    dy->add_option("--core", core, "Core under analysis (1-based)")->required();
    dy->add_flag("--trace", trace, "Print the iteration trace as CSV (k,W,S)");
    dy->add_flag("--breakdown", breakdown, "Print the per-interval breakdown as CSV (interval,W,mu,S)");

    std::size_t interval = 1;
    std::vector<std::int64_t> budgets;
    auto* dc = app.add_subcommand("dump-curve", "Raw stall points and concave stall curve as JSON");
    auto* dc_scen = dc->add_option("--scenario", scenario_path, "Scenario JSON file");
    auto* dc_budgets = dc->add_option("--budgets", budgets, "Budget vector, e.g. 2,2,5,7")->delimiter(',');
    dc_scen->excludes(dc_budgets);
    dc->add_option("--core", core, "Core (1-based)")->required();
    dc->add_option("--interval", interval, "Schedule interval (1-based) when reading a scenario");

    std::size_t oracle_core = 0;
    auto* orc = app.add_subcommand("oracle", "Cross-check analysis bounds against brute-force oracles");
    orc->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    orc->add_option("--core", oracle_core, "Restrict to one core (1-based)");

    std::string preset_name;
    std::uint64_t seed = 1;
    std::string out_path;
    bool plot = false;
    std::size_t sets = 0;
    auto* ex = app.add_subcommand("experiment", "IMA schedulability-ratio sweep (CSV)");
    ex->add_option("--preset", preset_name, "vary-m, vary-mir or smoke")
        ->required()
        ->check(CLI::IsMember({"vary-m", "vary-mir", "smoke"}));
    ex->add_option("--seed", seed, "RNG seed");
    ex->add_option("--out", out_path, "Write CSV here instead of stdout");
    ex->add_flag("--plot", plot, "Also write a gnuplot script <out>.gp (requires --out)");
    ex->add_option("--sets", sets, "Override partition sets per point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*st) {
            const auto sc = load_scenario(scenario_path);
            detail::require(sc.schedule.size() == 1, "analyze-static needs a schedule with exactly one interval");
            const Core c = checked_core(sc, core);
            const auto ws = workloads_for(sc, c);
            std::vector<AnalysisResult> results;
            for (const auto& w : ws)
                results.push_back(analyze_static(w.workload, sc.schedule[0].budgets, c, sc.config));
            trace ? print_trace(results) : print_results(ws, results);
        } else if (*dy) {
            const auto sc = load_scenario(scenario_path);
            const Core c = checked_core(sc, core);
            const auto ws = workloads_for(sc, c);
            std::vector<AnalysisResult> results;
            for (const auto& w : ws)
                results.push_back(analyze_dynamic(w.workload, sc.schedule, c, sc.config));
            if (trace)
                print_trace(results);
            if (trace && breakdown)
                std::cout << '\n';
            if (breakdown)
                print_breakdown(results);
            if (!trace && !breakdown)
                print_results(ws, results);
        } else if (*dc) {
            BudgetVector bv;
            if (!budgets.empty()) {
                bv = BudgetVector(budgets);
            } else {
                detail::require(!scenario_path.empty(), "dump-curve needs --scenario or --budgets");
                const auto sc = load_scenario(scenario_path);
                detail::require(interval >= 1 && interval <= sc.schedule.size(), "interval outside schedule");
                bv = sc.schedule[interval - 1].budgets;
            }
            detail::require(core >= 1 && core <= bv.cores(), "core " + std::to_string(core) + " outside [1, m]");
            const auto raw = build_raw_points(bv, Core{core});
            json out = to_json(concave_envelope(raw), raw);
            out["budgets"] = std::vector<std::int64_t>(bv.values().begin(), bv.values().end());
            out["Q"] = bv.total();
            std::cout << out.dump(2) << '\n';
        } else if (*orc) {
            const auto sc = load_scenario(scenario_path);
            json out = json::array();
            for (const auto& w : sc.workloads) {
                if (oracle_core != 0 && w.core.index != oracle_core)
                    continue;
                const auto res = analyze_dynamic(w.workload, sc.schedule, w.core, sc.config);
                json row{{"workload", workload_json(w)}, {"analysis", to_json(res)}};
                row["worst_simulated_span"] = oracle::worst_span(w.workload, sc.schedule, w.core);
                if (res.converged()) {
                    row["sound"] = row["worst_simulated_span"].get<std::int64_t>() <= res.span;
                    if (sc.schedule.size() == 1) {
                        const auto raw = build_raw_points(sc.schedule[0].budgets, w.core);
                        row["max_stall_at_W"] = oracle::max_stall(w.workload.mem, res.span, raw);
                    }
                }
                out.push_back(std::move(row));
            }
            std::cout << out.dump(2) << '\n';
        } else if (*ex) {
            auto cfg = ima::preset(preset_name, seed);
            cfg.threads = harness_threads();
            if (sets > 0)
                for (auto& p : cfg.points)
                    p.sets = sets;
            detail::require(!plot || !out_path.empty(), "--plot requires --out");
            const auto rows = ima::run_sweep(cfg);
            if (out_path.empty()) {
                ima::write_csv(std::cout, cfg, rows);
            } else {
                std::ofstream f(out_path, std::ios::binary);
                ima::write_csv(f, cfg, rows);
                if (plot) {
                    std::ofstream gp(out_path + ".gp");
                    ima::write_gnuplot(gp, cfg, out_path);
                }
            }
        }
    } catch (const MalformedJson& e) {
        std::cerr << "error: malformed JSON: " << e.what() << '\n';
        return exit_invalid;
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid input: " << e.what() << '\n';
        return exit_invalid;
    } catch (const InstanceTooLarge& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_too_large;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
