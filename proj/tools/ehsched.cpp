#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ehsched/ehsched.hpp"

namespace fs = std::filesystem;
using namespace ehsched;

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out;
    double dt = 0.0;
    double deadline = 0.0;
    int discretize_epochs = 0;
};

std::string resolve_prefix(const std::string& out, const std::string& fallback) {
    std::string prefix = out.empty() ? fallback : out;
    if (const char* dir = std::getenv("EHSCHED_OUT_DIR"); dir && *dir) {
        if (!fs::path(prefix).is_absolute()) prefix = (fs::path(dir) / prefix).string();
    }
    return prefix;
}

std::ofstream open_out(const std::string& path) {
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

Scenario load_with_opts(const CommonOpts& opts, double horizon_override = 0.0) {
    const double horizon = std::max(opts.deadline, horizon_override);
    Scenario sc = load_scenario(opts.scenario_path, horizon);
    if (opts.deadline > 0.0) sc.deadline = opts.deadline;
    if (opts.dt > 0.0) {
        if (opts.dt > sc.deadline) throw ScenarioError("--dt must not exceed the deadline");
        sc.cells = static_cast<std::size_t>(std::max(2.0, std::round(sc.deadline / opts.dt)));
    }
    if (opts.discretize_epochs > 0) {
        for (auto& node : sc.nodes)
            node.harvest = discretize(node.harvest, opts.discretize_epochs);
        sc.arrival = discretize(sc.arrival, opts.discretize_epochs);
    }
    sc.validate();
    return sc;
}

void emit(const std::string& prefix, const Scenario& sc, const MultiHopSolution& sol,
          json summary) {
    auto csv = open_out(prefix + ".csv");
    write_timeseries(csv, sc, sol.schedules);
    auto sj = open_out(prefix + ".summary.json");
    sj << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
}

int cmd_builtin(const std::string& id, const std::string& out) {
    const Scenario sc = builtin_scenario(id);
    const std::string path = resolve_prefix(out, sc.name + ".scenario.json");
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    save_scenario(sc, path);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_solve_offline(const CommonOpts& opts, bool min_source_energy) {
    const Scenario sc = load_with_opts(opts);
    const auto sol = solve_throughput(sc, {.minimize_upstream_energy = min_source_energy});
    json summary = summary_json(sc, sol);
    summary["subcommand"] = "solve-offline";
    summary["min_source_energy"] = min_source_energy;
    emit(resolve_prefix(opts.out, sc.name + "-offline"), sc, sol, summary);
    return 0;
}

int cmd_solve_online(const CommonOpts& opts, const std::string& variant, double epsilon) {
    const Scenario sc = load_with_opts(opts);
    const OnlineVariant v =
        variant == "benchmark" ? OnlineVariant::benchmark : OnlineVariant::proposed;
    const double eps = epsilon > 0.0 ? epsilon : sc.effective_epsilon();
    const auto res = run_online(sc, eps, v);
    json summary = summary_json(sc, res, eps, variant);
    summary["subcommand"] = "solve-online";
    const std::string prefix = resolve_prefix(opts.out, sc.name + "-online-" + variant);
    auto csv = open_out(prefix + ".csv");
    write_timeseries(csv, sc, res.schedules);
    auto sj = open_out(prefix + ".summary.json");
    sj << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_min_time(const CommonOpts& opts, double target_bits, double t_max, double time_tol) {
    DeadlineQuery q;
    q.scenario = load_with_opts(opts, t_max);
    q.target_bits = target_bits;
    q.t_max = t_max;
    q.time_tolerance = time_tol;
    const auto res = min_completion_time(q);
    const Scenario at_toff = q.scenario.with_deadline(res.t_off);
    json summary = summary_json(at_toff, res.solution);
    summary["subcommand"] = "min-time";
    summary["target_bits"] = round12(target_bits);
    summary["t_off_s"] = round12(res.t_off);
    if (!res.warnings.empty()) summary["warnings"] = res.warnings;
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    emit(resolve_prefix(opts.out, q.scenario.name + "-min-time"), at_toff, res.solution,
         summary);
    return 0;
}

int cmd_compare(const CommonOpts& opts, double epsilon) {
    const Scenario sc = load_with_opts(opts);
    const double eps = epsilon > 0.0 ? epsilon : sc.effective_epsilon();
    const auto offline = solve_throughput(sc);
    const auto proposed = run_online(sc, eps, OnlineVariant::proposed);
    const auto benchmark = run_online(sc, eps, OnlineVariant::benchmark);

    json summary;
    summary["subcommand"] = "compare";
    summary["scenario"] = sc.name;
    summary["epsilon_s"] = round12(eps);
    summary["delivered_bits"] = {{"offline", round12(offline.delivered)},
                                 {"online_proposed", round12(proposed.delivered)},
                                 {"online_benchmark", round12(benchmark.delivered)}};
    summary["last_node_energy_J"] = {
        {"offline", round12(offline.schedules.back().energy_used())},
        {"online_proposed", round12(proposed.schedules.back().energy_used())},
        {"online_benchmark", round12(benchmark.schedules.back().energy_used())}};

    const std::string prefix = resolve_prefix(opts.out, sc.name + "-compare");
    auto csv = open_out(prefix + ".csv");
    write_compare(csv, offline, proposed, benchmark);
    auto sj = open_out(prefix + ".summary.json");
    sj << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_oracle_check(const CommonOpts& opts, int slots, int levels, double p_max) {
    const Scenario sc = load_with_opts(opts);
    if (sc.nodes.size() > 2)
        throw ScenarioError("oracle-check supports single- and two-hop scenarios only");

    if (p_max <= 0.0) {
        // All of a node's horizon energy spent within one slot is the most
        // power any sensible policy could want.
        for (const auto& node : sc.nodes)
            p_max = std::max(p_max, node.harvest.value(sc.deadline) * slots / sc.deadline);
    }
    std::vector<double> grid;
    for (int i = 0; i < levels; ++i) grid.push_back(p_max * i / (levels - 1));
    const auto inst = slot_from_scenario(sc, slots, grid);

    const auto sol = solve_throughput(sc);
    json summary;
    summary["subcommand"] = "oracle-check";
    summary["scenario"] = sc.name;
    summary["slots"] = slots;
    summary["power_levels"] = levels;
    summary["p_max_W"] = round12(p_max);
    summary["solver_delivered_bits"] = round12(sol.delivered);

    if (sc.nodes.size() == 2) {
        const auto oracle = brute_force_two_hop(inst, sc.rates[0], sc.rates[1]);
        summary["oracle_delivered_bits"] = round12(oracle.delivered);
        summary["oracle_min_source_energy_J"] = round12(oracle.min_source_energy);
        summary["solver_source_energy_J"] = round12(sol.schedules.front().energy_used());
        summary["pass"] = sol.delivered >= oracle.delivered - 1e-3 * std::max(1.0, oracle.delivered);
    } else {
        const auto oracle = brute_force_single_hop(inst, sc.rates[0]);
        summary["oracle_delivered_bits"] = round12(oracle.delivered);
        summary["pass"] = sol.delivered >= oracle.delivered - 1e-3 * std::max(1.0, oracle.delivered);
    }

    const std::string prefix = resolve_prefix(opts.out, sc.name + "-oracle-check");
    auto sj = open_out(prefix + ".summary.json");
    sj << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return summary["pass"].get<bool>() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal transmission scheduling for full-duplex multi-hop "
                 "energy-harvesting links"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string builtin_id, variant = "proposed";
    double epsilon = 0.0, target_bits = 0.0, t_max = 0.0, time_tol = 0.0, p_max = 0.0;
    bool min_source_energy = false;
    int slots = 4, levels = 9;

    auto add_common = [&](CLI::App* cmd, bool scenario_arg = true) {
        if (scenario_arg)
            cmd->add_option("scenario", opts.scenario_path, "scenario file (JSON)")
                ->required();
        cmd->add_option("--out", opts.out, "output path prefix");
        cmd->add_option("--dt", opts.dt, "grid step in seconds (default deadline/4000)");
        cmd->add_option("--deadline", opts.deadline, "override the scenario deadline");
        cmd->add_option("--discretize", opts.discretize_epochs,
                        "replace every input curve by an N-epoch staircase");
    };

    auto* builtin = app.add_subcommand("builtin", "write a built-in scenario file");
    builtin->add_option("id", builtin_id, "ex1|ex2|ex3")->required();
    builtin->add_option("--out", opts.out, "output path");

    auto* offline = app.add_subcommand("solve-offline", "offline optimal policy");
    add_common(offline);
    offline->add_flag("--min-source-energy", min_source_energy,
                      "run the tangent-line energy minimization pass");

    auto* online = app.add_subcommand("solve-online", "causal online policy");
    add_common(online);
    online->add_option("--variant", variant, "proposed|benchmark")
        ->check(CLI::IsMember({"proposed", "benchmark"}));
    online->add_option("--epsilon", epsilon, "online horizon slack in seconds");

    auto* mintime = app.add_subcommand("min-time", "completion-time minimization");
    add_common(mintime);
    mintime->add_option("--target-bits", target_bits, "data amount to deliver")->required();
    mintime->add_option("--t-max", t_max, "horizon cap in seconds")->required();
    mintime->add_option("--time-tol", time_tol, "bisection time tolerance");

    auto* compare = app.add_subcommand("compare", "offline vs both online variants");
    add_common(compare);
    compare->add_option("--epsilon", epsilon, "online horizon slack in seconds");

    auto* oracle = app.add_subcommand("oracle-check", "slotted brute-force certification");
    add_common(oracle);
    oracle->add_option("--slots", slots, "number of slots (<= 6)");
    oracle->add_option("--levels", levels, "power grid levels (<= 12)");
    oracle->add_option("--p-max", p_max, "top of the power grid in W");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (builtin->parsed()) return cmd_builtin(builtin_id, opts.out);
        if (offline->parsed()) return cmd_solve_offline(opts, min_source_energy);
        if (online->parsed()) return cmd_solve_online(opts, variant, epsilon);
        if (mintime->parsed()) return cmd_min_time(opts, target_bits, t_max, time_tol);
        if (compare->parsed()) return cmd_compare(opts, epsilon);
        if (oracle->parsed()) return cmd_oracle_check(opts, slots, levels, p_max);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
