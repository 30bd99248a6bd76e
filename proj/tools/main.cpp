#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "synergy/assignment.hpp"
#include "synergy/compat.hpp"
#include "synergy/rules.hpp"
#include "synergy/scenario.hpp"

namespace {

using namespace synergy;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// --rules flag beats the SYNERGY_RULES env var beats the built-in file.
RuleSet resolve_rules(const std::string& rules_path) {
    if (!rules_path.empty()) return parse_rules(read_file(rules_path));
    if (const char* env = std::getenv("SYNERGY_RULES")) return parse_rules(read_file(env));
    return default_rules();
}

nlohmann::json witness_json(const Witness& witness) {
    nlohmann::json j;
    j["kind"] = witness.kind == WitnessKind::shared_instance ? "shared_instance"
                                                             : "divergent_inference";
    j["instance"] = canonical_key(witness.instance);
    auto keys = [](const InstanceSet& set) {
        std::vector<std::string> out;
        for (const Instance& i : set) out.push_back(canonical_key(i));
        return out;
    };
    j["s1"] = keys(witness.s1);
    j["s2"] = keys(witness.s2);
    if (witness.kind == WitnessKind::shared_instance) {
        j["task_a"] = witness.task_a;
        j["task_b"] = witness.task_b;
    }
    return j;
}

int cmd_rules_check(const std::string& path) {
    RuleSet rules = parse_rules(read_file(path));
    RuleSet saturated = saturate(rules);
    std::cout << path << ": " << rules.types.types().size() << " types, " << rules.rules.size()
              << " rules (" << saturated.rules.size() << " after saturation)\n";
    return 0;
}

int cmd_closure(const std::string& scenario_path, const std::string& rules_path,
                const std::string& task_id) {
    RuleSet rules = saturate(resolve_rules(rules_path));
    Scenario scenario = load_scenario_file(scenario_path);
    MtmrSetting setting = scenario_setting(scenario, rules);

    InstanceSet seed;
    if (task_id.empty()) {
        seed = setting.all_instances();
    } else {
        bool found = false;
        for (const ConstraintSet& task : setting.tasks) {
            if (task.task_id != task_id) continue;
            seed = task.instances();
            found = true;
        }
        if (!found) throw std::runtime_error("no task named " + task_id);
    }
    InstanceSet result = closure(seed, rules, setting.referent_universe);
    for (const Instance& instance : result) std::cout << canonical_key(instance) << '\n';
    std::cerr << result.size() << " instances in the closure of " << seed.size() << " seeds\n";
    return 0;
}

int cmd_compat_check(const std::string& scenario_path, const std::string& rules_path,
                     const std::string& oracle, const std::string& dot_path, bool as_json,
                     std::uint64_t seed) {
    RuleSet rules = saturate(resolve_rules(rules_path));
    Scenario scenario = load_scenario_file(scenario_path);
    MtmrSetting setting = scenario_setting(scenario, rules);

    CompatVerdict verdict = check_compat(setting, rules);

    std::optional<CompatVerdict> oracle_verdict;
    if (oracle == "theorem1") {
        oracle_verdict = oracle_theorem1(setting, rules);
    } else if (oracle == "numeric") {
        oracle_verdict = oracle_numeric(setting, rules, seed);
    } else if (oracle != "none") {
        throw std::runtime_error("unknown oracle: " + oracle);
    }

    if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out) throw std::runtime_error("cannot write " + dot_path);
        out << graph_to_dot(build_graph(setting, rules));
    }

    if (as_json) {
        nlohmann::json j;
        j["compatible"] = verdict.compatible;
        j["levels_built"] = verdict.levels_built;
        if (verdict.witness) j["witness"] = witness_json(*verdict.witness);
        if (oracle_verdict) {
            j["oracle"] = {{"name", oracle}, {"compatible", oracle_verdict->compatible}};
        }
        std::cout << j.dump(2) << '\n';
    } else {
        if (verdict.compatible) {
            std::cout << "compatible (" << verdict.levels_built << " levels)\n";
        } else {
            std::cout << "incompatible: " << to_string(*verdict.witness) << '\n';
        }
        if (oracle_verdict)
            std::cout << "oracle " << oracle << ": "
                      << (oracle_verdict->compatible ? "compatible" : "incompatible") << '\n';
    }
    if (oracle_verdict && oracle_verdict->compatible != verdict.compatible)
        std::cerr << "warning: oracle disagrees with the graph checker\n";
    return verdict.compatible ? 0 : 1;
}

int cmd_experiment_run(const std::string& mode, std::uint64_t seed, int iters,
                       const std::string& out_path, int jobs, const std::string& rules_path) {
    ExperimentConfig config;
    config.mode = experiment_mode_from_string(mode);
    config.seed = seed;
    config.iterations = iters;
    config.jobs = jobs;
    RuleSet rules = saturate(resolve_rules(rules_path));
    ExperimentReport report = run_experiment(config, rules);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    write_csv(out, report);

    Stats baseline = report.baseline_stats();
    Stats synergy = report.synergy_stats();
    std::cout << mode << ": " << report.rows.size() << " iterations\n"
              << "  baseline mean " << baseline.mean << " (stddev " << baseline.stddev << ")\n"
              << "  synergy  mean " << synergy.mean << " (stddev " << synergy.stddev << ")\n";
    if (baseline.mean > 0)
        std::cout << "  synergy/baseline ratio " << synergy.mean / baseline.mean << '\n';
    std::cout << "wrote " << out_path << '\n';
    return 0;
}

int cmd_experiment_summarize(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    ExperimentReport report;
    report.rows = read_csv_rows(in);
    if (report.rows.empty()) throw std::runtime_error("no rows in " + csv_path);

    Stats baseline = report.baseline_stats();
    Stats synergy = report.synergy_stats();
    int violations = 0;
    for (const ReportRow& row : report.rows)
        if (row.synergy_assigned < row.baseline_assigned) ++violations;

    std::cout << csv_path << ": " << report.rows.size() << " rows\n"
              << "  baseline mean " << baseline.mean << " stddev " << baseline.stddev
              << " (within-vehicle " << report.baseline_within_vehicle_stddev() << ")\n"
              << "  synergy  mean " << synergy.mean << " stddev " << synergy.stddev
              << " (within-vehicle " << report.synergy_within_vehicle_stddev() << ")\n";
    if (baseline.mean > 0)
        std::cout << "  synergy/baseline ratio " << synergy.mean / baseline.mean << '\n';
    std::cout << "  rows with synergy < baseline: " << violations << '\n';
    return 0;
}

int cmd_simulate(const std::string& scenario_path, int ticks, const std::string& out_path,
                 const std::string& rules_path) {
    RuleSet rules = saturate(resolve_rules(rules_path));
    Scenario scenario = load_scenario_file(scenario_path);
    if (ticks <= 0) ticks = scenario.default_ticks;
    ScenarioStepper stepper(std::move(scenario), rules);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    write_trajectory_header(out);
    double worst = 0.0;
    try {
        for (int tick = 0; tick < ticks; ++tick) {
            ScenarioState state = stepper.step(tick);
            write_trajectory_rows(out, state);
            worst = std::max(worst, state.max_residual);
        }
    } catch (const ScenarioError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 1;
    }
    std::cout << ticks << " ticks solved, max residual " << worst << ", wrote " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compatibility checking and synergy analysis for multi-robot task constraints"};
    app.require_subcommand(1);

    std::string rules_path;
    std::string scenario_path;
    std::string task_id;
    std::string oracle = "none";
    std::string dot_path;
    std::string out_path = "results.csv";
    std::string traj_path = "traj.csv";
    std::string csv_path;
    std::string mode;
    bool as_json = false;
    std::uint64_t seed = 1;
    int iters = 0;
    int jobs = 1;
    int ticks = 0;
    int exit_code = 0;

    CLI::App* rules_cmd = app.add_subcommand("rules", "rule file operations");
    rules_cmd->require_subcommand(1);
    CLI::App* rules_check = rules_cmd->add_subcommand("check", "parse and saturate a rule file");
    rules_check->add_option("file", scenario_path, "rule file")->required();
    rules_check->callback([&] { exit_code = cmd_rules_check(scenario_path); });

    CLI::App* closure_cmd = app.add_subcommand("closure", "print the inference closure of a scenario");
    closure_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    closure_cmd->add_option("--rules", rules_path, "rule file");
    closure_cmd->add_option("--task", task_id, "restrict to one task's constraints");
    closure_cmd->callback([&] { exit_code = cmd_closure(scenario_path, rules_path, task_id); });

    CLI::App* compat_cmd = app.add_subcommand("compat", "compatibility checking");
    compat_cmd->require_subcommand(1);
    CLI::App* compat_check = compat_cmd->add_subcommand("check", "check a scenario's constraint sets");
    compat_check->add_option("scenario", scenario_path, "scenario file")->required();
    compat_check->add_option("--rules", rules_path, "rule file");
    compat_check->add_option("--oracle", oracle, "cross-check: theorem1|numeric|none")
        ->check(CLI::IsMember({"theorem1", "numeric", "none"}));
    compat_check->add_option("--graph-dot", dot_path, "write the inference graph as DOT");
    compat_check->add_option("--seed", seed, "seed for the numeric oracle");
    compat_check->add_flag("--json", as_json, "machine-readable output");
    compat_check->callback([&] {
        exit_code = cmd_compat_check(scenario_path, rules_path, oracle, dot_path, as_json, seed);
    });

    CLI::App* experiment_cmd = app.add_subcommand("experiment", "assignment experiments");
    experiment_cmd->require_subcommand(1);
    CLI::App* experiment_run = experiment_cmd->add_subcommand("run", "run baseline vs synergy");
    experiment_run->add_option("--mode", mode, "fig3_low|fig3_monitor_heavy|fig3_saturated|fig4_accumulate|fig4_ratio")
        ->required();
    experiment_run->add_option("--seed", seed, "experiment seed");
    experiment_run->add_option("--iters", iters, "iteration count (0 = mode default)");
    experiment_run->add_option("--out", out_path, "output CSV path");
    experiment_run->add_option("--jobs", jobs, "worker threads");
    experiment_run->add_option("--rules", rules_path, "rule file");
    experiment_run->callback([&] {
        exit_code = cmd_experiment_run(mode, seed, iters, out_path, jobs, rules_path);
    });
    CLI::App* experiment_summarize = experiment_cmd->add_subcommand("summarize", "print CSV statistics");
    experiment_summarize->add_option("csv", csv_path, "results CSV")->required();
    experiment_summarize->callback([&] { exit_code = cmd_experiment_summarize(csv_path); });

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "step a scenario and write trajectories");
    simulate_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    simulate_cmd->add_option("--ticks", ticks, "tick count (0 = scenario default)");
    simulate_cmd->add_option("--out", traj_path, "trajectory CSV path");
    simulate_cmd->add_option("--rules", rules_path, "rule file");
    simulate_cmd->callback(
        [&] { exit_code = cmd_simulate(scenario_path, ticks, traj_path, rules_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "rule parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
