#include "synergy/assignment.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "synergy/detail/rng.hpp"

namespace synergy {

namespace {

// k-combinations of 0..n-1 in lexicographic order
template <class F>
void each_combination(int n, int k, F f) {
    if (k > n) return;
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[std::size_t(i)] = i;
    while (true) {
        f(pick);
        int i = k - 1;
        while (i >= 0 && pick[std::size_t(i)] == n - k + i) --i;
        if (i < 0) return;
        ++pick[std::size_t(i)];
        for (int j = i + 1; j < k; ++j) pick[std::size_t(j)] = pick[std::size_t(j - 1)] + 1;
    }
}

const Referent& target_of(const OfferedTask& task, const std::vector<Referent>& targets) {
    for (const Referent& t : targets)
        if (t.id == task.target_id) return t;
    throw std::invalid_argument("unknown target " + task.target_id);
}

TaskSpec bind_task(const OfferedTask& task, int index, const std::vector<Referent>& vehicles,
                   const std::vector<int>& coalition) {
    TaskSpec spec;
    spec.task_id = "task" + std::to_string(index + 1);
    spec.kind = task.kind;
    for (int v : coalition) spec.participants.push_back(vehicles[std::size_t(v)].id);
    if (task.kind == TaskKind::monitoring) spec.participants.push_back(task.target_id);
    return spec;
}

ConstraintSet constraints_of(const OfferedTask& task, const TaskSpec& spec,
                             const std::vector<Referent>& vehicles,
                             const std::vector<Referent>& targets,
                             const std::vector<int>& coalition) {
    switch (task.kind) {
        case TaskKind::monitoring:
            return make_monitoring(vehicles[std::size_t(coalition[0])], target_of(task, targets),
                                   spec.task_id);
        case TaskKind::centroid2:
        case TaskKind::centroid3: {
            std::vector<Referent> members;
            for (int v : coalition) members.push_back(vehicles[std::size_t(v)]);
            return make_centroid(members, spec.task_id);
        }
        case TaskKind::comm_maintenance:
            return make_comm(vehicles[std::size_t(coalition[0])], vehicles[std::size_t(coalition[1])],
                             vehicles[std::size_t(coalition[2])], spec.task_id);
    }
    throw std::invalid_argument("bad task kind");
}

}  // namespace

AssignmentState assign_baseline(const std::vector<OfferedTask>& tasks,
                                const std::vector<Referent>& vehicles,
                                const std::vector<Referent>& targets) {
    AssignmentState state;
    state.setting.referent_universe = vehicles;
    state.setting.referent_universe.insert(state.setting.referent_universe.end(), targets.begin(),
                                           targets.end());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        int want = coalition_size(tasks[i].kind);
        std::vector<int> coalition;
        for (std::size_t v = 0; v < vehicles.size() && int(coalition.size()) < want; ++v)
            if (!state.busy.count(vehicles[v].id)) coalition.push_back(int(v));
        if (int(coalition.size()) < want) continue;
        TaskSpec spec = bind_task(tasks[i], int(i), vehicles, coalition);
        ConstraintSet constraints = constraints_of(tasks[i], spec, vehicles, targets, coalition);
        std::vector<std::string> ids;
        for (int v : coalition) {
            ids.push_back(vehicles[std::size_t(v)].id);
            state.busy.insert(vehicles[std::size_t(v)].id);
        }
        state.setting.tasks.push_back(constraints);
        state.accepted.push_back(AcceptedTask{std::move(spec), std::move(constraints), std::move(ids)});
    }
    return state;
}

AssignmentState assign_synergy(const std::vector<OfferedTask>& tasks,
                               const std::vector<Referent>& vehicles,
                               const std::vector<Referent>& targets,
                               const RuleSet& saturated_rules) {
    std::vector<Referent> universe = vehicles;
    universe.insert(universe.end(), targets.begin(), targets.end());
    CompatContext context(saturated_rules, universe);
    return assign_synergy(tasks, vehicles, targets, context);
}

AssignmentState assign_synergy(const std::vector<OfferedTask>& tasks,
                               const std::vector<Referent>& vehicles,
                               const std::vector<Referent>& targets,
                               const CompatContext& context) {
    AssignmentState state;
    state.setting.referent_universe = vehicles;
    state.setting.referent_universe.insert(state.setting.referent_universe.end(), targets.begin(),
                                           targets.end());
    CheckWorkspace workspace;

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        int want = coalition_size(tasks[i].kind);
        bool accepted = false;
        each_combination(int(vehicles.size()), want, [&](const std::vector<int>& coalition) {
            if (accepted) return;
            TaskSpec spec = bind_task(tasks[i], int(i), vehicles, coalition);
            ConstraintSet constraints = constraints_of(tasks[i], spec, vehicles, targets, coalition);
            MtmrSetting trial = state.setting;
            trial.tasks.push_back(constraints);
            if (!context.check(trial, workspace).compatible) return;
            state.setting.tasks.push_back(constraints);
            std::vector<std::string> ids;
            for (int v : coalition) ids.push_back(vehicles[std::size_t(v)].id);
            state.accepted.push_back(
                AcceptedTask{std::move(spec), std::move(constraints), std::move(ids)});
            accepted = true;
        });
        assert(!accepted || context.check(state.setting).compatible);
    }
    return state;
}

std::string_view to_string(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::fig3_low: return "fig3_low";
        case ExperimentMode::fig3_monitor_heavy: return "fig3_monitor_heavy";
        case ExperimentMode::fig3_saturated: return "fig3_saturated";
        case ExperimentMode::fig4_accumulate: return "fig4_accumulate";
        case ExperimentMode::fig4_ratio: return "fig4_ratio";
    }
    return "?";
}

ExperimentMode experiment_mode_from_string(std::string_view text) {
    if (text == "fig3_low") return ExperimentMode::fig3_low;
    if (text == "fig3_monitor_heavy") return ExperimentMode::fig3_monitor_heavy;
    if (text == "fig3_saturated") return ExperimentMode::fig3_saturated;
    if (text == "fig4_accumulate") return ExperimentMode::fig4_accumulate;
    if (text == "fig4_ratio") return ExperimentMode::fig4_ratio;
    throw std::invalid_argument("unknown experiment mode: " + std::string(text));
}

namespace {

int default_iterations(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::fig4_accumulate: return 25;
        case ExperimentMode::fig4_ratio: return 26;
        default: return 100;
    }
}

// Alternating centroid/monitoring stream; when one side runs out the
// other continues. Centroid tasks pick size 2 or 3 at random.
std::vector<OfferedTask> alternating_stream(detail::Rng& rng, int n_centroid, int n_monitor,
                                            int* next_target) {
    std::vector<OfferedTask> tasks;
    bool centroid_turn = true;
    while (n_centroid > 0 || n_monitor > 0) {
        bool emit_centroid = centroid_turn ? n_centroid > 0 : n_monitor == 0;
        if (emit_centroid) {
            OfferedTask task;
            task.kind = rng.chance(0.5) ? TaskKind::centroid2 : TaskKind::centroid3;
            tasks.push_back(task);
            --n_centroid;
        } else {
            OfferedTask task;
            task.kind = TaskKind::monitoring;
            task.target_id = "tgt" + std::to_string(++*next_target);
            tasks.push_back(task);
            --n_monitor;
        }
        centroid_turn = !centroid_turn;
    }
    return tasks;
}

}  // namespace

IterationPlan plan_iteration(const ExperimentConfig& config, int iter) {
    IterationPlan plan;
    detail::Rng rng(detail::derive_seed(config.seed, std::uint64_t(iter)));
    int next_target = 0;
    switch (config.mode) {
        case ExperimentMode::fig3_low:
        case ExperimentMode::fig3_monitor_heavy:
        case ExperimentMode::fig3_saturated: {
            plan.vehicles = rng.int_in(config.vehicles_min, config.vehicles_max);
            int v = plan.vehicles;
            if (config.mode == ExperimentMode::fig3_low) {
                plan.n_centroid = v / 2;
                plan.n_monitor = v / 2;
            } else if (config.mode == ExperimentMode::fig3_monitor_heavy) {
                plan.n_centroid = v / 2;
                plan.n_monitor = 2 * v;
            } else {
                plan.n_centroid = v;
                plan.n_monitor = 2 * v;
            }
            plan.tasks = alternating_stream(rng, plan.n_centroid, plan.n_monitor, &next_target);
            break;
        }
        case ExperimentMode::fig4_accumulate: {
            plan.vehicles = config.vehicles_fixed;
            // One extra task per iteration; the prefix is shared across
            // iterations via the per-run stream seed.
            detail::Rng stream(detail::derive_seed(config.seed, 0x5eedULL));
            for (int i = 0; i < iter; ++i) {
                OfferedTask task;
                if (stream.chance(0.5)) {
                    task.kind = TaskKind::monitoring;
                    task.target_id = "tgt" + std::to_string(++next_target);
                } else {
                    task.kind = stream.chance(0.5) ? TaskKind::centroid2 : TaskKind::centroid3;
                }
                plan.tasks.push_back(task);
            }
            for (const OfferedTask& task : plan.tasks)
                ++(task.kind == TaskKind::monitoring ? plan.n_monitor : plan.n_centroid);
            break;
        }
        case ExperimentMode::fig4_ratio: {
            plan.vehicles = config.vehicles_fixed;
            // iter = k in 0..25: (25-k) monitoring + k centroid tasks
            plan.n_monitor = 25 - iter;
            plan.n_centroid = iter;
            for (int i = 0; i < plan.n_monitor; ++i) {
                OfferedTask task;
                task.kind = TaskKind::monitoring;
                task.target_id = "tgt" + std::to_string(++next_target);
                plan.tasks.push_back(task);
            }
            for (int i = 0; i < plan.n_centroid; ++i) {
                OfferedTask task;
                task.kind = rng.chance(0.5) ? TaskKind::centroid2 : TaskKind::centroid3;
                plan.tasks.push_back(task);
            }
            rng.shuffle(plan.tasks);
            break;
        }
    }
    return plan;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RuleSet& saturated_rules) {
    require_saturated(saturated_rules);
    ExperimentReport report;
    report.config = config;
    int iterations = config.iterations > 0 ? config.iterations : default_iterations(config.mode);
    bool ratio_mode = config.mode == ExperimentMode::fig4_ratio;
    int first_iter = config.mode == ExperimentMode::fig4_accumulate ? 1 : ratio_mode ? 0 : 1;
    report.rows.resize(std::size_t(iterations));

    // Checker contexts are shared per vehicle count; the universe covers
    // the largest target set any iteration can offer (extra referents
    // never change a verdict).
    std::map<int, std::unique_ptr<CompatContext>> contexts;
    std::mutex contexts_mutex;
    auto max_targets = [&](int v) {
        switch (config.mode) {
            case ExperimentMode::fig3_low: return v / 2;
            case ExperimentMode::fig3_monitor_heavy:
            case ExperimentMode::fig3_saturated: return 2 * v;
            case ExperimentMode::fig4_accumulate: return iterations;
            case ExperimentMode::fig4_ratio: return 25;
        }
        return 0;
    };
    auto context_for = [&](int v) -> const CompatContext& {
        std::lock_guard<std::mutex> lock(contexts_mutex);
        std::unique_ptr<CompatContext>& slot = contexts[v];
        if (!slot) {
            std::vector<Referent> universe;
            for (int i = 0; i < v; ++i)
                universe.push_back(Referent{"v" + std::to_string(i + 1), ReferentKind::vehicle});
            for (int i = 0; i < max_targets(v); ++i)
                universe.push_back(Referent{"tgt" + std::to_string(i + 1), ReferentKind::target});
            slot = std::make_unique<CompatContext>(saturated_rules, universe);
        }
        return *slot;
    };

    auto run_one = [&](int index) {
        int iter = first_iter + index;
        IterationPlan plan = plan_iteration(config, iter);
        std::vector<Referent> vehicles;
        for (int v = 0; v < plan.vehicles; ++v)
            vehicles.push_back(Referent{"v" + std::to_string(v + 1), ReferentKind::vehicle});
        std::vector<Referent> targets;
        for (const OfferedTask& task : plan.tasks)
            if (task.kind == TaskKind::monitoring)
                targets.push_back(Referent{task.target_id, ReferentKind::target});

        AssignmentState baseline = assign_baseline(plan.tasks, vehicles, targets);
        AssignmentState synergy = assign_synergy(plan.tasks, vehicles, targets, context_for(plan.vehicles));

        ReportRow row;
        row.iter = iter;
        row.seed = detail::derive_seed(config.seed, std::uint64_t(iter));
        row.vehicles = plan.vehicles;
        row.n_centroid = plan.n_centroid;
        row.n_monitor = plan.n_monitor;
        row.baseline_assigned = int(baseline.accepted.size());
        row.synergy_assigned = int(synergy.accepted.size());
        report.rows[std::size_t(index)] = row;
    };

    int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (int i = 0; i < iterations; ++i) run_one(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (int i = next.fetch_add(1); i < iterations; i = next.fetch_add(1)) run_one(i);
            });
        for (std::thread& worker : workers) worker.join();
    }
    return report;
}

namespace {

Stats stats_of(const std::vector<ReportRow>& rows, int ReportRow::* column) {
    Stats stats;
    if (rows.empty()) return stats;
    double sum = 0.0;
    for (const ReportRow& row : rows) sum += row.*column;
    stats.mean = sum / double(rows.size());
    double var = 0.0;
    for (const ReportRow& row : rows) {
        double d = row.*column - stats.mean;
        var += d * d;
    }
    stats.stddev = std::sqrt(var / double(rows.size()));
    return stats;
}

double within_vehicle_stddev(const std::vector<ReportRow>& rows, int ReportRow::* column) {
    std::map<int, std::vector<double>> buckets;
    for (const ReportRow& row : rows) buckets[row.vehicles].push_back(double(row.*column));
    double var_sum = 0.0;
    std::size_t count = 0;
    for (const auto& [vehicles, values] : buckets) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= double(values.size());
        for (double v : values) {
            var_sum += (v - mean) * (v - mean);
            ++count;
        }
    }
    return count ? std::sqrt(var_sum / double(count)) : 0.0;
}

}  // namespace

Stats ExperimentReport::baseline_stats() const { return stats_of(rows, &ReportRow::baseline_assigned); }
Stats ExperimentReport::synergy_stats() const { return stats_of(rows, &ReportRow::synergy_assigned); }
double ExperimentReport::baseline_within_vehicle_stddev() const {
    return within_vehicle_stddev(rows, &ReportRow::baseline_assigned);
}
double ExperimentReport::synergy_within_vehicle_stddev() const {
    return within_vehicle_stddev(rows, &ReportRow::synergy_assigned);
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
    out << "iter,seed,vehicles,n_centroid,n_monitor,baseline_assigned,synergy_assigned\n";
    for (const ReportRow& row : report.rows) {
        out << row.iter << ',' << row.seed << ',' << row.vehicles << ',' << row.n_centroid << ','
            << row.n_monitor << ',' << row.baseline_assigned << ',' << row.synergy_assigned << '\n';
    }
}

std::vector<ReportRow> read_csv_rows(std::istream& in) {
    std::vector<ReportRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        ReportRow row;
        unsigned long long seed = 0;
        if (std::sscanf(line.c_str(), "%d,%llu,%d,%d,%d,%d,%d", &row.iter, &seed, &row.vehicles,
                        &row.n_centroid, &row.n_monitor, &row.baseline_assigned,
                        &row.synergy_assigned) != 7)
            throw std::runtime_error("bad CSV row: " + line);
        row.seed = seed;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace synergy
