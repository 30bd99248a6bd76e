#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "synergy/compat.hpp"
#include "synergy/info_model.hpp"
#include "synergy/rules.hpp"
#include "synergy/tasks.hpp"

namespace synergy {

// A task offered to the assigners: the kind is fixed, vehicles are
// chosen at acceptance time. Monitoring tasks carry their target.
struct OfferedTask {
    TaskKind kind = TaskKind::monitoring;
    std::string target_id;  // monitoring only
};

struct AcceptedTask {
    TaskSpec spec;
    ConstraintSet constraints;
    std::vector<std::string> coalition;  // vehicle ids
};

struct AssignmentState {
    std::vector<AcceptedTask> accepted;
    std::set<std::string> busy;  // baseline bookkeeping
    MtmrSetting setting;         // synergy accumulated constraints
};

// Single-tasking baseline: processes tasks in order and accepts a task
// iff enough non-busy vehicles remain, picking the lowest-index ones.
// No constraint reasoning.
AssignmentState assign_baseline(const std::vector<OfferedTask>& tasks,
                                const std::vector<Referent>& vehicles,
                                const std::vector<Referent>& targets);

// Overlapping-coalition policy: all vehicles stay eligible; the first
// coalition (lowest-index order) whose constraints keep the accumulated
// setting compatible is taken, otherwise the task is skipped.
AssignmentState assign_synergy(const std::vector<OfferedTask>& tasks,
                               const std::vector<Referent>& vehicles,
                               const std::vector<Referent>& targets,
                               const RuleSet& saturated_rules);

// Same policy with a prebuilt checker whose universe covers every
// vehicle and target; lets experiment drivers share the ground program.
AssignmentState assign_synergy(const std::vector<OfferedTask>& tasks,
                               const std::vector<Referent>& vehicles,
                               const std::vector<Referent>& targets,
                               const CompatContext& context);

enum class ExperimentMode {
    fig3_low,            // floor(V/2) centroid + floor(V/2) monitoring
    fig3_monitor_heavy,  // floor(V/2) centroid + 2V monitoring
    fig3_saturated,      // V centroid + 2V monitoring
    fig4_accumulate,     // one more task per iteration, fixed vehicles
    fig4_ratio,          // 25 tasks sweeping monitoring:centroid 25:0 -> 0:25
};

std::string_view to_string(ExperimentMode mode);
ExperimentMode experiment_mode_from_string(std::string_view text);

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::fig3_low;
    std::uint64_t seed = 1;
    int iterations = 0;  // 0 = mode default (fig3: 100, accumulate: 25, ratio: 26)
    int vehicles_min = 3, vehicles_max = 7;  // fig3 modes
    int vehicles_fixed = 5;                  // fig4 modes
    int jobs = 1;
};

struct ReportRow {
    int iter = 0;
    std::uint64_t seed = 0;
    int vehicles = 0;
    int n_centroid = 0;
    int n_monitor = 0;
    int baseline_assigned = 0;
    int synergy_assigned = 0;
};

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;

    Stats baseline_stats() const;
    Stats synergy_stats() const;
    // Variation remaining after removing the vehicle-count effect:
    // sqrt of the mean per-vehicle-bucket variance.
    double baseline_within_vehicle_stddev() const;
    double synergy_within_vehicle_stddev() const;
};

// Runs both policies on identical seeded task streams, one row per
// iteration. Deterministic in (config, seed) regardless of jobs.
ExperimentReport run_experiment(const ExperimentConfig& config, const RuleSet& saturated_rules);

void write_csv(std::ostream& out, const ExperimentReport& report);
std::vector<ReportRow> read_csv_rows(std::istream& in);

// Per-iteration task stream used by run_experiment; exposed for tests.
struct IterationPlan {
    int vehicles = 0;
    std::vector<OfferedTask> tasks;
    int n_centroid = 0;
    int n_monitor = 0;
};
IterationPlan plan_iteration(const ExperimentConfig& config, int iter);

}  // namespace synergy
