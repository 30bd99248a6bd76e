#pragma once

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synergy/compat.hpp"
#include "synergy/info_model.hpp"
#include "synergy/rules.hpp"
#include "synergy/solver.hpp"
#include "synergy/tasks.hpp"

namespace synergy {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PathKnot {
    int tick = 0;
    Vec2 pos;
};

// A scenario task is either a bound TaskSpec (values recomputed per
// tick) or a raw constraint list (values straight from the file).
struct ScenarioTask {
    std::string task_id;
    std::optional<TaskSpec> spec;
    std::vector<Constraint> raw_constraints;
    int active_from = 0;
    int active_to = std::numeric_limits<int>::max();
    std::optional<Vec2> standoff;  // monitoring only
};

struct Scenario {
    std::vector<Referent> referents;
    TypeTable types;  // from the file's "types" section, else the default table
    std::vector<ScenarioTask> tasks;
    std::map<std::string, Vec2> positions;               // static/initial
    std::map<std::string, std::vector<PathKnot>> paths;  // waypoints, linear interp
    Vec2 default_standoff{-5.0, 0.0};
    int default_ticks = 100;
};

Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

// The setting checked by `compat check`: task constraints as loaded
// (TaskSpec tasks expand with absent values).
MtmrSetting scenario_setting(const Scenario& scenario, const RuleSet& rules);

struct ScenarioState {
    int tick = 0;
    std::map<std::string, Vec2> positions;
    std::vector<Constraint> active_constraints;
    double max_residual = 0.0;
};

// Advances uncontrollable referents along their paths, refreshes
// constraint values, checks compatibility of the active setting and
// solves the controllable positions. Stateless across ticks: positions
// follow the solved configuration directly.
class ScenarioStepper {
public:
    ScenarioStepper(Scenario scenario, const RuleSet& saturated_rules);

    // Throws ScenarioError when the active setting is incompatible or
    // the solve residual exceeds the tolerance.
    ScenarioState step(int tick) const;

    Vec2 input_position(const std::string& id, int tick) const;
    const Scenario& scenario() const { return scenario_; }

private:
    Scenario scenario_;
    RuleSet rules_;
    std::unique_ptr<CompatContext> context_;

    std::vector<Constraint> active_constraints(int tick, std::vector<const ScenarioTask*>* tasks_out) const;
};

// Trajectory CSV: header "tick,referent,x,y", six-decimal coordinates,
// rows sorted by (tick, referent id). Byte-identical across reruns.
void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, const ScenarioState& state);

}  // namespace synergy
