#include "synergy/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace synergy {

namespace {

using nlohmann::json;

Vec2 vec2_of(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ScenarioError(what + ": expected [x, y]");
    return Vec2{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Scenario load_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario parse error: ") + e.what());
    }

    Scenario scenario;
    if (!root.contains("referents") || !root["referents"].is_array())
        throw ScenarioError("scenario needs a \"referents\" array");
    for (const json& r : root["referents"]) {
        Referent referent;
        referent.id = r.at("id").get<std::string>();
        referent.kind = referent_kind_from_string(r.value("kind", "vehicle"));
        scenario.referents.push_back(std::move(referent));
    }

    if (root.contains("types")) {
        for (const json& t : root["types"])
            scenario.types.add(InfoType{t.at("name").get<std::string>(), t.at("arity").get<int>(),
                                        t.value("dim", 2)});
    } else {
        scenario.types = default_rules().types;
    }

    if (root.contains("standoff")) scenario.default_standoff = vec2_of(root["standoff"], "standoff");
    scenario.default_ticks = root.value("ticks", 100);

    if (!root.contains("tasks") || !root["tasks"].is_array())
        throw ScenarioError("scenario needs a \"tasks\" array");
    for (const json& t : root["tasks"]) {
        ScenarioTask task;
        task.task_id = t.at("task_id").get<std::string>();
        if (t.contains("kind")) {
            TaskSpec spec;
            spec.task_id = task.task_id;
            spec.kind = task_kind_from_string(t.at("kind").get<std::string>());
            for (const json& p : t.at("participants")) spec.participants.push_back(p.get<std::string>());
            if (t.contains("anchor")) spec.anchor = t["anchor"].get<std::string>();
            task.spec = std::move(spec);
        } else if (t.contains("constraints")) {
            for (const json& c : t["constraints"]) {
                Constraint constraint;
                try {
                    constraint.instance =
                        parse_instance(c.at("instance").get<std::string>(), scenario.types);
                } catch (const std::invalid_argument& e) {
                    throw ScenarioError("task " + task.task_id + ": " + e.what());
                }
                if (c.contains("value") && !c["value"].is_null()) {
                    const json& v = c["value"];
                    if (!v.is_array()) throw ScenarioError("task " + task.task_id + ": bad value");
                    Value value;
                    for (const json& x : v) value.push_back(x.get<double>());
                    int dim = scenario.types.at(constraint.instance.type).value_dim;
                    if (int(value.size()) != dim)
                        throw ScenarioError("task " + task.task_id + ": value for " +
                                            canonical_key(constraint.instance) + " needs " +
                                            std::to_string(dim) + " components");
                    constraint.value = std::move(value);
                }
                task.raw_constraints.push_back(std::move(constraint));
            }
        } else {
            throw ScenarioError("task " + task.task_id + ": needs \"kind\" or \"constraints\"");
        }
        if (t.contains("standoff")) task.standoff = vec2_of(t["standoff"], "standoff");
        scenario.tasks.push_back(std::move(task));
    }

    if (root.contains("positions"))
        for (const auto& [id, pos] : root["positions"].items())
            scenario.positions[id] = vec2_of(pos, "position of " + id);

    if (root.contains("paths")) {
        for (const auto& [id, knots] : root["paths"].items()) {
            std::vector<PathKnot> path;
            for (const json& k : knots)
                path.push_back(PathKnot{k.at("tick").get<int>(), vec2_of(k.at("pos"), "path of " + id)});
            std::sort(path.begin(), path.end(),
                      [](const PathKnot& a, const PathKnot& b) { return a.tick < b.tick; });
            if (path.empty()) throw ScenarioError("empty path for " + id);
            scenario.paths[id] = std::move(path);
        }
    }

    if (root.contains("schedule")) {
        for (const json& entry : root["schedule"]) {
            std::string id = entry.at("task").get<std::string>();
            bool found = false;
            for (ScenarioTask& task : scenario.tasks) {
                if (task.task_id != id) continue;
                task.active_from = entry.value("from", 0);
                if (entry.contains("to")) task.active_to = entry["to"].get<int>();
                found = true;
            }
            if (!found) throw ScenarioError("schedule references unknown task " + id);
        }
    }
    return scenario;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario(buffer.str());
}

namespace {

void check_types_against(const TypeTable& scenario_types, const TypeTable& rule_types) {
    for (const InfoType& type : scenario_types.types()) {
        const InfoType* known = rule_types.find(type.name);
        if (known && !(*known == type))
            throw ScenarioError("type " + type.name + " differs from the rule file declaration");
    }
}

std::vector<Constraint> task_constraints(const Scenario& scenario, const ScenarioTask& task) {
    if (task.spec) {
        ConstraintSet set = constraints_for(*task.spec, scenario.referents);
        return set.constraints;
    }
    return task.raw_constraints;
}

}  // namespace

MtmrSetting scenario_setting(const Scenario& scenario, const RuleSet& rules) {
    check_types_against(scenario.types, rules.types);
    MtmrSetting setting;
    setting.referent_universe = scenario.referents;
    for (const ScenarioTask& task : scenario.tasks)
        setting.tasks.push_back(make_constraint_set(task.task_id, task_constraints(scenario, task)));
    validate_setting(setting);
    return setting;
}

ScenarioStepper::ScenarioStepper(Scenario scenario, const RuleSet& saturated_rules)
    : scenario_(std::move(scenario)), rules_(saturated_rules) {
    require_saturated(rules_);
    check_types_against(scenario_.types, rules_.types);
    // fail early on structural problems
    MtmrSetting all = scenario_setting(scenario_, rules_);
    for (const ScenarioTask& task : scenario_.tasks) {
        if (!task.spec) continue;
        const TaskSpec& spec = *task.spec;
        bool centroid = spec.kind == TaskKind::centroid2 || spec.kind == TaskKind::centroid3;
        if (centroid && !spec.anchor)
            throw ScenarioError("task " + spec.task_id + ": centroid task needs an anchor");
    }
    context_ = std::make_unique<CompatContext>(rules_, scenario_.referents);
}

Vec2 ScenarioStepper::input_position(const std::string& id, int tick) const {
    auto path_it = scenario_.paths.find(id);
    if (path_it != scenario_.paths.end()) {
        const std::vector<PathKnot>& path = path_it->second;
        if (tick <= path.front().tick) return path.front().pos;
        if (tick >= path.back().tick) return path.back().pos;
        for (std::size_t i = 1; i < path.size(); ++i) {
            if (tick > path[i].tick) continue;
            const PathKnot& a = path[i - 1];
            const PathKnot& b = path[i];
            double f = double(tick - a.tick) / double(b.tick - a.tick);
            return a.pos + f * (b.pos - a.pos);
        }
    }
    auto pos_it = scenario_.positions.find(id);
    if (pos_it != scenario_.positions.end()) return pos_it->second;
    throw ScenarioError("no position or path for referent " + id);
}

std::vector<Constraint> ScenarioStepper::active_constraints(
    int tick, std::vector<const ScenarioTask*>* tasks_out) const {
    std::vector<Constraint> out;
    for (const ScenarioTask& task : scenario_.tasks) {
        if (tick < task.active_from || tick > task.active_to) continue;
        if (tasks_out) tasks_out->push_back(&task);
        std::vector<Constraint> constraints = task_constraints(scenario_, task);
        if (task.spec) {
            const TaskSpec& spec = *task.spec;
            Vec2 standoff = task.standoff.value_or(scenario_.default_standoff);
            for (Constraint& c : constraints) {
                if (spec.kind == TaskKind::monitoring) {
                    if (c.instance.type == "R") {
                        c.value = Value{standoff.x, standoff.y};
                    } else {
                        Vec2 pos = input_position(spec.participants[1], tick);
                        c.value = Value{pos.x, pos.y};
                    }
                } else if (spec.kind == TaskKind::comm_maintenance) {
                    c.value = Value{0.0, 0.0};
                } else {
                    Vec2 anchor = input_position(*spec.anchor, tick);
                    c.value = Value{anchor.x, anchor.y};
                }
            }
        } else {
            for (const Constraint& c : constraints)
                if (!c.value)
                    throw ScenarioError("task " + task.task_id + ": constraint " +
                                        canonical_key(c.instance) + " needs a value to simulate");
        }
        out.insert(out.end(), constraints.begin(), constraints.end());
    }
    return out;
}

ScenarioState ScenarioStepper::step(int tick) const {
    std::vector<const ScenarioTask*> active;
    std::vector<Constraint> constraints = active_constraints(tick, &active);

    MtmrSetting setting;
    setting.referent_universe = scenario_.referents;
    {
        std::size_t offset = 0;
        for (const ScenarioTask* task : active) {
            std::size_t count = task->spec ? task_constraints(scenario_, *task).size()
                                           : task->raw_constraints.size();
            std::vector<Constraint> slice(constraints.begin() + long(offset),
                                          constraints.begin() + long(offset + count));
            setting.tasks.push_back(make_constraint_set(task->task_id, std::move(slice)));
            offset += count;
        }
    }
    CompatVerdict verdict = context_->check(setting);
    if (!verdict.compatible)
        throw ScenarioError("tick " + std::to_string(tick) + ": active tasks are incompatible (" +
                            to_string(*verdict.witness) + ")");

    std::map<std::string, Vec2> fixed;
    for (const Referent& r : scenario_.referents)
        if (!r.controllable()) fixed[r.id] = input_position(r.id, tick);

    SolveResult solved = solve_configuration(constraints, fixed, rules_, scenario_.referents);
    if (!solved.consistent)
        throw ScenarioError("tick " + std::to_string(tick) +
                            ": configuration solve residual " + std::to_string(solved.max_residual));

    ScenarioState state;
    state.tick = tick;
    state.positions = std::move(solved.positions);
    state.active_constraints = std::move(constraints);
    state.max_residual = solved.max_residual;
    return state;
}

void write_trajectory_header(std::ostream& out) { out << "tick,referent,x,y\n"; }

void write_trajectory_rows(std::ostream& out, const ScenarioState& state) {
    char buffer[64];
    for (const auto& [id, pos] : state.positions) {
        std::snprintf(buffer, sizeof buffer, "%.6f,%.6f", pos.x, pos.y);
        out << state.tick << ',' << id << ',' << buffer << '\n';
    }
}

}  // namespace synergy
