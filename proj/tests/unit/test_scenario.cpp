#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "synergy/scenario.hpp"

using namespace synergy;
using namespace synergy::testing;

namespace {

std::string data_path(const std::string& name) {
    return std::string(SYNERGY_DATA_DIR) + "/scenarios/" + name;
}

bool close(Vec2 a, Vec2 b, double tol = 1e-6) {
    return std::abs(a.x - b.x) < tol && std::abs(a.y - b.y) < tol;
}

}  // namespace

TEST_CASE("scenario files load with tasks, paths and schedule applied") {
    Scenario scenario = load_scenario_file(data_path("convoy.json"));
    CHECK(scenario.referents.size() == 8);
    CHECK(scenario.tasks.size() == 4);
    CHECK(scenario.paths.count("lead"));
    bool schedule_applied = false;
    for (const ScenarioTask& task : scenario.tasks)
        if (task.task_id == "watch_intruder1" && task.active_from == 100) schedule_applied = true;
    CHECK(schedule_applied);
}

TEST_CASE("malformed scenarios fail with descriptive errors") {
    CHECK_THROWS_AS(load_scenario("{not json"), ScenarioError);
    CHECK_THROWS_AS(load_scenario(R"json({"tasks": []})json"), ScenarioError);
    CHECK_THROWS_AS(load_scenario(R"json({"referents": [], "tasks": [{"task_id": "x"}]})json"), ScenarioError);
    // unknown instance type in a raw constraint
    CHECK_THROWS_AS(load_scenario(R"json({
        "referents": [{"id": "a", "kind": "vehicle"}],
        "tasks": [{"task_id": "x", "constraints": [{"instance": "Q(a)", "value": null}]}]
    })json"),
                    ScenarioError);
    // value dimension must match the type
    CHECK_THROWS_AS(load_scenario(R"json({
        "referents": [{"id": "a", "kind": "vehicle"}],
        "tasks": [{"task_id": "x", "constraints": [{"instance": "G(a)", "value": [1, 2, 3]}]}]
    })json"),
                    ScenarioError);
}

TEST_CASE("the demo scenario's constraint sets are compatible") {
    Scenario scenario = load_scenario_file(data_path("synergy_demo.json"));
    const RuleSet& rules = saturated_default_rules();
    MtmrSetting setting = scenario_setting(scenario, rules);
    CHECK(check_compat(setting, rules).compatible);
    CHECK(oracle_theorem1(setting, rules).compatible);
}

TEST_CASE("the conflict scenario is incompatible under every route") {
    Scenario scenario = load_scenario_file(data_path("conflict.json"));
    const RuleSet& rules = saturated_default_rules();
    MtmrSetting setting = scenario_setting(scenario, rules);
    CHECK_FALSE(check_compat(setting, rules).compatible);
    CHECK_FALSE(oracle_theorem1(setting, rules).compatible);
    CHECK_FALSE(oracle_numeric(setting, rules, 4).compatible);
}

TEST_CASE("path interpolation is linear and clamped") {
    Scenario scenario = load_scenario_file(data_path("synergy_demo.json"));
    ScenarioStepper stepper(scenario, saturated_default_rules());
    CHECK(close(stepper.input_position("tgt", 0), Vec2{30, 10}));
    CHECK(close(stepper.input_position("tgt", 40), Vec2{30, -1}));
    CHECK(close(stepper.input_position("tgt", 80), Vec2{30, -12}));
    CHECK(close(stepper.input_position("tgt", 500), Vec2{45, 14}));
    CHECK(close(stepper.input_position("base", 123), Vec2{0, 0}));
}

TEST_CASE("the demo scenario tracks the target while the centroid holds") {
    Scenario scenario = load_scenario_file(data_path("synergy_demo.json"));
    ScenarioStepper stepper(scenario, saturated_default_rules());
    for (int tick : {0, 50, 137, 199}) {
        ScenarioState state = stepper.step(tick);
        CHECK(state.max_residual < 1e-6);
        Vec2 target = stepper.input_position("tgt", tick);
        CHECK(close(state.positions.at("r1"), target + Vec2{-5, 0}, 1e-6));
        Vec2 centroid = (1.0 / 3.0) * (state.positions.at("r1") + state.positions.at("r2") +
                                       state.positions.at("r3"));
        CHECK(close(centroid, Vec2{0, 0}, 1e-6));
    }
}

TEST_CASE("a static scenario repeats the same configuration every tick") {
    const char* text = R"json({
        "referents": [
            {"id": "v1", "kind": "vehicle"},
            {"id": "t", "kind": "target"}
        ],
        "tasks": [{"task_id": "watch", "kind": "monitoring", "participants": ["v1", "t"]}],
        "positions": {"t": [12, -7]}
    })json";
    ScenarioStepper stepper(load_scenario(text), saturated_default_rules());
    ScenarioState first = stepper.step(0);
    ScenarioState later = stepper.step(42);
    CHECK(close(first.positions.at("v1"), later.positions.at("v1"), 1e-12));
    CHECK(close(first.positions.at("v1"), Vec2{7, -7}, 1e-6));
}

TEST_CASE("the convoy joins mid-run and satisfies every active constraint") {
    Scenario scenario = load_scenario_file(data_path("convoy.json"));
    ScenarioStepper stepper(scenario, saturated_default_rules());

    ScenarioState before = stepper.step(50);
    CHECK(before.active_constraints.size() == 2);  // centroid + comm link

    ScenarioState after = stepper.step(150);
    CHECK(after.active_constraints.size() == 6);
    CHECK(after.max_residual < 1e-6);
    // relay sits midway between the lead and the station
    Vec2 mid = 0.5 * (stepper.input_position("lead", 150) + stepper.input_position("station", 150));
    CHECK(close(after.positions.at("relay"), mid, 1e-6));
    // the two watchers hold their standoffs
    CHECK(close(after.positions.at("v2"), stepper.input_position("intruder1", 150) + Vec2{-4, 0}, 1e-6));
    CHECK(close(after.positions.at("v3"), stepper.input_position("intruder2", 150) + Vec2{4, 0}, 1e-6));
    // and the escort centroid still holds over the lead
    Vec2 centroid = (1.0 / 3.0) * (after.positions.at("v2") + after.positions.at("v3") +
                                   after.positions.at("v4"));
    CHECK(close(centroid, stepper.input_position("lead", 150), 1e-6));
}

TEST_CASE("an incompatible active setting halts with a diagnostic") {
    const char* text = R"json({
        "referents": [
            {"id": "v1", "kind": "vehicle"},
            {"id": "v2", "kind": "vehicle"}
        ],
        "tasks": [
            {"task_id": "pins", "constraints": [
                {"instance": "G(v1)", "value": [0, 0]},
                {"instance": "G(v2)", "value": [4, 0]}
            ]},
            {"task_id": "offset", "constraints": [{"instance": "R(v1,v2)", "value": [1, 1]}]}
        ]
    })json";
    ScenarioStepper stepper(load_scenario(text), saturated_default_rules());
    CHECK_THROWS_AS(stepper.step(0), ScenarioError);
}

TEST_CASE("trajectory rows are sorted and byte-stable") {
    Scenario scenario = load_scenario_file(data_path("synergy_demo.json"));
    ScenarioStepper stepper(scenario, saturated_default_rules());
    std::ostringstream first, second;
    write_trajectory_header(first);
    write_trajectory_header(second);
    for (int tick = 0; tick < 5; ++tick) {
        write_trajectory_rows(first, stepper.step(tick));
        write_trajectory_rows(second, stepper.step(tick));
    }
    CHECK(first.str() == second.str());
    CHECK(first.str().find("tick,referent,x,y\n0,base,") != std::string::npos);
}
