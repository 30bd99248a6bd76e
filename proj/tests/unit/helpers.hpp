#pragma once

#include <string>
#include <vector>

#include "synergy/compat.hpp"
#include "synergy/detail/rng.hpp"
#include "synergy/info_model.hpp"
#include "synergy/rules.hpp"
#include "synergy/tasks.hpp"

namespace synergy::testing {

inline Instance inst(std::string type, std::vector<std::string> refs) {
    return Instance{std::move(type), std::move(refs)};
}

inline std::vector<Referent> vehicles(int n) {
    std::vector<Referent> out;
    for (int i = 1; i <= n; ++i)
        out.push_back(Referent{"v" + std::to_string(i), ReferentKind::vehicle});
    return out;
}

inline std::vector<Referent> referents_of(std::initializer_list<std::pair<const char*, ReferentKind>> spec) {
    std::vector<Referent> out;
    for (auto& [id, kind] : spec) out.push_back(Referent{id, kind});
    return out;
}

inline const RuleSet& saturated_default_rules() {
    static const RuleSet rules = saturate(default_rules());
    return rules;
}

// Random setting from the three task generators: 3-6 vehicles, 1-4
// tasks, targets sometimes shared so overlaps and conflicts occur.
inline MtmrSetting random_task_setting(detail::Rng& rng) {
    MtmrSetting setting;
    int n_vehicles = rng.int_in(3, 6);
    std::vector<Referent> vs = vehicles(n_vehicles);
    setting.referent_universe = vs;

    std::vector<Referent> targets;
    int tasks = rng.int_in(1, 4);
    for (int t = 0; t < tasks; ++t) {
        std::string task_id = "task" + std::to_string(t + 1);
        int kind = rng.int_in(0, 9);
        if (kind < 4) {  // monitoring
            const Referent& vehicle = vs[std::size_t(rng.int_in(0, n_vehicles - 1))];
            if (targets.empty() || rng.chance(0.6)) {
                Referent target{"t" + std::to_string(targets.size() + 1), ReferentKind::target};
                targets.push_back(target);
                setting.referent_universe.push_back(target);
            }
            const Referent& target = targets[std::size_t(rng.int_in(0, int(targets.size()) - 1))];
            setting.tasks.push_back(make_monitoring(vehicle, target, task_id));
        } else if (kind < 8) {  // centroid of 2 or 3
            int size = kind < 6 ? 2 : 3;
            std::vector<int> order(static_cast<std::size_t>(n_vehicles));
            for (int i = 0; i < n_vehicles; ++i) order[std::size_t(i)] = i;
            rng.shuffle(order);
            std::vector<Referent> members;
            for (int i = 0; i < size; ++i) members.push_back(vs[std::size_t(order[std::size_t(i)])]);
            setting.tasks.push_back(make_centroid(members, task_id));
        } else {  // comm maintenance
            std::vector<int> order(static_cast<std::size_t>(n_vehicles));
            for (int i = 0; i < n_vehicles; ++i) order[std::size_t(i)] = i;
            rng.shuffle(order);
            setting.tasks.push_back(make_comm(vs[std::size_t(order[0])], vs[std::size_t(order[1])],
                                              vs[std::size_t(order[2])], task_id));
        }
    }
    return setting;
}

// Raw pin mix over vehicle positions and offsets; exercises derivation
// chains more aggressively than the task generators.
inline MtmrSetting random_raw_setting(detail::Rng& rng) {
    MtmrSetting setting;
    int n = rng.int_in(3, 5);
    setting.referent_universe = vehicles(n);
    auto id = [&](int i) { return "v" + std::to_string(i + 1); };

    int tasks = rng.int_in(1, 3);
    for (int t = 0; t < tasks; ++t) {
        std::vector<Constraint> constraints;
        int pins = rng.int_in(1, 3);
        for (int p = 0; p < pins; ++p) {
            Instance instance;
            if (rng.chance(0.4)) {
                instance = Instance{"G", {id(rng.int_in(0, n - 1))}};
            } else {
                int a = rng.int_in(0, n - 1);
                int b = rng.int_in(0, n - 1);
                while (b == a) b = rng.int_in(0, n - 1);
                instance = Instance{"R", {id(a), id(b)}};
            }
            bool duplicate = false;
            for (const Constraint& c : constraints)
                if (c.instance == instance) duplicate = true;
            if (!duplicate) constraints.push_back(Constraint{instance, std::nullopt});
        }
        setting.tasks.push_back(make_constraint_set("task" + std::to_string(t + 1), constraints));
    }
    return setting;
}

}  // namespace synergy::testing
