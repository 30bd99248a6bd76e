#include "synergy/tasks.hpp"

#include <algorithm>
#include <stdexcept>

namespace synergy {

std::string_view to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::monitoring: return "monitoring";
        case TaskKind::centroid2: return "centroid2";
        case TaskKind::centroid3: return "centroid3";
        case TaskKind::comm_maintenance: return "comm_maintenance";
    }
    return "?";
}

TaskKind task_kind_from_string(std::string_view text) {
    if (text == "monitoring") return TaskKind::monitoring;
    if (text == "centroid2") return TaskKind::centroid2;
    if (text == "centroid3") return TaskKind::centroid3;
    if (text == "comm_maintenance") return TaskKind::comm_maintenance;
    throw std::invalid_argument("unknown task kind: " + std::string(text));
}

int coalition_size(TaskKind kind) {
    switch (kind) {
        case TaskKind::monitoring: return 1;
        case TaskKind::centroid2: return 2;
        case TaskKind::centroid3:
        case TaskKind::comm_maintenance: return 3;
    }
    return 0;
}

ConstraintSet make_monitoring(const Referent& vehicle, const Referent& target,
                              std::string task_id) {
    if (!vehicle.controllable())
        throw std::invalid_argument("monitoring: " + vehicle.id + " is not a controllable vehicle");
    if (target.controllable())
        throw std::invalid_argument("monitoring: " + target.id + " must not be controllable");
    std::vector<Constraint> constraints;
    constraints.push_back(Constraint{Instance{"R", {vehicle.id, target.id}}, std::nullopt});
    constraints.push_back(Constraint{Instance{"G", {target.id}}, std::nullopt});
    return make_constraint_set(std::move(task_id), std::move(constraints));
}

ConstraintSet make_centroid(const std::vector<Referent>& vehicles, std::string task_id) {
    if (vehicles.size() != 2 && vehicles.size() != 3)
        throw std::invalid_argument("centroid: needs 2 or 3 vehicles, got " +
                                    std::to_string(vehicles.size()));
    std::vector<std::string> members;
    for (const Referent& v : vehicles) {
        if (!v.controllable())
            throw std::invalid_argument("centroid: " + v.id + " is not a controllable vehicle");
        members.push_back(v.id);
    }
    std::sort(members.begin(), members.end());
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i] == members[i - 1])
            throw std::invalid_argument("centroid: duplicate vehicle " + members[i]);
    std::string type = members.size() == 2 ? "C2" : "C3";
    std::vector<Constraint> constraints;
    constraints.push_back(Constraint{Instance{type, std::move(members)}, std::nullopt});
    return make_constraint_set(std::move(task_id), std::move(constraints));
}

ConstraintSet make_comm(const Referent& a, const Referent& b, const Referent& relay,
                        std::string task_id) {
    for (const Referent* v : {&a, &b, &relay})
        if (!v->controllable())
            throw std::invalid_argument("comm: " + v->id + " is not a controllable vehicle");
    if (a.id == b.id || a.id == relay.id || b.id == relay.id)
        throw std::invalid_argument("comm: vehicles must be distinct");
    std::vector<Constraint> constraints;
    constraints.push_back(Constraint{Instance{"M", {a.id, b.id, relay.id}}, std::nullopt});
    return make_constraint_set(std::move(task_id), std::move(constraints));
}

ConstraintSet constraints_for(const TaskSpec& spec, const std::vector<Referent>& universe) {
    auto resolve = [&](const std::string& id) -> const Referent& {
        for (const Referent& r : universe)
            if (r.id == id) return r;
        throw std::invalid_argument("task " + spec.task_id + ": unknown referent " + id);
    };
    auto want = [&](std::size_t count) {
        if (spec.participants.size() != count)
            throw std::invalid_argument("task " + spec.task_id + ": " + std::string(to_string(spec.kind)) +
                                        " expects " + std::to_string(count) + " participants");
    };
    switch (spec.kind) {
        case TaskKind::monitoring:
            want(2);
            return make_monitoring(resolve(spec.participants[0]), resolve(spec.participants[1]),
                                   spec.task_id);
        case TaskKind::centroid2:
        case TaskKind::centroid3: {
            want(spec.kind == TaskKind::centroid2 ? 2 : 3);
            std::vector<Referent> members;
            for (const std::string& id : spec.participants) members.push_back(resolve(id));
            return make_centroid(members, spec.task_id);
        }
        case TaskKind::comm_maintenance:
            want(3);
            return make_comm(resolve(spec.participants[0]), resolve(spec.participants[1]),
                             resolve(spec.participants[2]), spec.task_id);
    }
    throw std::invalid_argument("task " + spec.task_id + ": bad kind");
}

}  // namespace synergy
