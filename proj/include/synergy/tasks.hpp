#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synergy/info_model.hpp"

namespace synergy {

enum class TaskKind { monitoring, centroid2, centroid3, comm_maintenance };

std::string_view to_string(TaskKind kind);
TaskKind task_kind_from_string(std::string_view text);
int coalition_size(TaskKind kind);  // vehicles required

// A concrete task instance: participants are bound referent ids.
// monitoring: (vehicle, target); centroid2/3: member vehicles; comm:
// (endpoint, endpoint, relay). anchor names the referent a centroid
// holds over; its position pins the centroid value at solve time.
struct TaskSpec {
    std::string task_id;
    TaskKind kind = TaskKind::monitoring;
    std::vector<std::string> participants;
    std::optional<std::string> anchor;
};

// {R(vehicle,target), G(target)}. Throws std::invalid_argument unless
// the vehicle is controllable and the target is not.
ConstraintSet make_monitoring(const Referent& vehicle, const Referent& target,
                              std::string task_id);

// {C2(a,b)} or {C3(a,b,c)} with members sorted by id; centroid value is
// permutation-invariant so the member order carries no meaning.
ConstraintSet make_centroid(const std::vector<Referent>& vehicles, std::string task_id);

// {M(a,b,relay)}: relay keeps position between the two endpoints.
ConstraintSet make_comm(const Referent& a, const Referent& b, const Referent& relay,
                        std::string task_id);

// Dispatch on spec.kind; referents are resolved through the universe.
ConstraintSet constraints_for(const TaskSpec& spec, const std::vector<Referent>& universe);

}  // namespace synergy
