#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace synergy {

enum class ReferentKind { vehicle, target, location };

std::string_view to_string(ReferentKind kind);
ReferentKind referent_kind_from_string(std::string_view text);

// A named entity an information instance can be about. Vehicles are the
// only controllable referents; targets and locations are inputs.
struct Referent {
    std::string id;
    ReferentKind kind = ReferentKind::vehicle;

    bool controllable() const { return kind == ReferentKind::vehicle; }
    bool operator==(const Referent&) const = default;
};

// Schema shared by information instances: name, referent count and the
// dimension of the value carried (2 for planar positions).
struct InfoType {
    std::string name;
    int arity = 1;
    int value_dim = 2;

    bool operator==(const InfoType&) const = default;
};

class TypeTable {
public:
    // Throws std::invalid_argument on duplicate names or bad arity/dim.
    void add(InfoType type);

    const InfoType* find(std::string_view name) const;
    const InfoType& at(std::string_view name) const;  // throws if absent
    const std::vector<InfoType>& types() const { return types_; }
    bool empty() const { return types_.empty(); }

private:
    std::vector<InfoType> types_;
    std::unordered_map<std::string, std::size_t> index_;
};

// A typed information label over an ordered referent tuple, e.g. R(v1,t).
// Referent order is significant: R(a,b) and R(b,a) are distinct.
struct Instance {
    std::string type;
    std::vector<std::string> referents;

    bool operator==(const Instance&) const = default;
    bool operator<(const Instance& other) const {
        if (type != other.type) return type < other.type;
        return referents < other.referents;
    }
};

// Deterministic injective key "name(id1,id2,...)"; used for hashing,
// duplicate detection and file round-tripping.
std::string canonical_key(const Instance& instance);

// Parses "R(v1,t)" against the table (arity check). Throws
// std::invalid_argument with a description on malformed input.
Instance parse_instance(std::string_view text, const TypeTable& types);

struct InstanceHash {
    std::size_t operator()(const Instance& instance) const;
};

using InstanceSet = std::set<Instance>;

using Value = std::vector<double>;  // length == value_dim of the type

// A pin on the value of an information instance. The value is optional:
// symbolic checking ignores it, the numeric paths require it.
struct Constraint {
    Instance instance;
    std::optional<Value> value;
};

// Per-task constraint set. Constraints are kept sorted by canonical key
// and no two constraints share an instance.
struct ConstraintSet {
    std::string task_id;
    std::vector<Constraint> constraints;

    InstanceSet instances() const;
};

// Validates, sorts and returns the set; throws on duplicate instances.
ConstraintSet make_constraint_set(std::string task_id, std::vector<Constraint> constraints);

// Multi-tasking-robots setting: all task constraint sets active at once,
// each with independently chosen values.
struct MtmrSetting {
    std::vector<ConstraintSet> tasks;
    std::vector<Referent> referent_universe;

    const Referent* find_referent(std::string_view id) const;
    InstanceSet all_instances() const;
};

// Throws std::invalid_argument if a constraint references an unknown
// referent, a referent id repeats, or a task has duplicate instances.
void validate_setting(const MtmrSetting& setting);

struct Overlap {
    std::string task_a;
    std::string task_b;
    Instance instance;
};

// First pair of distinct tasks sharing an information instance, scanning
// tasks in list order and constraints in sorted order.
std::optional<Overlap> detect_overlap(const MtmrSetting& setting);

}  // namespace synergy
