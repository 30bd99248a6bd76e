#include "synergy/info_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace synergy {

std::string_view to_string(ReferentKind kind) {
    switch (kind) {
        case ReferentKind::vehicle: return "vehicle";
        case ReferentKind::target: return "target";
        case ReferentKind::location: return "location";
    }
    return "?";
}

ReferentKind referent_kind_from_string(std::string_view text) {
    if (text == "vehicle") return ReferentKind::vehicle;
    if (text == "target") return ReferentKind::target;
    if (text == "location") return ReferentKind::location;
    throw std::invalid_argument("unknown referent kind: " + std::string(text));
}

void TypeTable::add(InfoType type) {
    if (type.name.empty()) throw std::invalid_argument("type name must be nonempty");
    if (type.arity < 1) throw std::invalid_argument("type " + type.name + ": arity must be positive");
    if (type.value_dim < 1) throw std::invalid_argument("type " + type.name + ": dim must be positive");
    if (index_.count(type.name))
        throw std::invalid_argument("duplicate type declaration: " + type.name);
    index_.emplace(type.name, types_.size());
    types_.push_back(std::move(type));
}

const InfoType* TypeTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &types_[it->second];
}

const InfoType& TypeTable::at(std::string_view name) const {
    const InfoType* type = find(name);
    if (!type) throw std::invalid_argument("unknown information type: " + std::string(name));
    return *type;
}

std::string canonical_key(const Instance& instance) {
    std::string key = instance.type;
    key += '(';
    for (std::size_t i = 0; i < instance.referents.size(); ++i) {
        if (i) key += ',';
        key += instance.referents[i];
    }
    key += ')';
    return key;
}

Instance parse_instance(std::string_view text, const TypeTable& types) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("bad instance \"" + std::string(text) + "\": " + why);
    };
    std::size_t open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') fail("expected name(id,...)");
    std::string name(text.substr(0, open));
    if (name.empty()) fail("empty type name");
    Instance instance;
    instance.type = name;
    std::string_view args = text.substr(open + 1, text.size() - open - 2);
    if (args.empty()) fail("expected at least one referent");
    std::size_t start = 0;
    while (true) {
        std::size_t comma = args.find(',', start);
        std::string_view id = args.substr(start, comma == std::string_view::npos ? comma : comma - start);
        // trim surrounding blanks
        while (!id.empty() && id.front() == ' ') id.remove_prefix(1);
        while (!id.empty() && id.back() == ' ') id.remove_suffix(1);
        if (id.empty()) fail("empty referent id");
        instance.referents.emplace_back(id);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    const InfoType& type = types.at(name);
    if (int(instance.referents.size()) != type.arity)
        fail("type " + name + " expects " + std::to_string(type.arity) + " referents, got " +
             std::to_string(instance.referents.size()));
    return instance;
}

std::size_t InstanceHash::operator()(const Instance& instance) const {
    std::size_t h = std::hash<std::string>{}(instance.type);
    for (const std::string& r : instance.referents)
        h = h * 1000003u ^ std::hash<std::string>{}(r);
    return h;
}

InstanceSet ConstraintSet::instances() const {
    InstanceSet out;
    for (const Constraint& c : constraints) out.insert(c.instance);
    return out;
}

ConstraintSet make_constraint_set(std::string task_id, std::vector<Constraint> constraints) {
    std::sort(constraints.begin(), constraints.end(), [](const Constraint& a, const Constraint& b) {
        return a.instance < b.instance;
    });
    for (std::size_t i = 1; i < constraints.size(); ++i)
        if (constraints[i].instance == constraints[i - 1].instance)
            throw std::invalid_argument("task " + task_id + ": duplicate constraint on " +
                                        canonical_key(constraints[i].instance));
    return ConstraintSet{std::move(task_id), std::move(constraints)};
}

const Referent* MtmrSetting::find_referent(std::string_view id) const {
    for (const Referent& r : referent_universe)
        if (r.id == id) return &r;
    return nullptr;
}

InstanceSet MtmrSetting::all_instances() const {
    InstanceSet out;
    for (const ConstraintSet& task : tasks)
        for (const Constraint& c : task.constraints) out.insert(c.instance);
    return out;
}

void validate_setting(const MtmrSetting& setting) {
    std::unordered_set<std::string> ids;
    for (const Referent& r : setting.referent_universe) {
        if (r.id.empty()) throw std::invalid_argument("referent with empty id");
        if (!ids.insert(r.id).second)
            throw std::invalid_argument("duplicate referent id: " + r.id);
    }
    std::unordered_set<std::string> task_ids;
    for (const ConstraintSet& task : setting.tasks)
        if (!task_ids.insert(task.task_id).second)
            throw std::invalid_argument("duplicate task id: " + task.task_id);
    for (const ConstraintSet& task : setting.tasks) {
        std::unordered_set<std::string> seen;
        for (const Constraint& c : task.constraints) {
            if (!seen.insert(canonical_key(c.instance)).second)
                throw std::invalid_argument("task " + task.task_id + ": duplicate constraint on " +
                                            canonical_key(c.instance));
            for (const std::string& r : c.instance.referents)
                if (!ids.count(r))
                    throw std::invalid_argument("task " + task.task_id + ": unknown referent " + r +
                                                " in " + canonical_key(c.instance));
        }
    }
}

std::optional<Overlap> detect_overlap(const MtmrSetting& setting) {
    for (std::size_t i = 0; i < setting.tasks.size(); ++i) {
        InstanceSet mine = setting.tasks[i].instances();
        for (std::size_t j = i + 1; j < setting.tasks.size(); ++j) {
            for (const Constraint& c : setting.tasks[j].constraints) {
                if (mine.count(c.instance))
                    return Overlap{setting.tasks[i].task_id, setting.tasks[j].task_id, c.instance};
            }
        }
    }
    return std::nullopt;
}

}  // namespace synergy
