#include "synergy/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <unordered_set>

namespace synergy {

void require_saturated(const RuleSet& rules) {
    if (!rules.saturated)
        throw std::invalid_argument("rule set must be saturated (call saturate() first)");
}

namespace {

std::string format_coeff(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
}

void append_pattern(std::string& out, const RulePattern& pattern,
                    std::unordered_map<std::string, int>& renaming) {
    out += pattern.type;
    out += '(';
    for (std::size_t i = 0; i < pattern.slots.size(); ++i) {
        if (i) out += ',';
        auto [it, fresh] = renaming.try_emplace(pattern.slots[i], int(renaming.size()));
        out += 'v';
        out += std::to_string(it->second);
    }
    out += ')';
}

std::string serialize(const Rule& rule, const std::vector<std::size_t>& order) {
    std::unordered_map<std::string, int> renaming;
    std::string out;
    append_pattern(out, rule.rhs, renaming);
    out += "<-";
    for (std::size_t k = 0; k < order.size(); ++k) {
        const RuleTerm& term = rule.lhs[order[k]];
        if (k) out += '+';
        out += format_coeff(term.coeff);
        out += '*';
        append_pattern(out, term.pattern, renaming);
    }
    if (rule.rhs_offset != 0.0) {
        out += '|';
        out += format_coeff(rule.rhs_offset);
    }
    return out;
}

}  // namespace

std::string rule_signature(const Rule& rule) {
    std::vector<std::size_t> order(rule.lhs.size());
    std::iota(order.begin(), order.end(), 0);
    std::string best = serialize(rule, order);
    while (std::next_permutation(order.begin(), order.end())) {
        std::string candidate = serialize(rule, order);
        if (candidate < best) best = std::move(candidate);
    }
    return best;
}

std::string to_string(const Rule& rule) {
    std::string out = rule.rhs.type;
    out += '(';
    for (std::size_t i = 0; i < rule.rhs.slots.size(); ++i) {
        if (i) out += ',';
        out += rule.rhs.slots[i];
    }
    out += ") <- ";
    for (std::size_t i = 0; i < rule.lhs.size(); ++i) {
        if (i) out += " + ";
        out += format_coeff(rule.lhs[i].coeff);
        out += '*';
        out += rule.lhs[i].pattern.type;
        out += '(';
        for (std::size_t j = 0; j < rule.lhs[i].pattern.slots.size(); ++j) {
            if (j) out += ',';
            out += rule.lhs[i].pattern.slots[j];
        }
        out += ')';
    }
    if (rule.rhs_offset != 0.0) {
        out += " + ";
        out += format_coeff(rule.rhs_offset);
    }
    return out;
}

RuleSet saturate(const RuleSet& rules) {
    if (rules.saturated) return rules;

    RuleSet out;
    out.types = rules.types;
    out.saturated = true;
    std::unordered_set<std::string> seen;
    auto add = [&](Rule rule) {
        if (seen.insert(rule_signature(rule)).second) out.rules.push_back(std::move(rule));
    };

    for (const Rule& rule : rules.rules) {
        add(rule);
        // Solve rhs = sum(c_j * L_j) + d for each L_i:
        //   L_i = (1/c_i)*rhs - sum_{j != i}(c_j/c_i)*L_j - d/c_i
        for (std::size_t i = 0; i < rule.lhs.size(); ++i) {
            double ci = rule.lhs[i].coeff;
            Rule variant;
            variant.rhs = rule.lhs[i].pattern;
            variant.lhs.push_back(RuleTerm{1.0 / ci, rule.rhs});
            for (std::size_t j = 0; j < rule.lhs.size(); ++j) {
                if (j == i) continue;
                variant.lhs.push_back(RuleTerm{-rule.lhs[j].coeff / ci, rule.lhs[j].pattern});
            }
            variant.rhs_offset = -rule.rhs_offset / ci;
            add(std::move(variant));
        }
    }
    return out;
}

namespace {

// Variables of a rule in first-appearance order (lhs first), plus the
// slot positions of every atom expressed as variable indices.
struct RuleShape {
    std::vector<std::string> vars;
    std::vector<std::vector<int>> lhs_slots;
    std::vector<int> rhs_slots;
};

RuleShape shape_of(const Rule& rule) {
    RuleShape shape;
    auto var_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < shape.vars.size(); ++i)
            if (shape.vars[i] == name) return int(i);
        shape.vars.push_back(name);
        return int(shape.vars.size() - 1);
    };
    for (const RuleTerm& term : rule.lhs) {
        std::vector<int> slots;
        for (const std::string& slot : term.pattern.slots) slots.push_back(var_index(slot));
        shape.lhs_slots.push_back(std::move(slots));
    }
    for (const std::string& slot : rule.rhs.slots) shape.rhs_slots.push_back(var_index(slot));
    return shape;
}

// Enumerates injective assignments of shape.vars to universe indices in
// lexicographic order and calls f with the assignment.
template <class F>
void each_injective_assignment(std::size_t var_count, std::size_t universe_size, F f) {
    if (var_count > universe_size) return;
    if (var_count == 0) return;  // patterns always carry at least one variable
    std::vector<int> assignment(var_count, -1);
    std::vector<char> used(universe_size, 0);
    std::size_t level = 0;
    std::vector<int> cursor(var_count, 0);
    while (true) {
        if (cursor[level] == int(universe_size)) {
            if (level == 0) return;
            cursor[level] = 0;
            --level;
            used[std::size_t(assignment[level])] = 0;
            ++cursor[level];
            continue;
        }
        int candidate = cursor[level];
        if (used[std::size_t(candidate)]) {
            ++cursor[level];
            continue;
        }
        assignment[level] = candidate;
        if (level + 1 == var_count) {
            f(assignment);
            ++cursor[level];
        } else {
            used[std::size_t(candidate)] = 1;
            ++level;
        }
    }
}

}  // namespace

std::vector<GroundRule> instantiate(const RuleSet& rules, const std::vector<Referent>& universe) {
    GroundProgram program(rules, universe);
    return program.export_rules();
}

GroundProgram::GroundProgram(const RuleSet& rules, const std::vector<Referent>& universe)
    : rule_set_(std::make_shared<RuleSet>(rules)) {
    const std::size_t n = universe.size();

    // Slot ranking: instance -> type_offset + mixed-radix rank of its
    // referent indices. Slots map lazily to dense ids.
    std::unordered_map<std::string, int> referent_index;
    for (std::size_t i = 0; i < n; ++i) referent_index.emplace(universe[i].id, int(i));

    std::unordered_map<std::string, std::size_t> type_offset;
    std::size_t total_slots = 0;
    for (const InfoType& type : rules.types.types()) {
        type_offset.emplace(type.name, total_slots);
        std::size_t span = 1;
        for (int a = 0; a < type.arity; ++a) span *= std::max<std::size_t>(n, 1);
        total_slots += span;
    }
    std::vector<int> slot_to_id(total_slots, -1);

    auto intern_slot = [&](const std::string& type, std::size_t offset,
                           const std::vector<int>& refs) {
        std::size_t rank = 0;
        for (int r : refs) rank = rank * n + std::size_t(r);
        int& id = slot_to_id[offset + rank];
        if (id < 0) {
            id = int(instances_.size());
            Instance instance;
            instance.type = type;
            for (int r : refs) instance.referents.push_back(universe[std::size_t(r)].id);
            ids_.emplace(canonical_key(instance), id);
            instances_.push_back(std::move(instance));
        }
        return id;
    };

    for (std::size_t rule_idx = 0; rule_idx < rules.rules.size(); ++rule_idx) {
        const Rule& rule = rules.rules[rule_idx];
        RuleShape shape = shape_of(rule);
        std::vector<int> atom_refs;
        each_injective_assignment(shape.vars.size(), n, [&](const std::vector<int>& assignment) {
            GRule ground;
            ground.rule_index = int(rule_idx);
            ground.offset = rule.rhs_offset;
            for (std::size_t t = 0; t < rule.lhs.size(); ++t) {
                atom_refs.clear();
                for (int v : shape.lhs_slots[t]) atom_refs.push_back(assignment[std::size_t(v)]);
                ground.lhs.push_back(intern_slot(rule.lhs[t].pattern.type,
                                                 type_offset.at(rule.lhs[t].pattern.type), atom_refs));
                ground.coeffs.push_back(rule.lhs[t].coeff);
            }
            atom_refs.clear();
            for (int v : shape.rhs_slots) atom_refs.push_back(assignment[std::size_t(v)]);
            ground.rhs = intern_slot(rule.rhs.type, type_offset.at(rule.rhs.type), atom_refs);
            for (int premise : ground.lhs)
                if (premise == ground.rhs) return;  // degenerate instantiation
            rules_.push_back(std::move(ground));
        });
    }

    by_premise_.resize(instances_.size());
    for (std::size_t g = 0; g < rules_.size(); ++g)
        for (int premise : rules_[g].lhs) by_premise_[std::size_t(premise)].push_back(int(g));
}

int GroundProgram::id_of(const Instance& instance) const {
    auto it = ids_.find(canonical_key(instance));
    return it == ids_.end() ? -1 : it->second;
}

std::vector<GroundRule> GroundProgram::export_rules() const {
    std::vector<GroundRule> out;
    out.reserve(rules_.size());
    for (const GRule& g : rules_) {
        GroundRule rule;
        rule.rule_index = g.rule_index;
        rule.offset = g.offset;
        rule.coeffs = g.coeffs;
        rule.rhs = instances_[std::size_t(g.rhs)];
        for (int premise : g.lhs) rule.lhs.push_back(instances_[std::size_t(premise)]);
        out.push_back(std::move(rule));
    }
    return out;
}

InstanceSet GroundProgram::closure(const InstanceSet& seed) const {
    require_saturated(*rule_set_);
    InstanceSet result = seed;  // unknown instances stay inert members
    std::vector<char> in_set(instances_.size(), 0);
    std::vector<int> queue;
    for (const Instance& instance : seed) {
        int id = id_of(instance);
        if (id >= 0 && !in_set[std::size_t(id)]) {
            in_set[std::size_t(id)] = 1;
            queue.push_back(id);
        }
    }
    std::vector<int> need(rules_.size());
    for (std::size_t g = 0; g < rules_.size(); ++g) need[g] = int(rules_[g].lhs.size());

    for (std::size_t head = 0; head < queue.size(); ++head) {
        int id = queue[head];
        for (int g : by_premise_[std::size_t(id)]) {
            if (--need[std::size_t(g)] == 0) {
                int rhs = rules_[std::size_t(g)].rhs;
                if (!in_set[std::size_t(rhs)]) {
                    in_set[std::size_t(rhs)] = 1;
                    queue.push_back(rhs);
                }
            }
        }
    }
    for (int id : queue) result.insert(instances_[std::size_t(id)]);
    return result;
}

bool GroundProgram::infers(const InstanceSet& seed, const Instance& goal) const {
    if (seed.count(goal)) return true;
    return closure(seed).count(goal) > 0;
}

InstanceSet closure(const InstanceSet& s, const RuleSet& rules, const std::vector<Referent>& universe) {
    require_saturated(rules);
    GroundProgram program(rules, universe);
    return program.closure(s);
}

bool infers(const InstanceSet& s, const Instance& goal, const RuleSet& rules,
            const std::vector<Referent>& universe) {
    require_saturated(rules);
    GroundProgram program(rules, universe);
    return program.infers(s, goal);
}

}  // namespace synergy
