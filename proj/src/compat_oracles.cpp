#include <algorithm>

#include "synergy/compat.hpp"
#include "synergy/detail/bitset.hpp"

namespace synergy {

namespace {

Witness overlap_witness(const MtmrSetting& setting, const Overlap& overlap) {
    Witness witness;
    witness.kind = WitnessKind::shared_instance;
    witness.instance = overlap.instance;
    witness.task_a = overlap.task_a;
    witness.task_b = overlap.task_b;
    for (const ConstraintSet& task : setting.tasks) {
        if (task.task_id == overlap.task_a) witness.s1 = task.instances();
        if (task.task_id == overlap.task_b) witness.s2 = task.instances();
    }
    return witness;
}

}  // namespace

CompatVerdict oracle_theorem1(const MtmrSetting& setting, const RuleSet& rules, int max_instances) {
    require_saturated(rules);
    if (auto overlap = detect_overlap(setting))
        return CompatVerdict{false, overlap_witness(setting, *overlap), 0};

    InstanceSet pinned_set = setting.all_instances();
    std::vector<Instance> pinned(pinned_set.begin(), pinned_set.end());
    const std::size_t n = pinned.size();
    if (int(n) > max_instances)
        throw std::runtime_error("theorem1 oracle: " + std::to_string(n) +
                                 " pinned instances exceed the guard of " +
                                 std::to_string(max_instances));
    if (n == 0) return CompatVerdict{true, std::nullopt, 0};

    GroundProgram program(rules, setting.referent_universe);

    // Everything any subset of the pins can derive lives inside the
    // closure of the full pin set; restrict the program to those atoms.
    InstanceSet full_closure = program.closure(pinned_set);
    std::vector<Instance> atoms(full_closure.begin(), full_closure.end());
    std::unordered_map<std::string, int> local_of;
    for (std::size_t i = 0; i < atoms.size(); ++i) local_of.emplace(canonical_key(atoms[i]), int(i));

    struct LocalRule {
        std::vector<int> lhs;
        int rhs;
    };
    std::vector<LocalRule> local_rules;
    std::vector<std::vector<int>> by_premise(atoms.size());
    for (const GroundProgram::GRule& rule : program.rules()) {
        LocalRule local;
        bool inside = true;
        for (int premise : rule.lhs) {
            auto it = local_of.find(canonical_key(program.instance(premise)));
            if (it == local_of.end()) {
                inside = false;
                break;
            }
            local.lhs.push_back(it->second);
        }
        if (!inside) continue;
        auto it = local_of.find(canonical_key(program.instance(rule.rhs)));
        if (it == local_of.end()) continue;
        local.rhs = it->second;
        int id = int(local_rules.size());
        for (int premise : local.lhs) by_premise[std::size_t(premise)].push_back(id);
        local_rules.push_back(std::move(local));
    }

    std::vector<int> pin_local(n);
    for (std::size_t i = 0; i < n; ++i) pin_local[i] = local_of.at(canonical_key(pinned[i]));

    // Closure of every pin subset, as bitsets over the restricted atoms.
    const std::size_t mask_count = std::size_t(1) << n;
    std::vector<detail::DynBitset> closures(mask_count);
    closures[0] = detail::DynBitset(atoms.size());
    std::vector<int> need(local_rules.size());
    std::vector<int> queue;
    for (std::size_t mask = 1; mask < mask_count; ++mask) {
        std::size_t rest = mask & (mask - 1);
        detail::DynBitset state = closures[rest];
        std::size_t new_bit = 0;
        while (!((mask >> new_bit) & 1)) ++new_bit;

        for (std::size_t g = 0; g < local_rules.size(); ++g)
            need[g] = int(local_rules[g].lhs.size());
        queue.clear();
        state.for_each([&](std::size_t atom) { queue.push_back(int(atom)); });
        int added = pin_local[new_bit];
        if (!state.test(std::size_t(added))) {
            state.set(std::size_t(added));
            queue.push_back(added);
        }
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (int g : by_premise[std::size_t(queue[head])]) {
                if (--need[std::size_t(g)] == 0) {
                    int rhs = local_rules[std::size_t(g)].rhs;
                    if (!state.test(std::size_t(rhs))) {
                        state.set(std::size_t(rhs));
                        queue.push_back(rhs);
                    }
                }
            }
        }
        closures[mask] = std::move(state);
    }

    // Incompatible iff some F is inferred by two subsets whose
    // intersection does not infer it.
    for (std::size_t s1 = 0; s1 < mask_count; ++s1) {
        for (std::size_t s2 = s1 + 1; s2 < mask_count; ++s2) {
            long hit = detail::DynBitset::first_in_and_not(closures[s1], closures[s2],
                                                           closures[s1 & s2]);
            if (hit < 0) continue;
            Witness witness;
            witness.kind = WitnessKind::divergent_inference;
            witness.instance = atoms[std::size_t(hit)];
            for (std::size_t i = 0; i < n; ++i) {
                if ((s1 >> i) & 1) witness.s1.insert(pinned[i]);
                if ((s2 >> i) & 1) witness.s2.insert(pinned[i]);
            }
            return CompatVerdict{false, std::move(witness), 0};
        }
    }
    return CompatVerdict{true, std::nullopt, 0};
}

}  // namespace synergy
