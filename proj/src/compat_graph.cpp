#include <algorithm>

#include "synergy/compat.hpp"

namespace synergy {

InstanceSet InferenceGraph::footprint_instances(const detail::DynBitset& footprint) const {
    InstanceSet out;
    footprint.for_each([&](std::size_t leaf) { out.insert(leaves[leaf]); });
    return out;
}

std::string to_string(const Witness& witness) {
    std::string out;
    if (witness.kind == WitnessKind::shared_instance) {
        out += "tasks " + witness.task_a + " and " + witness.task_b +
               " both constrain " + canonical_key(witness.instance);
        return out;
    }
    auto join = [](const InstanceSet& set) {
        std::string s = "{";
        bool first = true;
        for (const Instance& i : set) {
            if (!first) s += ", ";
            s += canonical_key(i);
            first = false;
        }
        return s + "}";
    };
    out += "F = " + canonical_key(witness.instance);
    out += "; S1 = " + join(witness.s1);
    out += "; S2 = " + join(witness.s2);
    out += "; S1 and S2 both infer F, their intersection does not";
    return out;
}

void CheckWorkspace::prepare_graph(std::size_t rules, std::size_t instances) {
    if (need.size() < rules) {
        need.resize(rules, 0);
        need_stamp.resize(rules, -1);
    }
    if (node_of.size() < instances) {
        node_of.resize(instances, -1);
        node_stamp.resize(instances, -1);
    }
    ++graph_epoch;
}

void CheckWorkspace::prepare_closure(std::size_t rules, std::size_t instances) {
    if (cl_need.size() < rules) {
        cl_need.resize(rules, 0);
        cl_need_stamp.resize(rules, -1);
    }
    if (cl_in_stamp.size() < instances) cl_in_stamp.resize(instances, -1);
    ++closure_epoch;
}

CompatContext::CompatContext(const RuleSet& saturated_rules, std::vector<Referent> universe)
    : universe_(std::move(universe)), program_(saturated_rules, universe_) {
    require_saturated(saturated_rules);
    lhs_sizes_.reserve(program_.rules().size());
    for (const GroundProgram::GRule& rule : program_.rules())
        lhs_sizes_.push_back(int(rule.lhs.size()));
}

// Working node: instances referenced by ground-program id, or by leaf
// index for pinned atoms the program does not know about.
struct CompatContext::LeanNode {
    int prog_id = -1;
    int leaf_index = -1;
    int level = 0;
    std::vector<int> premises;
    detail::DynBitset footprint;
    std::vector<detail::DynBitset> alt_footprints;
};

struct CompatContext::BuildOutcome {
    std::vector<Instance> leaves;
    std::vector<LeanNode> nodes;
    std::vector<std::vector<int>> levels;
    std::vector<Witness> conflicts;

    const Instance& instance_of(const LeanNode& node, const GroundProgram& program) const {
        return node.leaf_index >= 0 ? leaves[std::size_t(node.leaf_index)]
                                    : program.instance(node.prog_id);
    }
    InstanceSet leaf_set(const detail::DynBitset& bits) const {
        InstanceSet out;
        bits.for_each([&](std::size_t leaf) { out.insert(leaves[leaf]); });
        return out;
    }
};

// Fixpoint membership test over the ground program, seeded with the
// leaves selected by leaf_bits. Stops as soon as target appears.
bool CompatContext::closure_infers(const detail::DynBitset& leaf_bits,
                                   const std::vector<int>& leaf_prog_ids, int target,
                                   CheckWorkspace& ws) const {
    ws.prepare_closure(program_.rules().size(), std::size_t(program_.num_instances()));
    const int epoch = ws.closure_epoch;
    ws.queue.clear();

    bool found = false;
    leaf_bits.for_each([&](std::size_t leaf) {
        int prog = leaf_prog_ids[leaf];
        if (prog < 0) return;
        if (prog == target) found = true;
        if (ws.cl_in_stamp[std::size_t(prog)] != epoch) {
            ws.cl_in_stamp[std::size_t(prog)] = epoch;
            ws.queue.push_back(prog);
        }
    });
    if (found) return true;

    for (std::size_t head = 0; head < ws.queue.size(); ++head) {
        for (int g : program_.rules_with_premise(ws.queue[head])) {
            std::size_t gi = std::size_t(g);
            if (ws.cl_need_stamp[gi] != epoch) {
                ws.cl_need_stamp[gi] = epoch;
                ws.cl_need[gi] = lhs_sizes_[gi];
            }
            if (--ws.cl_need[gi] != 0) continue;
            int rhs = program_.rules()[gi].rhs;
            if (rhs == target) return true;
            if (ws.cl_in_stamp[std::size_t(rhs)] != epoch) {
                ws.cl_in_stamp[std::size_t(rhs)] = epoch;
                ws.queue.push_back(rhs);
            }
        }
    }
    return false;
}

CompatContext::BuildOutcome CompatContext::build(const MtmrSetting& setting, bool stop_on_conflict,
                                                 CheckWorkspace& ws) const {
    BuildOutcome out;
    {
        InstanceSet leaf_set = setting.all_instances();
        out.leaves.assign(leaf_set.begin(), leaf_set.end());
    }
    const std::size_t leaf_count = out.leaves.size();
    std::vector<int> leaf_prog_ids(leaf_count);
    for (std::size_t i = 0; i < leaf_count; ++i) leaf_prog_ids[i] = program_.id_of(out.leaves[i]);

    ws.prepare_graph(program_.rules().size(), std::size_t(program_.num_instances()));
    const int epoch = ws.graph_epoch;
    auto node_at = [&](int prog) {
        return ws.node_stamp[std::size_t(prog)] == epoch ? ws.node_of[std::size_t(prog)] : -1;
    };
    auto need_of = [&](int g) -> int& {
        std::size_t gi = std::size_t(g);
        if (ws.need_stamp[gi] != epoch) {
            ws.need_stamp[gi] = epoch;
            ws.need[gi] = lhs_sizes_[gi];
        }
        return ws.need[gi];
    };

    std::vector<int> eligible;
    auto add_node = [&](int prog_id, int leaf_index, int level, std::vector<int> premises,
                        detail::DynBitset footprint) {
        int id = int(out.nodes.size());
        if (prog_id >= 0) {
            ws.node_stamp[std::size_t(prog_id)] = epoch;
            ws.node_of[std::size_t(prog_id)] = id;
            for (int g : program_.rules_with_premise(prog_id))
                if (--need_of(g) == 0) eligible.push_back(g);
        }
        out.nodes.push_back(LeanNode{prog_id, leaf_index, level, std::move(premises),
                                     std::move(footprint), {}});
        return id;
    };

    out.levels.emplace_back();
    for (std::size_t leaf = 0; leaf < leaf_count; ++leaf) {
        detail::DynBitset fp(leaf_count);
        fp.set(leaf);
        out.levels[0].push_back(add_node(leaf_prog_ids[leaf], int(leaf), 0, {}, std::move(fp)));
    }

    // Subset-pair test against one recorded footprint. When one
    // footprint contains the other the intersection is itself a full
    // footprint of the instance, which infers it by construction.
    auto conflicts_with = [&](const detail::DynBitset& recorded, const detail::DynBitset& candidate,
                              int target_prog) {
        if (recorded.contains(candidate) || candidate.contains(recorded)) return false;
        detail::DynBitset common = detail::DynBitset::intersection(recorded, candidate);
        return !closure_infers(common, leaf_prog_ids, target_prog, ws);
    };

    int level = 1;
    while (!eligible.empty()) {
        std::sort(eligible.begin(), eligible.end());
        std::vector<int> firing;
        firing.swap(eligible);

        std::vector<int> created;
        for (int g : firing) {
            const GroundProgram::GRule& rule = program_.rules()[std::size_t(g)];
            std::vector<int> premises;
            detail::DynBitset candidate(leaf_count);
            for (int premise : rule.lhs) {
                int node = node_at(premise);
                premises.push_back(node);
                candidate |= out.nodes[std::size_t(node)].footprint;
            }
            int existing = node_at(rule.rhs);
            if (existing < 0) {
                created.push_back(
                    add_node(rule.rhs, -1, level, std::move(premises), std::move(candidate)));
                continue;
            }

            LeanNode& node = out.nodes[std::size_t(existing)];
            const detail::DynBitset* clash = nullptr;
            if (conflicts_with(node.footprint, candidate, rule.rhs)) {
                clash = &node.footprint;
            } else {
                for (const detail::DynBitset& alt : node.alt_footprints) {
                    if (conflicts_with(alt, candidate, rule.rhs)) {
                        clash = &alt;
                        break;
                    }
                }
            }
            if (clash) {
                Witness witness;
                witness.kind = WitnessKind::divergent_inference;
                witness.instance = out.instance_of(node, program_);
                witness.s1 = out.leaf_set(*clash);
                witness.s2 = out.leaf_set(candidate);
                out.conflicts.push_back(std::move(witness));
                if (stop_on_conflict) return out;
            } else {
                // A footprint covering an already recorded one cannot
                // catch a conflict the recorded one would miss; keep
                // only incomparable arrivals.
                bool redundant = candidate.contains(node.footprint);
                for (const detail::DynBitset& alt : node.alt_footprints) {
                    if (redundant) break;
                    redundant = candidate.contains(alt);
                }
                if (!redundant) node.alt_footprints.push_back(std::move(candidate));
            }
        }
        if (!created.empty()) {
            out.levels.push_back(std::move(created));
            ++level;
        }
    }
    return out;
}

namespace {

Witness overlap_witness_for(const MtmrSetting& setting, const Overlap& overlap) {
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

CompatVerdict CompatContext::check(const MtmrSetting& setting) const {
    CheckWorkspace workspace;
    return check(setting, workspace);
}

CompatVerdict CompatContext::check(const MtmrSetting& setting, CheckWorkspace& workspace) const {
    if (auto overlap = detect_overlap(setting))
        return CompatVerdict{false, overlap_witness_for(setting, *overlap), 0};
    BuildOutcome outcome = build(setting, /*stop_on_conflict=*/true, workspace);
    if (!outcome.conflicts.empty())
        return CompatVerdict{false, std::move(outcome.conflicts.front()), int(outcome.levels.size())};
    return CompatVerdict{true, std::nullopt, int(outcome.levels.size())};
}

std::pair<InferenceGraph, std::vector<Witness>> CompatContext::graph(const MtmrSetting& setting) const {
    CheckWorkspace workspace;
    BuildOutcome outcome = build(setting, /*stop_on_conflict=*/false, workspace);

    InferenceGraph graph;
    graph.leaves = std::move(outcome.leaves);
    graph.levels = std::move(outcome.levels);
    graph.nodes.reserve(outcome.nodes.size());
    for (const LeanNode& lean : outcome.nodes) {
        Instance instance = lean.leaf_index >= 0 ? graph.leaves[std::size_t(lean.leaf_index)]
                                                 : program_.instance(lean.prog_id);
        graph.by_key.emplace(canonical_key(instance), int(graph.nodes.size()));
        graph.nodes.push_back(GraphNode{std::move(instance), lean.level, lean.premises,
                                        lean.footprint, lean.alt_footprints});
    }
    graph.frontier = graph.levels.back();
    return {std::move(graph), std::move(outcome.conflicts)};
}

CompatVerdict check_compat(const MtmrSetting& setting, const RuleSet& rules) {
    CompatContext context(rules, setting.referent_universe);
    return context.check(setting);
}

InferenceGraph build_graph(const MtmrSetting& setting, const RuleSet& rules) {
    CompatContext context(rules, setting.referent_universe);
    return context.graph(setting).first;
}

std::string graph_to_dot(const InferenceGraph& graph) {
    std::string out = "digraph inference {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t level = 0; level < graph.levels.size(); ++level) {
        out += "  { rank=same;";
        for (int id : graph.levels[level])
            out += " n" + std::to_string(id) + ";";
        out += " }\n";
    }
    for (std::size_t id = 0; id < graph.nodes.size(); ++id) {
        const GraphNode& node = graph.nodes[id];
        out += "  n" + std::to_string(id) + " [label=\"" + canonical_key(node.instance) +
               "\\nlevel " + std::to_string(node.level) + "\"];\n";
        for (int premise : node.premises)
            out += "  n" + std::to_string(premise) + " -> n" + std::to_string(id) + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace synergy
