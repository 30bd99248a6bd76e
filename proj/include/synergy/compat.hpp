#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "synergy/detail/bitset.hpp"
#include "synergy/info_model.hpp"
#include "synergy/rules.hpp"

namespace synergy {

// Node of the leveled inference graph. Leaves sit at level 0 with their
// own instance as footprint; derived nodes carry the union of their
// premise footprints over the leaf index.
struct GraphNode {
    Instance instance;
    int level = 0;
    std::vector<int> premises;      // node ids, empty at level 0
    detail::DynBitset footprint;    // over leaf indices
    // Footprints of later accepted derivations of the same instance;
    // kept for diagnostics and candidate-vs-candidate testing.
    std::vector<detail::DynBitset> alt_footprints;
};

struct InferenceGraph {
    std::vector<GraphNode> nodes;  // node id = index
    std::unordered_map<std::string, int> by_key;
    std::vector<std::vector<int>> levels;
    std::vector<int> frontier;     // node ids added at the last level
    std::vector<Instance> leaves;  // leaf index -> instance

    InstanceSet footprint_instances(const detail::DynBitset& footprint) const;
};

enum class WitnessKind {
    shared_instance,      // two tasks pin the same instance outright
    divergent_inference,  // two footprints infer it, their intersection does not
};

struct Witness {
    WitnessKind kind = WitnessKind::divergent_inference;
    Instance instance;
    InstanceSet s1;
    InstanceSet s2;
    std::string task_a;  // shared_instance only
    std::string task_b;
};

struct CompatVerdict {
    bool compatible = true;
    std::optional<Witness> witness;
    int levels_built = 0;

    explicit operator bool() const { return compatible; }
};

std::string to_string(const Witness& witness);

// Scratch buffers for repeated checks against one context. Epoch
// stamps make re-initialization O(touched) instead of O(program).
// The graph build and the inner closure tests keep separate stamps.
class CheckWorkspace {
public:
    CheckWorkspace() = default;

private:
    friend class CompatContext;
    std::vector<int> node_of, node_stamp;
    std::vector<int> need, need_stamp;
    int graph_epoch = 0;
    std::vector<int> cl_need, cl_need_stamp, cl_in_stamp;
    std::vector<int> queue;
    int closure_epoch = 0;

    void prepare_graph(std::size_t rules, std::size_t instances);
    void prepare_closure(std::size_t rules, std::size_t instances);
};

// Reusable checker for a fixed (saturated rule set, universe) pair. The
// ground program is built once; individual checks only touch the rules
// reachable from their leaves. Instances in a checked setting must be
// over the context universe. Immutable after construction and safe to
// share across threads (each thread passing its own workspace).
class CompatContext {
public:
    CompatContext(const RuleSet& saturated_rules, std::vector<Referent> universe);

    CompatVerdict check(const MtmrSetting& setting) const;
    CompatVerdict check(const MtmrSetting& setting, CheckWorkspace& workspace) const;
    // Full diagnostic build: keeps going past conflicts; conflicts are
    // returned alongside the graph.
    std::pair<InferenceGraph, std::vector<Witness>> graph(const MtmrSetting& setting) const;

    const GroundProgram& program() const { return program_; }
    const std::vector<Referent>& universe() const { return universe_; }

private:
    std::vector<Referent> universe_;
    GroundProgram program_;
    std::vector<int> lhs_sizes_;

    struct LeanNode;
    struct BuildOutcome;
    BuildOutcome build(const MtmrSetting& setting, bool stop_on_conflict,
                       CheckWorkspace& workspace) const;
    bool closure_infers(const detail::DynBitset& leaf_bits, const std::vector<int>& leaf_prog_ids,
                        int target, CheckWorkspace& workspace) const;
};

// Decides compatibility with the bottom-up multi-level graph. Requires
// saturated rules; exit states:
//   compatible            – graph saturated without conflict
//   shared_instance       – overlap pre-check hit
//   divergent_inference   – duplicate arrival whose footprint
//                           intersection fails to infer the instance
CompatVerdict check_compat(const MtmrSetting& setting, const RuleSet& rules);

InferenceGraph build_graph(const MtmrSetting& setting, const RuleSet& rules);

// Brute-force check of the subset-pair condition: incompatible iff some
// F and S1, S2 within the pinned instances satisfy S1 -> F, S2 -> F and
// S1 n S2 -/-> F. Exponential; guarded by max_instances.
CompatVerdict oracle_theorem1(const MtmrSetting& setting, const RuleSet& rules,
                              int max_instances = 12);

// Pins every constraint with an independent random value, stacks one
// linear equation per ground rule over the closure plus the pins, and
// declares compatible iff the least-squares residual stays below tol.
CompatVerdict oracle_numeric(const MtmrSetting& setting, const RuleSet& rules,
                             std::uint64_t seed, double tol = 1e-6);

// DOT rendering of the leveled graph (clusters by level).
std::string graph_to_dot(const InferenceGraph& graph);

}  // namespace synergy
