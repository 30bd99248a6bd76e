#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "synergy/info_model.hpp"

namespace synergy {

// Pattern-level atom: a type applied to variables, e.g. R(Y,X).
struct RulePattern {
    std::string type;
    std::vector<std::string> slots;

    bool operator==(const RulePattern&) const = default;
};

struct RuleTerm {
    double coeff = 1.0;
    RulePattern pattern;
};

// Linear inference rule: rhs = sum(coeff_i * lhs_i) + rhs_offset.
// Every rhs variable appears on the left, no coefficient is zero and
// no two lhs patterns coincide.
struct Rule {
    std::vector<RuleTerm> lhs;
    RulePattern rhs;
    double rhs_offset = 0.0;
};

struct RuleSet {
    TypeTable types;
    std::vector<Rule> rules;
    bool saturated = false;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& message);
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

// Parses the rule-file grammar:
//   type declarations  "type G/1 dim 2"
//   rules              "G(Y) <- 1*G(X) + 1*R(Y,X)"
// '#' starts a comment. Returns an unsaturated set.
RuleSet parse_rules(std::string_view text);

// The rule file shipped with the library (types G, R, C2, C3, M and the
// planar position rules). Kept in sync with data/rules.default.
const std::string& default_rules_text();
RuleSet default_rules();

// Adds, for every rule and every lhs term, the variant solved for that
// term; deduplicates rules equal up to variable renaming. Idempotent.
RuleSet saturate(const RuleSet& rules);

// Canonical serialization up to variable renaming and lhs order; equal
// strings identify equal rules.
std::string rule_signature(const Rule& rule);
std::string to_string(const Rule& rule);

// Rule instantiated over concrete referents. lhs instances are distinct
// and never contain the rhs.
struct GroundRule {
    std::vector<Instance> lhs;
    std::vector<double> coeffs;  // aligned with lhs
    Instance rhs;
    double offset = 0.0;
    int rule_index = -1;  // position in the originating RuleSet
};

// All injective substitutions of rule variables to universe referents,
// in deterministic (rule index, substitution) order.
std::vector<GroundRule> instantiate(const RuleSet& rules, const std::vector<Referent>& universe);

// Interned ground program over a fixed universe; reused across closure
// queries. Instance ids index every instance mentioned by a ground rule.
class GroundProgram {
public:
    GroundProgram(const RuleSet& rules, const std::vector<Referent>& universe);

    struct GRule {
        std::vector<int> lhs;
        std::vector<double> coeffs;
        int rhs = -1;
        double offset = 0.0;
        int rule_index = -1;
    };

    int id_of(const Instance& instance) const;  // -1 when unknown
    const Instance& instance(int id) const { return instances_[std::size_t(id)]; }
    int num_instances() const { return int(instances_.size()); }
    const std::vector<GRule>& rules() const { return rules_; }
    // rule ids that use the given instance id as a premise
    const std::vector<int>& rules_with_premise(int id) const { return by_premise_[std::size_t(id)]; }
    const RuleSet& rule_set() const { return *rule_set_; }

    std::vector<GroundRule> export_rules() const;

    // Least fixed point of the program over S, as instance ids plus any
    // members of S the program does not know about.
    InstanceSet closure(const InstanceSet& seed) const;
    bool infers(const InstanceSet& seed, const Instance& goal) const;

private:
    std::shared_ptr<const RuleSet> rule_set_;
    std::vector<Instance> instances_;
    std::unordered_map<std::string, int> ids_;
    std::vector<GRule> rules_;
    std::vector<std::vector<int>> by_premise_;

    int intern(const Instance& instance);
};

// Convenience forms; they build a GroundProgram per call. All require a
// saturated rule set and throw std::invalid_argument otherwise.
InstanceSet closure(const InstanceSet& s, const RuleSet& rules, const std::vector<Referent>& universe);
bool infers(const InstanceSet& s, const Instance& goal, const RuleSet& rules,
            const std::vector<Referent>& universe);

void require_saturated(const RuleSet& rules);

}  // namespace synergy
