#include "synergy/solver.hpp"

#include <Eigen/Dense>
#include <unordered_map>
#include <unordered_set>

namespace synergy {

namespace {

// position weights of the conventional value functionals
std::vector<std::pair<int, double>> convention_weights(const std::string& type, int arity) {
    if (type == "G" && arity == 1) return {{0, 1.0}};
    if (type == "R" && arity == 2) return {{0, 1.0}, {1, -1.0}};
    if (type == "C2" && arity == 2) return {{0, 0.5}, {1, 0.5}};
    if (type == "C3" && arity == 3) return {{0, 1.0 / 3.0}, {1, 1.0 / 3.0}, {2, 1.0 / 3.0}};
    if (type == "M" && arity == 3) return {{2, 1.0}, {0, -0.5}, {1, -0.5}};
    return {};
}

}  // namespace

bool has_value_convention(const std::string& type_name, int arity) {
    return !convention_weights(type_name, arity).empty();
}

SolveResult solve_configuration(const std::vector<Constraint>& constraints,
                                const std::map<std::string, Vec2>& fixed,
                                const RuleSet& saturated_rules,
                                const std::vector<Referent>& universe, double tol) {
    require_saturated(saturated_rules);

    std::unordered_map<std::string, const Referent*> by_id;
    for (const Referent& r : universe) by_id.emplace(r.id, &r);

    InstanceSet pins;
    for (const Constraint& constraint : constraints) {
        if (!constraint.value)
            throw std::invalid_argument("constraint " + canonical_key(constraint.instance) +
                                        " is missing a value");
        const InfoType& type = saturated_rules.types.at(constraint.instance.type);
        if (int(constraint.value->size()) != type.value_dim)
            throw std::invalid_argument("constraint " + canonical_key(constraint.instance) +
                                        ": value has wrong dimension");
        if (type.value_dim != 2)
            throw std::invalid_argument("configuration solving is planar (dim 2); type " + type.name +
                                        " has dim " + std::to_string(type.value_dim));
        for (const std::string& id : constraint.instance.referents) {
            auto it = by_id.find(id);
            if (it == by_id.end()) throw std::invalid_argument("unknown referent: " + id);
            if (!it->second->controllable() && !fixed.count(id))
                throw std::invalid_argument("uncontrollable referent " + id +
                                            " needs a fixed position");
        }
        pins.insert(constraint.instance);
    }

    GroundProgram program(saturated_rules, universe);
    InstanceSet closure = program.closure(pins);
    std::vector<Instance> atoms(closure.begin(), closure.end());
    std::unordered_map<std::string, int> atom_col;
    for (std::size_t i = 0; i < atoms.size(); ++i) atom_col.emplace(canonical_key(atoms[i]), int(i));

    // Position columns for unfixed referents named by closure atoms.
    std::unordered_map<std::string, int> pos_col;
    std::vector<std::string> pos_ids;
    for (const Instance& atom : atoms) {
        for (const std::string& id : atom.referents) {
            if (fixed.count(id) || pos_col.count(id)) continue;
            pos_col.emplace(id, int(atoms.size() + pos_ids.size()));
            pos_ids.push_back(id);
        }
    }
    const int cols = int(atoms.size() + pos_ids.size());

    struct Row {
        std::vector<std::pair<int, double>> entries;
        double rhs[2] = {0.0, 0.0};
    };
    std::vector<Row> system;

    // rule equations over the closure
    for (const GroundProgram::GRule& rule : program.rules()) {
        Row row;
        bool inside = true;
        for (std::size_t j = 0; j < rule.lhs.size(); ++j) {
            auto it = atom_col.find(canonical_key(program.instance(rule.lhs[j])));
            if (it == atom_col.end()) {
                inside = false;
                break;
            }
            row.entries.emplace_back(it->second, rule.coeffs[j]);
        }
        if (!inside) continue;
        auto it = atom_col.find(canonical_key(program.instance(rule.rhs)));
        if (it == atom_col.end()) continue;
        row.entries.emplace_back(it->second, -1.0);
        row.rhs[0] = row.rhs[1] = -rule.offset;
        system.push_back(std::move(row));
    }

    // constraint pins
    for (const Constraint& constraint : constraints) {
        Row row;
        row.entries.emplace_back(atom_col.at(canonical_key(constraint.instance)), 1.0);
        row.rhs[0] = (*constraint.value)[0];
        row.rhs[1] = (*constraint.value)[1];
        system.push_back(std::move(row));
    }

    // value conventions: atom value minus weighted positions is zero;
    // fixed positions move to the right-hand side
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Instance& atom = atoms[i];
        auto weights = convention_weights(atom.type, int(atom.referents.size()));
        if (weights.empty()) continue;
        Row row;
        row.entries.emplace_back(int(i), 1.0);
        for (auto [slot, w] : weights) {
            const std::string& id = atom.referents[std::size_t(slot)];
            auto fixed_it = fixed.find(id);
            if (fixed_it != fixed.end()) {
                row.rhs[0] += w * fixed_it->second.x;
                row.rhs[1] += w * fixed_it->second.y;
            } else {
                row.entries.emplace_back(pos_col.at(id), -w);
            }
        }
        system.push_back(std::move(row));
    }

    SolveResult result;
    result.consistent = true;

    if (cols > 0 && !system.empty()) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(long(system.size()), cols);
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(long(system.size()), 2);
        for (std::size_t r = 0; r < system.size(); ++r) {
            for (auto [col, w] : system[r].entries) a(long(r), col) += w;
            b(long(r), 0) = system[r].rhs[0];
            b(long(r), 1) = system[r].rhs[1];
        }
        // minimum-norm least-squares solution
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
        Eigen::MatrixXd x = cod.solve(b);
        Eigen::MatrixXd residual = a * x - b;
        result.max_residual = residual.cwiseAbs().maxCoeff();
        result.consistent = result.max_residual < tol;
        for (std::size_t p = 0; p < pos_ids.size(); ++p) {
            long col = long(atoms.size() + p);
            result.positions[pos_ids[p]] = Vec2{x(col, 0), x(col, 1)};
        }
    }

    for (const auto& [id, pos] : fixed) result.positions[id] = pos;
    for (const Referent& r : universe)
        if (!result.positions.count(r.id) && r.controllable()) result.positions[r.id] = Vec2{0.0, 0.0};
    return result;
}

}  // namespace synergy
