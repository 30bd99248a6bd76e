#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "synergy/compat.hpp"
#include "synergy/detail/rng.hpp"

namespace synergy {

CompatVerdict oracle_numeric(const MtmrSetting& setting, const RuleSet& rules, std::uint64_t seed,
                             double tol) {
    require_saturated(rules);

    int dim = 0;
    for (const InfoType& type : rules.types.types()) {
        if (dim == 0) dim = type.value_dim;
        if (type.value_dim != dim)
            throw std::invalid_argument("numeric oracle requires a uniform value dimension");
    }
    if (dim == 0) dim = 1;

    GroundProgram program(rules, setting.referent_universe);
    InstanceSet pins = setting.all_instances();
    InstanceSet closure = program.closure(pins);
    std::vector<Instance> atoms(closure.begin(), closure.end());
    std::unordered_map<std::string, int> local_of;
    for (std::size_t i = 0; i < atoms.size(); ++i) local_of.emplace(canonical_key(atoms[i]), int(i));
    if (atoms.empty()) return CompatVerdict{true, std::nullopt, 0};

    std::vector<Eigen::Triplet<double>> entries;
    std::vector<std::vector<double>> rhs(static_cast<std::size_t>(dim));
    int rows = 0;
    auto new_row = [&]() {
        for (auto& component : rhs) component.push_back(0.0);
        return rows++;
    };

    // One equation per ground rule whose atoms all live in the closure:
    // sum(c_j * x_lhs_j) - x_rhs = -offset.
    for (const GroundProgram::GRule& rule : program.rules()) {
        bool inside = true;
        std::vector<int> lhs_local;
        for (int premise : rule.lhs) {
            auto it = local_of.find(canonical_key(program.instance(premise)));
            if (it == local_of.end()) {
                inside = false;
                break;
            }
            lhs_local.push_back(it->second);
        }
        if (!inside) continue;
        auto rhs_it = local_of.find(canonical_key(program.instance(rule.rhs)));
        if (rhs_it == local_of.end()) continue;
        int row = new_row();
        for (std::size_t j = 0; j < lhs_local.size(); ++j)
            entries.emplace_back(row, lhs_local[j], rule.coeffs[j]);
        entries.emplace_back(row, rhs_it->second, -1.0);
        for (int c = 0; c < dim; ++c) rhs[std::size_t(c)][std::size_t(row)] = -rule.offset;
    }

    // One pin per constraint, valued independently; tasks pinning the
    // same instance therefore pull it toward different values.
    detail::Rng rng(seed);
    for (const ConstraintSet& task : setting.tasks) {
        for (const Constraint& constraint : task.constraints) {
            int row = new_row();
            entries.emplace_back(row, local_of.at(canonical_key(constraint.instance)), 1.0);
            for (int c = 0; c < dim; ++c)
                rhs[std::size_t(c)][std::size_t(row)] = rng.real_in(-100.0, 100.0);
        }
    }

    Eigen::SparseMatrix<double> a(rows, int(atoms.size()));
    a.setFromTriplets(entries.begin(), entries.end());
    Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>> solver;
    solver.setTolerance(1e-12);
    solver.setMaxIterations(Eigen::Index(50 * atoms.size() + 200));
    solver.compute(a);

    double max_residual = 0.0;
    for (int c = 0; c < dim; ++c) {
        Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs[std::size_t(c)].data(), rows);
        Eigen::VectorXd x = solver.solve(b);
        max_residual = std::max(max_residual, (a * x - b).cwiseAbs().maxCoeff());
    }
    return CompatVerdict{max_residual < tol, std::nullopt, 0};
}

}  // namespace synergy
