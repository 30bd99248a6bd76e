#pragma once

#include <map>
#include <string>
#include <vector>

#include "synergy/info_model.hpp"
#include "synergy/rules.hpp"

namespace synergy {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    bool operator==(const Vec2&) const = default;
};

struct SolveResult {
    bool consistent = false;
    double max_residual = 0.0;
    std::map<std::string, Vec2> positions;  // every referent, fixed included
};

// Value conventions tying instance values to referent positions:
//   G(x)      = pos(x)
//   R(x,y)    = pos(x) - pos(y)
//   C2(a,b)   = (pos(a) + pos(b)) / 2
//   C3(a,b,c) = (pos(a) + pos(b) + pos(c)) / 3
//   M(a,b,c)  = pos(c) - (pos(a) + pos(b)) / 2
// Types outside this table get a free value variable bound only by rule
// equations.
bool has_value_convention(const std::string& type_name, int arity);

// Stacks rule equations over the closure, constraint pins, convention
// equations and fixed-referent pins, then solves for the unfixed
// controllable positions by least squares (minimum-norm solution when
// under-determined). Consistent iff the max componentwise residual is
// below tol. Every constraint must carry a value; every uncontrollable
// referent must be fixed.
SolveResult solve_configuration(const std::vector<Constraint>& constraints,
                                const std::map<std::string, Vec2>& fixed,
                                const RuleSet& saturated_rules,
                                const std::vector<Referent>& universe,
                                double tol = 1e-6);

}  // namespace synergy
