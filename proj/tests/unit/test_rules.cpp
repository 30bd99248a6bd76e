#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "synergy/detail/rng.hpp"
#include "synergy/rules.hpp"

using namespace synergy;
using namespace synergy::testing;

namespace {

Rule parse_single(const std::string& line) {
    std::string text = "type G/1 dim 2\ntype R/2 dim 2\ntype C2/2 dim 2\ntype C3/3 dim 2\ntype M/3 dim 2\n" + line + "\n";
    RuleSet set = parse_rules(text);
    REQUIRE(set.rules.size() == 1);
    return set.rules[0];
}

bool contains_rule(const RuleSet& set, const Rule& wanted) {
    std::string signature = rule_signature(wanted);
    for (const Rule& rule : set.rules)
        if (rule_signature(rule) == signature) return true;
    return false;
}

}  // namespace

TEST_CASE("parse_rules reads the composition rule") {
    Rule rule = parse_single("G(Y) <- 1*G(X) + 1*R(Y,X)");
    CHECK(rule.rhs == RulePattern{"G", {"Y"}});
    REQUIRE(rule.lhs.size() == 2);
    CHECK(rule.lhs[0].coeff == 1.0);
    CHECK(rule.lhs[0].pattern == RulePattern{"G", {"X"}});
    CHECK(rule.lhs[1].coeff == 1.0);
    CHECK(rule.lhs[1].pattern == RulePattern{"R", {"Y", "X"}});
}

TEST_CASE("parse_rules reads a single-premise antisymmetry rule") {
    Rule rule = parse_single("R(X,Y) <- -1*R(Y,X)");
    CHECK(rule.rhs == RulePattern{"R", {"X", "Y"}});
    REQUIRE(rule.lhs.size() == 1);
    CHECK(rule.lhs[0].coeff == -1.0);
    CHECK(rule.lhs[0].pattern == RulePattern{"R", {"Y", "X"}});
}

TEST_CASE("parse_rules rejects zero coefficients") {
    CHECK_THROWS_AS(parse_single("G(Y) <- 1*G(X) + 0*R(Y,X)"), ParseError);
}

TEST_CASE("parse_rules reports positions and specific failures") {
    try {
        parse_rules("type G/1 dim 2\nG(Y) <- 1*Q(X)\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("unknown type") != std::string::npos);
    }
    // arity mismatch
    CHECK_THROWS_AS(parse_single("G(Y) <- 1*R(X)"), ParseError);
    // free head variable
    CHECK_THROWS_AS(parse_single("G(Y) <- 1*G(X)"), ParseError);
    // duplicate lhs pattern
    CHECK_THROWS_AS(parse_single("G(Y) <- 1*R(Y,X) + 2*R(Y,X)"), ParseError);
    // junk
    CHECK_THROWS_AS(parse_rules("type G/1 dim\n"), ParseError);
    CHECK_THROWS_AS(parse_rules("G(Y) <= 1*G(X)\n"), ParseError);
}

TEST_CASE("saturate solves the composition rule for each premise") {
    std::string text = "type G/1 dim 2\ntype R/2 dim 2\nG(Y) <- 1*G(X) + 1*R(Y,X)\n";
    RuleSet saturated = saturate(parse_rules(text));
    CHECK(saturated.saturated);
    CHECK(saturated.rules.size() == 3);

    // R(Y,X) <- 1*G(Y) - 1*G(X)
    Rule solved_r;
    solved_r.rhs = RulePattern{"R", {"Y", "X"}};
    solved_r.lhs = {RuleTerm{1.0, RulePattern{"G", {"Y"}}}, RuleTerm{-1.0, RulePattern{"G", {"X"}}}};
    CHECK(contains_rule(saturated, solved_r));

    // G(X) <- 1*G(Y) - 1*R(Y,X)
    Rule solved_g;
    solved_g.rhs = RulePattern{"G", {"X"}};
    solved_g.lhs = {RuleTerm{1.0, RulePattern{"G", {"Y"}}}, RuleTerm{-1.0, RulePattern{"R", {"Y", "X"}}}};
    CHECK(contains_rule(saturated, solved_g));
}

TEST_CASE("saturating the antisymmetry rule adds nothing new") {
    std::string text = "type R/2 dim 2\nR(X,Y) <- -1*R(Y,X)\n";
    RuleSet saturated = saturate(parse_rules(text));
    CHECK(saturated.rules.size() == 1);
}

TEST_CASE("saturate is idempotent") {
    RuleSet once = saturate(default_rules());
    RuleSet twice = saturate(once);
    REQUIRE(once.rules.size() == twice.rules.size());
    for (std::size_t i = 0; i < once.rules.size(); ++i)
        CHECK(rule_signature(once.rules[i]) == rule_signature(twice.rules[i]));
}

TEST_CASE("the default rule set saturates to seventeen rules") {
    RuleSet rules = default_rules();
    CHECK(rules.rules.size() == 6);
    CHECK(rules.types.types().size() == 5);
    CHECK(saturate(rules).rules.size() == 17);
}

TEST_CASE("the shipped rule file matches the embedded default") {
    std::ifstream in(std::string(SYNERGY_DATA_DIR) + "/rules.default");
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == default_rules_text());
}

TEST_CASE("instantiate enumerates injective substitutions") {
    std::vector<Referent> universe = vehicles(2);

    RuleSet antisym = parse_rules("type R/2 dim 2\nR(X,Y) <- -1*R(Y,X)\n");
    std::vector<GroundRule> ground = instantiate(antisym, universe);
    REQUIRE(ground.size() == 2);
    InstanceSet heads;
    for (const GroundRule& g : ground) {
        heads.insert(g.rhs);
        REQUIRE(g.lhs.size() == 1);
        CHECK(g.lhs[0].referents != g.rhs.referents);
    }
    CHECK(heads == InstanceSet{inst("R", {"v1", "v2"}), inst("R", {"v2", "v1"})});

    RuleSet composition = parse_rules("type G/1 dim 2\ntype R/2 dim 2\nG(Y) <- 1*G(X) + 1*R(Y,X)\n");
    CHECK(instantiate(composition, universe).size() == 2);

    RuleSet triple = parse_rules("type R/2 dim 2\nR(X,Y) <- 1*R(X,Z) + -1*R(Y,Z)\n");
    CHECK(instantiate(triple, universe).empty());  // three variables, two referents
}

TEST_CASE("two positions close to exactly the four G/R atoms in the position fragment") {
    std::string fragment =
        "type G/1 dim 2\ntype R/2 dim 2\n"
        "G(Y) <- 1*G(X) + 1*R(Y,X)\n"
        "R(X,Y) <- -1*R(Y,X)\n"
        "R(X,Y) <- 1*R(X,Z) + -1*R(Y,Z)\n";
    RuleSet rules = saturate(parse_rules(fragment));
    std::vector<Referent> universe = vehicles(2);
    InstanceSet seed = {inst("G", {"v1"}), inst("G", {"v2"})};
    InstanceSet result = closure(seed, rules, universe);
    InstanceSet expected = {inst("G", {"v1"}), inst("G", {"v2"}), inst("R", {"v1", "v2"}),
                            inst("R", {"v2", "v1"})};
    CHECK(result == expected);
}

TEST_CASE("under the full default rules two positions also determine their pair centroid") {
    std::vector<Referent> universe = vehicles(2);
    InstanceSet seed = {inst("G", {"v1"}), inst("G", {"v2"})};
    InstanceSet result = closure(seed, saturated_default_rules(), universe);
    InstanceSet expected = {inst("G", {"v1"}),       inst("G", {"v2"}),
                            inst("R", {"v1", "v2"}), inst("R", {"v2", "v1"}),
                            inst("C2", {"v1", "v2"}), inst("C2", {"v2", "v1"})};
    CHECK(result == expected);
}

TEST_CASE("closure of the empty set is empty") {
    CHECK(closure({}, saturated_default_rules(), vehicles(3)).empty());
}

TEST_CASE("closure of a monitoring pair recovers the vehicle position") {
    std::vector<Referent> universe = referents_of({{"r1", ReferentKind::vehicle}, {"t", ReferentKind::target}});
    InstanceSet seed = {inst("R", {"r1", "t"}), inst("G", {"t"})};
    InstanceSet result = closure(seed, saturated_default_rules(), universe);
    CHECK(result.count(inst("G", {"r1"})));
    CHECK(result.count(inst("R", {"t", "r1"})));
}

TEST_CASE("infers covers membership, derivation and failure") {
    std::vector<Referent> universe = vehicles(2);
    const RuleSet& rules = saturated_default_rules();
    CHECK(infers({inst("G", {"v1"}), inst("G", {"v2"})}, inst("R", {"v1", "v2"}), rules, universe));
    CHECK_FALSE(infers({inst("G", {"v1"})}, inst("R", {"v1", "v2"}), rules, universe));
    CHECK(infers({inst("G", {"v1"})}, inst("G", {"v1"}), rules, universe));
}

TEST_CASE("closure requires saturated rules") {
    CHECK_THROWS_AS(closure({}, default_rules(), vehicles(2)), std::invalid_argument);
}

TEST_CASE("closure is extensive, monotone and idempotent") {
    detail::Rng rng(99);
    const RuleSet& rules = saturated_default_rules();
    for (int round = 0; round < 60; ++round) {
        std::vector<Referent> universe = vehicles(rng.int_in(2, 4));
        universe.push_back(Referent{"t1", ReferentKind::target});

        auto random_set = [&]() {
            InstanceSet set;
            int count = rng.int_in(0, 4);
            for (int i = 0; i < count; ++i) {
                int a = rng.int_in(0, int(universe.size()) - 1);
                int b = rng.int_in(0, int(universe.size()) - 1);
                if (a == b) {
                    set.insert(inst("G", {universe[std::size_t(a)].id}));
                } else {
                    set.insert(inst("R", {universe[std::size_t(a)].id, universe[std::size_t(b)].id}));
                }
            }
            return set;
        };

        InstanceSet s1 = random_set();
        InstanceSet s2 = s1;
        InstanceSet extra = random_set();
        s2.insert(extra.begin(), extra.end());

        GroundProgram program(rules, universe);
        InstanceSet c1 = program.closure(s1);
        InstanceSet c2 = program.closure(s2);
        for (const Instance& instance : s1) CHECK(c1.count(instance));  // extensive
        for (const Instance& instance : c1) CHECK(c2.count(instance));  // monotone
        CHECK(program.closure(c1) == c1);                               // idempotent
    }
}

TEST_CASE("every saturated ground rule is permutable") {
    const RuleSet& rules = saturated_default_rules();
    std::vector<Referent> universe = vehicles(3);
    GroundProgram program(rules, universe);
    for (const GroundRule& ground : instantiate(rules, universe)) {
        for (std::size_t x = 0; x < ground.lhs.size(); ++x) {
            InstanceSet premises;
            for (std::size_t j = 0; j < ground.lhs.size(); ++j)
                if (j != x) premises.insert(ground.lhs[j]);
            premises.insert(ground.rhs);
            CHECK(program.infers(premises, ground.lhs[x]));
        }
    }
}

TEST_CASE("ground rules are linearly sound under permutation") {
    const RuleSet& rules = saturated_default_rules();
    std::vector<Referent> universe = vehicles(3);
    detail::Rng rng(5);

    for (const Rule& rule : rules.rules) {
        // assign random values to the lhs, evaluate the rhs
        std::vector<double> lhs_values;
        double rhs_value = rule.rhs_offset;
        for (const RuleTerm& term : rule.lhs) {
            double value = rng.real_in(-10.0, 10.0);
            lhs_values.push_back(value);
            rhs_value += term.coeff * value;
        }
        // re-solve every permuted variant for its head and compare
        for (std::size_t x = 0; x < rule.lhs.size(); ++x) {
            double back = (rhs_value - rule.rhs_offset) / rule.lhs[x].coeff;
            for (std::size_t j = 0; j < rule.lhs.size(); ++j)
                if (j != x) back -= rule.lhs[j].coeff / rule.lhs[x].coeff * lhs_values[j];
            CHECK(std::abs(back - lhs_values[x]) < 1e-9);
        }
    }
}
