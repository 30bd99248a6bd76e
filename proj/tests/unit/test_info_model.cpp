#include <unordered_set>

#include "doctest.h"
#include "helpers.hpp"
#include "synergy/detail/rng.hpp"
#include "synergy/info_model.hpp"

using namespace synergy;
using namespace synergy::testing;

TEST_CASE("canonical_key formats instances directly") {
    CHECK(canonical_key(inst("R", {"r1", "r2"})) == "R(r1,r2)");
    CHECK(canonical_key(inst("G", {"t"})) == "G(t)");
    CHECK(canonical_key(inst("C3", {"v1", "v2", "v3"})) == "C3(v1,v2,v3)");
}

TEST_CASE("canonical_key respects referent order") {
    CHECK(canonical_key(inst("R", {"r1", "r2"})) != canonical_key(inst("R", {"r2", "r1"})));
    CHECK(inst("R", {"r1", "r2"}) != inst("R", {"r2", "r1"}));
}

TEST_CASE("canonical_key is injective over random instances") {
    detail::Rng rng(7);
    std::vector<std::string> types = {"G", "R", "C2", "C3", "M"};
    std::vector<int> arities = {1, 2, 2, 3, 3};
    std::unordered_set<std::string> keys;
    std::vector<Instance> seen;
    for (int i = 0; i < 500; ++i) {
        int which = rng.int_in(0, int(types.size()) - 1);
        Instance instance;
        instance.type = types[std::size_t(which)];
        for (int a = 0; a < arities[std::size_t(which)]; ++a)
            instance.referents.push_back("r" + std::to_string(rng.int_in(1, 9)));
        bool new_key = keys.insert(canonical_key(instance)).second;
        bool new_instance = true;
        for (const Instance& other : seen)
            if (other == instance) new_instance = false;
        CHECK(new_key == new_instance);
        if (new_instance) seen.push_back(instance);
    }
}

TEST_CASE("parse_instance round-trips and validates arity") {
    TypeTable types;
    types.add(InfoType{"G", 1, 2});
    types.add(InfoType{"R", 2, 2});
    Instance parsed = parse_instance("R(v1, t)", types);
    CHECK(parsed == inst("R", {"v1", "t"}));
    CHECK(canonical_key(parse_instance("G(t)", types)) == "G(t)");
    CHECK_THROWS_AS(parse_instance("R(v1)", types), std::invalid_argument);
    CHECK_THROWS_AS(parse_instance("Q(v1)", types), std::invalid_argument);
    CHECK_THROWS_AS(parse_instance("R(v1,", types), std::invalid_argument);
}

TEST_CASE("referents are controllable exactly when they are vehicles") {
    CHECK(Referent{"v", ReferentKind::vehicle}.controllable());
    CHECK_FALSE(Referent{"t", ReferentKind::target}.controllable());
    CHECK_FALSE(Referent{"b", ReferentKind::location}.controllable());
}

TEST_CASE("constraint sets reject duplicate instances") {
    std::vector<Constraint> constraints = {
        Constraint{inst("G", {"t"}), std::nullopt},
        Constraint{inst("G", {"t"}), std::nullopt},
    };
    CHECK_THROWS_AS(make_constraint_set("s", constraints), std::invalid_argument);
}

TEST_CASE("detect_overlap finds the shared instance") {
    MtmrSetting setting;
    setting.referent_universe = referents_of({{"t", ReferentKind::target}, {"v1", ReferentKind::vehicle}});
    setting.tasks.push_back(make_constraint_set("s1", {Constraint{inst("G", {"t"}), std::nullopt}}));
    setting.tasks.push_back(make_constraint_set("s2", {Constraint{inst("G", {"t"}), std::nullopt}}));
    auto overlap = detect_overlap(setting);
    REQUIRE(overlap.has_value());
    CHECK(overlap->task_a == "s1");
    CHECK(overlap->task_b == "s2");
    CHECK(overlap->instance == inst("G", {"t"}));
}

TEST_CASE("detect_overlap is absent for disjoint and singleton settings") {
    MtmrSetting setting;
    setting.referent_universe = referents_of({{"t", ReferentKind::target}, {"v1", ReferentKind::vehicle}});
    setting.tasks.push_back(make_constraint_set("s1", {Constraint{inst("G", {"t"}), std::nullopt}}));
    CHECK_FALSE(detect_overlap(setting).has_value());
    setting.tasks.push_back(make_constraint_set("s2", {Constraint{inst("R", {"v1", "t"}), std::nullopt}}));
    CHECK_FALSE(detect_overlap(setting).has_value());
}

TEST_CASE("detect_overlap agrees with pairwise intersection emptiness") {
    detail::Rng rng(21);
    for (int round = 0; round < 200; ++round) {
        MtmrSetting setting = random_task_setting(rng);
        bool any_shared = false;
        for (std::size_t i = 0; i < setting.tasks.size(); ++i) {
            InstanceSet a = setting.tasks[i].instances();
            for (std::size_t j = i + 1; j < setting.tasks.size(); ++j)
                for (const Instance& instance : setting.tasks[j].instances())
                    if (a.count(instance)) any_shared = true;
        }
        CHECK(detect_overlap(setting).has_value() == any_shared);
    }
}

TEST_CASE("validate_setting rejects unknown referents and duplicate task ids") {
    MtmrSetting setting;
    setting.referent_universe = referents_of({{"v1", ReferentKind::vehicle}});
    setting.tasks.push_back(make_constraint_set("s1", {Constraint{inst("G", {"ghost"}), std::nullopt}}));
    CHECK_THROWS_AS(validate_setting(setting), std::invalid_argument);

    MtmrSetting twice;
    twice.referent_universe = referents_of({{"v1", ReferentKind::vehicle}});
    twice.tasks.push_back(make_constraint_set("s1", {Constraint{inst("G", {"v1"}), std::nullopt}}));
    twice.tasks.push_back(make_constraint_set("s1", {Constraint{inst("G", {"v1"}), std::nullopt}}));
    CHECK_THROWS_AS(validate_setting(twice), std::invalid_argument);
}
