#include "doctest.h"
#include "helpers.hpp"
#include "synergy/rules.hpp"
#include "synergy/tasks.hpp"

using namespace synergy;
using namespace synergy::testing;

TEST_CASE("make_monitoring emits the relative and global pins") {
    Referent v1{"v1", ReferentKind::vehicle};
    Referent t{"t", ReferentKind::target};
    ConstraintSet set = make_monitoring(v1, t, "watch");
    CHECK(set.instances() == InstanceSet{inst("R", {"v1", "t"}), inst("G", {"t"})});
    CHECK_THROWS_AS(make_monitoring(t, v1, "bad"), std::invalid_argument);
}

TEST_CASE("monitoring tasks over distinct vehicles and targets never overlap") {
    Referent v1{"v1", ReferentKind::vehicle}, v2{"v2", ReferentKind::vehicle};
    Referent t1{"t1", ReferentKind::target}, t2{"t2", ReferentKind::target};
    MtmrSetting setting;
    setting.referent_universe = {v1, v2, t1, t2};
    setting.tasks.push_back(make_monitoring(v1, t1, "m1"));
    setting.tasks.push_back(make_monitoring(v2, t2, "m2"));
    CHECK_FALSE(detect_overlap(setting).has_value());
}

TEST_CASE("make_centroid canonicalizes member order") {
    std::vector<Referent> vs = vehicles(3);
    ConstraintSet c3 = make_centroid({vs[0], vs[1], vs[2]}, "c3");
    CHECK(c3.instances() == InstanceSet{inst("C3", {"v1", "v2", "v3"})});

    ConstraintSet swapped = make_centroid({vs[1], vs[0]}, "c2");
    CHECK(swapped.instances() == InstanceSet{inst("C2", {"v1", "v2"})});

    CHECK_THROWS_AS(make_centroid({vs[0], vs[0]}, "dup"), std::invalid_argument);
    CHECK_THROWS_AS(make_centroid({vs[0]}, "short"), std::invalid_argument);
}

TEST_CASE("make_comm keeps the relay last and rejects duplicates") {
    std::vector<Referent> vs = vehicles(8);
    ConstraintSet set = make_comm(vs[0], vs[7], vs[6], "link");
    CHECK(set.instances() == InstanceSet{inst("M", {"v1", "v8", "v7"})});
    CHECK_THROWS_AS(make_comm(vs[0], vs[0], vs[6], "dup"), std::invalid_argument);
}

TEST_CASE("relay offsets are inferable from the relative positions") {
    std::vector<Referent> universe = vehicles(8);
    CHECK(infers({inst("R", {"v1", "v7"}), inst("R", {"v8", "v7"})}, inst("M", {"v1", "v8", "v7"}),
                 saturated_default_rules(), universe));
}

TEST_CASE("generated constraint sets are duplicate-free") {
    detail::Rng rng(41);
    for (int round = 0; round < 100; ++round) {
        MtmrSetting setting = random_task_setting(rng);
        for (const ConstraintSet& task : setting.tasks)
            CHECK(task.instances().size() == task.constraints.size());
    }
}

TEST_CASE("constraints_for dispatches on the task kind") {
    std::vector<Referent> universe = vehicles(3);
    universe.push_back(Referent{"t", ReferentKind::target});

    TaskSpec watch{"watch", TaskKind::monitoring, {"v1", "t"}, std::nullopt};
    CHECK(constraints_for(watch, universe).instances() ==
          InstanceSet{inst("R", {"v1", "t"}), inst("G", {"t"})});

    TaskSpec hold{"hold", TaskKind::centroid3, {"v3", "v1", "v2"}, std::nullopt};
    CHECK(constraints_for(hold, universe).instances() == InstanceSet{inst("C3", {"v1", "v2", "v3"})});

    TaskSpec ghost{"ghost", TaskKind::monitoring, {"v9", "t"}, std::nullopt};
    CHECK_THROWS_AS(constraints_for(ghost, universe), std::invalid_argument);
}
