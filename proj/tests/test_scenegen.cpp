#include <set>

#include "doctest.h"
#include "stackkit/dataset_io.hpp"
#include "stackkit/scenegen.hpp"
#include "test_support.hpp"

using namespace stackkit;

TEST_CASE("stable cubes pair generates with clear margins") {
    ScenarioSpec spec;
    spec.flavor = Flavor::Cubes;
    spec.height = 2;
    spec.target = Target::Stable;
    spec.seed = 1;
    const Scenario scenario = generate(spec);
    CHECK(scenario.report.stable);
    for (const auto& chk : scenario.report.per_interface) {
        CHECK(chk.margin >= 0.05);
    }
    for (const PlacedObject& obj : scenario.stack.objects) {
        CHECK(obj.shape.kind == ShapeKind::Cuboid);
        CHECK(obj.shape.a == obj.shape.b);
        CHECK(obj.shape.b == obj.shape.c);
    }
}

TEST_CASE("VCOM injection lands on the requested interface") {
    ScenarioSpec spec;
    spec.flavor = Flavor::CCS;
    spec.height = 3;
    spec.target = Target::UnstableVCOM;
    spec.violation_interface = 1;
    spec.seed = 7;
    const Scenario scenario = generate(spec);
    const StabilityReport recheck = check_stability(scenario.stack);
    CHECK_FALSE(recheck.stable);
    CHECK(recheck.violation->type == ViolationType::VCOM);
    CHECK(recheck.violation->violating_index == 1);
    CHECK(recheck.violation->first_to_fall_index == 2);
    int failing = 0;
    for (const auto& chk : recheck.per_interface) failing += chk.satisfied ? 0 : 1;
    CHECK(failing == 1);
    CHECK(recheck.per_interface[1].margin <= -0.05);
}

TEST_CASE("VPSF injection places a curved support under load") {
    ScenarioSpec spec;
    spec.flavor = Flavor::CCS;
    spec.height = 4;
    spec.target = Target::UnstableVPSF;
    spec.violation_interface = 1;
    spec.seed = 11;
    const Scenario scenario = generate(spec);
    const StabilityReport recheck = check_stability(scenario.stack);
    CHECK_FALSE(recheck.stable);
    CHECK(recheck.violation->type == ViolationType::VPSF);
    CHECK(recheck.violation->violating_index == 1);
    const PlacedObject& curved = scenario.stack.objects[1];
    CHECK_FALSE(curved.top_flat());
    int failing = 0;
    for (const auto& chk : recheck.per_interface) failing += chk.satisfied ? 0 : 1;
    CHECK(failing == 1);
}

TEST_CASE("infeasible specs are rejected immediately") {
    ScenarioSpec spec;
    spec.flavor = Flavor::Cubes;
    spec.height = 2;
    spec.target = Target::UnstableVPSF;
    spec.violation_interface = 0;
    CHECK_THROWS_AS(generate(spec), InvalidSpecError);

    spec.target = Target::UnstableVCOM;
    spec.violation_interface.reset();
    CHECK_THROWS_AS(generate(spec), InvalidSpecError);

    spec.violation_interface = 1;  // out of range for height 2
    CHECK_THROWS_AS(generate(spec), InvalidSpecError);

    spec.target = Target::Stable;
    spec.violation_interface = 0;
    CHECK_THROWS_AS(generate(spec), InvalidSpecError);

    spec.violation_interface.reset();
    spec.height = 7;
    CHECK_THROWS_AS(generate(spec), InvalidSpecError);
}

TEST_CASE("counterbalanced target yields a genuinely overhung stable stack") {
    int achieved = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        ScenarioSpec spec;
        spec.flavor = Flavor::CCS;
        spec.height = 4;
        spec.target = Target::StableCounterbalanced;
        spec.seed = seed;
        const Scenario scenario = generate(spec);
        CHECK(scenario.report.stable);
        if (!scenario.counterbalanced) continue;
        ++achieved;
        bool overhung = false;
        for (int i = 1; i < scenario.stack.height(); ++i) {
            const Footprint sup = faces(scenario.stack.objects[i - 1]).top;
            const Footprint bot = faces(scenario.stack.objects[i]).bottom;
            if (sup.degenerate() || bot.degenerate()) continue;
            const Vec3 c = scenario.stack.objects[i].centroid();
            if (planar_margin(sup, bot, {c.x, c.y}) < 0.0) overhung = true;
        }
        CHECK(overhung);
    }
    CHECK(achieved >= 6);
}

TEST_CASE("label soundness and margin hygiene over a balanced batch") {
    const auto specs = balanced_specs(Flavor::CCS, 120, 99);
    for (const ScenarioSpec& spec : specs) {
        const Scenario scenario = generate(spec);
        const StabilityReport recheck = check_stability(scenario.stack);
        CHECK(testing::reports_agree(scenario.report, recheck));
        const SegmentLabels relabel = annotate(scenario.stack, recheck);
        CHECK(relabel == scenario.labels);

        const bool want_unstable = spec.target == Target::UnstableVCOM ||
                                   spec.target == Target::UnstableVPSF;
        CHECK(recheck.stable == !want_unstable);
        if (want_unstable) {
            int failing = 0;
            for (const auto& chk : recheck.per_interface) failing += chk.satisfied ? 0 : 1;
            CHECK(failing == 1);
            CHECK(recheck.violation->violating_index == *spec.violation_interface);
            const auto type = spec.target == Target::UnstableVPSF ? ViolationType::VPSF
                                                                  : ViolationType::VCOM;
            CHECK(recheck.violation->type == type);
        }
        for (const auto& chk : recheck.per_interface) {
            if (chk.degenerate) continue;
            if (chk.satisfied) CHECK(chk.margin >= 0.05);
            else CHECK(chk.margin <= -0.05);
        }
        // Cosmetic palettes.
        CHECK(scenario.cosmetic.background_id < kBackgroundCount);
        CHECK(scenario.cosmetic.light_id < kLightCount);
        for (const int c : scenario.cosmetic.object_colors) CHECK(c < kColorCount);
    }
}

TEST_CASE("generation is a pure function of the spec") {
    ScenarioSpec spec;
    spec.flavor = Flavor::CCS;
    spec.height = 5;
    spec.target = Target::UnstableVCOM;
    spec.violation_interface = 2;
    spec.seed = 20260811;
    const Scenario a = generate(spec);
    const Scenario b = generate(spec);
    CHECK(serialize_scene(a) == serialize_scene(b));
}

TEST_CASE("dataset plan reproduces the published counts at scale 1") {
    DatasetConfig config;
    const auto plan = plan_dataset(config);

    long long ccs_train_h3 = 0;
    long long per_split[3] = {0, 0, 0};
    for (const PlannedScenario& p : plan) {
        per_split[p.split_index] += p.spec.flavor == Flavor::CCS ? 1 : 0;
        if (p.spec.flavor == Flavor::CCS && p.split_index == 0 && p.spec.height == 3) {
            ++ccs_train_h3;
        }
    }
    CHECK(ccs_train_h3 == 2464);
    CHECK(per_split[0] == 6392);
    CHECK(per_split[1] == 1366);
    CHECK(per_split[2] == 1366);
    CHECK(plan.size() == 6392 + 1366 + 1366 + 7222 + 1544 + 1544);

    // Unique paths, deterministic seeds.
    std::set<std::string> paths;
    for (const PlannedScenario& p : plan) paths.insert(p.relative_path);
    CHECK(paths.size() == plan.size());
    const auto replan = plan_dataset(config);
    CHECK(replan[123].spec.seed == plan[123].spec.seed);
}

TEST_CASE("scale 0.01 cubes h2 train: 17 scenarios, stable takes the extra") {
    DatasetConfig config;
    config.flavors = {Flavor::Cubes};
    config.scale = 0.01;
    const auto plan = plan_dataset(config);
    int stable = 0, unstable = 0;
    for (const PlannedScenario& p : plan) {
        if (p.split_index != 0 || p.spec.height != 2) continue;
        const bool is_unstable = p.spec.target == Target::UnstableVCOM ||
                                 p.spec.target == Target::UnstableVPSF;
        (is_unstable ? unstable : stable) += 1;
    }
    CHECK(stable + unstable == 17);
    CHECK(stable == 9);
    CHECK(unstable == 8);
}

TEST_CASE("per-bucket balance contracts hold at every scale") {
    DatasetConfig config;
    config.scale = 0.013;
    const auto plan = plan_dataset(config);
    for (const Flavor flavor : config.flavors) {
        for (int split = 0; split < 3; ++split) {
            for (int height = 2; height <= 6; ++height) {
                int stable = 0, vcom = 0, vpsf = 0;
                for (const PlannedScenario& p : plan) {
                    if (p.spec.flavor != flavor || p.split_index != split ||
                        p.spec.height != height) {
                        continue;
                    }
                    if (p.spec.target == Target::UnstableVCOM) ++vcom;
                    else if (p.spec.target == Target::UnstableVPSF) ++vpsf;
                    else ++stable;
                }
                CHECK(std::abs(stable - vcom - vpsf) <= 1);
                if (flavor == Flavor::CCS) CHECK(std::abs(vcom - vpsf) <= 1);
                else CHECK(vpsf == 0);
            }
        }
    }
}

TEST_CASE("restricting the taxonomy to VPSF with cubes is rejected") {
    DatasetConfig config;
    config.flavors = {Flavor::Cubes};
    config.only_target = Target::UnstableVPSF;
    CHECK_THROWS_AS(plan_dataset(config), InvalidSpecError);
}
