#include "stackkit/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stackkit/rng.hpp"

namespace stackkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Vec2 polar(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }

// Shape dimension ranges; the source material publishes none, these keep
// every planar face inradius >= 0.1.
Shape sample_planar_shape(Flavor flavor, Rng& rng) {
    if (flavor == Flavor::Cubes) return Shape::cube(rng.uniform(0.3, 0.9));
    if (rng.coin(0.6)) {
        return Shape::cuboid(rng.uniform(0.2, 1.2), rng.uniform(0.2, 1.2), rng.uniform(0.2, 1.2));
    }
    return Shape::cylinder(rng.uniform(0.1, 0.4), rng.uniform(0.3, 1.0));
}

Orientation sample_planar_orientation(const Shape& shape, Rng& rng) {
    if (shape.kind == ShapeKind::Cylinder) return Orientation::Upright;
    const auto all = orientations_for(shape.kind);
    return all[rng.uniform_int(0, static_cast<int>(all.size()) - 1)];
}

StackEntry sample_curved_entry(Rng& rng, Vec2 offset) {
    if (rng.coin()) {
        return {Shape::sphere(rng.uniform(0.15, 0.4)), Orientation::Only, offset};
    }
    return {Shape::cylinder(rng.uniform(0.1, 0.4), rng.uniform(0.3, 1.0)),
            Orientation::SidewaysX, offset};
}

double top_inradius(const StackEntry& e) {
    const PlacedObject obj{e.shape, e.orientation, e.offset, 0.0};
    return faces(obj).top.inradius();
}

Vec2 bottom_half_extents(const StackEntry& e) {
    const PlacedObject obj{e.shape, e.orientation, e.offset, 0.0};
    return obj.horizontal_half_extents();
}

Cosmetic sample_cosmetic(int height, Rng& rng) {
    Cosmetic cosmetic;
    cosmetic.background_id = rng.uniform_int(0, kBackgroundCount - 1);
    cosmetic.light_id = rng.uniform_int(0, kLightCount - 1);
    cosmetic.object_colors.reserve(height);
    for (int i = 0; i < height; ++i) {
        cosmetic.object_colors.push_back(rng.uniform_int(0, kColorCount - 1));
    }
    return cosmetic;
}

// Planar-faced column with every interface margin >= delta. Returns entries
// or empty on a failed attempt.
std::vector<StackEntry> sample_stable_entries(Flavor flavor, int height, double delta, Rng& rng,
                                              double spread) {
    std::vector<StackEntry> entries;
    entries.reserve(height);
    Vec2 offset{0.0, 0.0};
    for (int i = 0; i < height; ++i) {
        const Shape shape = sample_planar_shape(flavor, rng);
        const Orientation orient = sample_planar_orientation(shape, rng);
        if (i > 0) {
            const double reach = spread * top_inradius(entries.back());
            offset = entries.back().offset + polar(rng.uniform(0.0, reach), rng.uniform(0.0, kTwoPi));
        }
        entries.push_back({shape, orient, offset});
    }
    const Stack stack = make_stack(entries);
    try {
        if (!check_stability(stack, delta).stable) return {};
    } catch (const InvalidStackError&) {
        return {};
    }
    return entries;
}

Scenario finish(const ScenarioSpec& spec, Stack stack, Cosmetic cosmetic, bool counterbalanced) {
    Scenario scenario;
    scenario.stack = std::move(stack);
    scenario.spec = spec;
    scenario.report = check_stability(scenario.stack, 0.0);
    scenario.labels = annotate(scenario.stack, scenario.report);
    scenario.cosmetic = std::move(cosmetic);
    scenario.counterbalanced = counterbalanced;
    return scenario;
}

int count_unsatisfied(const StabilityReport& report) {
    int n = 0;
    for (const auto& chk : report.per_interface) n += chk.satisfied ? 0 : 1;
    return n;
}

// Margin hygiene: satisfied planar interfaces clear delta; the failing
// interface (if planar) exceeds the boundary by delta.
bool margins_clear(const StabilityReport& report, double delta) {
    for (const auto& chk : report.per_interface) {
        if (chk.degenerate) continue;
        if (chk.satisfied && chk.margin < delta) return false;
        if (!chk.satisfied && chk.margin > -delta) return false;
    }
    return true;
}

Scenario generate_stable(const ScenarioSpec& spec, const GenParams& params, Rng& rng,
                         Cosmetic cosmetic) {
    for (int retry = 0; retry < params.max_retries; ++retry) {
        auto entries = sample_stable_entries(spec.flavor, spec.height, params.delta_gen, rng, 0.55);
        if (entries.empty()) continue;
        return finish(spec, make_stack(entries), std::move(cosmetic), false);
    }
    throw GenerationExhaustedError("stable generation exhausted retries");
}

Scenario generate_counterbalanced(const ScenarioSpec& spec, const GenParams& params, Rng& rng,
                                  Cosmetic cosmetic) {
    const int h = spec.height;
    if (h >= 3) {
        for (int retry = 0; retry < params.max_retries; ++retry) {
            const int j = rng.uniform_int(1, h - 2);
            const bool along_x = rng.coin();
            const double sign = rng.coin() ? 1.0 : -1.0;

            std::vector<StackEntry> entries;
            entries.reserve(h);
            Vec2 offset{0.0, 0.0};
            for (int i = 0; i < j; ++i) {
                const Shape shape = sample_planar_shape(spec.flavor, rng);
                const Orientation orient = sample_planar_orientation(shape, rng);
                if (i > 0) {
                    const double reach = 0.25 * top_inradius(entries.back());
                    offset = entries.back().offset +
                             polar(rng.uniform(0.0, reach), rng.uniform(0.0, kTwoPi));
                }
                entries.push_back({shape, orient, offset});
            }

            // Overhanging middle object: its own CoM ends up outside its
            // support face by ov.
            const Shape over_shape = sample_planar_shape(spec.flavor, rng);
            const Orientation over_orient = sample_planar_orientation(over_shape, rng);
            StackEntry over{over_shape, over_orient, {0.0, 0.0}};
            const Vec2 over_half = bottom_half_extents(over);
            const double over_ax = along_x ? over_half.x : over_half.y;
            if (over_ax < 0.14) continue;
            const PlacedObject below{entries.back().shape, entries.back().orientation,
                                     entries.back().offset, 0.0};
            const Footprint below_top = faces(below).top;
            const double support_ax =
                below_top.kind == FootprintKind::Disk ? below_top.a : (along_x ? below_top.a : below_top.b);
            const double ov = rng.uniform(0.02, std::min(0.2, over_ax - 0.12));
            Vec2 shift{0.0, 0.0};
            (along_x ? shift.x : shift.y) = sign * (support_ax + ov);
            over.offset = entries.back().offset + shift;
            entries.push_back(over);

            // Counterweights above, pulled back over the support.
            const double reach_back = 0.9 * top_inradius(entries.back());
            for (int i = j + 1; i < h; ++i) {
                const Shape shape = sample_planar_shape(spec.flavor, rng);
                const Orientation orient = sample_planar_orientation(shape, rng);
                Vec2 pull{0.0, 0.0};
                (along_x ? pull.x : pull.y) = -sign * rng.uniform(0.0, reach_back);
                entries.push_back({shape, orient, entries[j].offset + pull});
            }

            Stack stack;
            StabilityReport report;
            try {
                stack = make_stack(entries);
                report = check_stability(stack, params.delta_gen);
            } catch (const InvalidStackError&) {
                continue;
            }
            if (!report.stable) continue;

            // The structural point: some object's own CoM sits outside its
            // own support region even though every cumulative check passes.
            bool overhung = false;
            for (int i = 1; i < h; ++i) {
                const Footprint sup = faces(stack.objects[i - 1]).top;
                const Footprint bot = faces(stack.objects[i]).bottom;
                if (sup.degenerate() || bot.degenerate()) continue;
                const Vec3 c = stack.objects[i].centroid();
                if (planar_margin(sup, bot, {c.x, c.y}) < -0.01) {
                    overhung = true;
                    break;
                }
            }
            if (!overhung) continue;
            return finish(spec, std::move(stack), std::move(cosmetic), true);
        }
    }
    // Recorded fallback: plain stable stack.
    Scenario scenario = generate_stable(spec, params, rng, std::move(cosmetic));
    scenario.counterbalanced = false;
    return scenario;
}

Scenario generate_vcom(const ScenarioSpec& spec, const GenParams& params, Rng& rng,
                       Cosmetic cosmetic) {
    const int k = *spec.violation_interface;
    const double delta = params.delta_gen;
    for (int retry = 0; retry < params.max_retries; ++retry) {
        auto entries = sample_stable_entries(spec.flavor, spec.height, delta, rng, 0.45);
        if (entries.empty()) continue;

        const Vec2 dir = polar(1.0, rng.uniform(0.0, kTwoPi));
        const double extra = rng.uniform(0.0, 0.25);

        std::vector<StackEntry> best;
        for (double t = 0.01; t <= 3.0; t += 0.01) {
            std::vector<StackEntry> shifted = entries;
            for (std::size_t i = static_cast<std::size_t>(k) + 1; i < shifted.size(); ++i) {
                shifted[i].offset = entries[i].offset + t * dir;
            }
            StabilityReport report;
            try {
                report = check_stability(make_stack(shifted), 0.0);
            } catch (const InvalidStackError&) {
                break;  // contact lost before a clean violation appeared
            }
            bool others_ok = true;
            for (const auto& chk : report.per_interface) {
                if (chk.interface_index != k && (!chk.satisfied || chk.margin < delta)) {
                    others_ok = false;
                    break;
                }
            }
            if (!others_ok) break;
            const double mk = report.per_interface[k].margin;
            if (mk <= -delta) best = shifted;
            if (mk <= -(delta + extra)) break;
        }
        if (best.empty()) continue;

        Stack stack = make_stack(best);
        const StabilityReport report = check_stability(stack, 0.0);
        if (report.stable || count_unsatisfied(report) != 1 ||
            classify_violation(report) != StabilityClass::VCOM ||
            report.violation->violating_index != k || !margins_clear(report, delta)) {
            continue;
        }
        return finish(spec, std::move(stack), std::move(cosmetic), false);
    }
    throw GenerationExhaustedError("VCOM generation exhausted retries");
}

Scenario generate_vpsf(const ScenarioSpec& spec, const GenParams& params, Rng& rng,
                       Cosmetic cosmetic) {
    const int k = *spec.violation_interface;
    const double delta = params.delta_gen;
    for (int retry = 0; retry < params.max_retries; ++retry) {
        std::vector<StackEntry> entries;
        entries.reserve(spec.height);
        Vec2 offset{0.0, 0.0};
        for (int i = 0; i < k; ++i) {
            const Shape shape = sample_planar_shape(spec.flavor, rng);
            const Orientation orient = sample_planar_orientation(shape, rng);
            if (i > 0) {
                const double reach = 0.3 * top_inradius(entries.back());
                offset = entries.back().offset +
                         polar(rng.uniform(0.0, reach), rng.uniform(0.0, kTwoPi));
            }
            entries.push_back({shape, orient, offset});
        }

        // Curved object at the chosen interface's lower position. Its load
        // sits exactly on its axis, so only the interface above it fails.
        Vec2 curved_offset{0.0, 0.0};
        if (k > 0) {
            const PlacedObject below{entries.back().shape, entries.back().orientation,
                                     entries.back().offset, 0.0};
            const Footprint sup = faces(below).top;
            const double jx = sup.a;
            const double jy = sup.kind == FootprintKind::Disk ? sup.a : sup.b;
            curved_offset = entries.back().offset +
                            Vec2{rng.uniform(-0.4, 0.4) * std::max(jx - delta, 0.0),
                                 rng.uniform(-0.4, 0.4) * std::max(jy - delta, 0.0)};
        }
        entries.push_back(sample_curved_entry(rng, curved_offset));

        for (int i = k + 1; i < spec.height; ++i) {
            const Shape shape = sample_planar_shape(spec.flavor, rng);
            const Orientation orient = sample_planar_orientation(shape, rng);
            entries.push_back({shape, orient, curved_offset});
        }

        Stack stack;
        StabilityReport report;
        try {
            stack = make_stack(entries);
            report = check_stability(stack, 0.0);
        } catch (const InvalidStackError&) {
            continue;
        }
        if (report.stable || count_unsatisfied(report) != 1 ||
            classify_violation(report) != StabilityClass::VPSF ||
            report.violation->violating_index != k || !margins_clear(report, delta)) {
            continue;
        }
        return finish(spec, std::move(stack), std::move(cosmetic), false);
    }
    throw GenerationExhaustedError("VPSF generation exhausted retries");
}

}  // namespace

void validate_spec(const ScenarioSpec& spec) {
    if (spec.height < kMinHeight || spec.height > kMaxHeight) {
        throw InvalidSpecError("height must be in [2, 6]");
    }
    const bool unstable =
        spec.target == Target::UnstableVCOM || spec.target == Target::UnstableVPSF;
    if (unstable) {
        if (!spec.violation_interface) {
            throw InvalidSpecError("unstable target requires a violation interface");
        }
        if (*spec.violation_interface < 0 || *spec.violation_interface > spec.height - 2) {
            throw InvalidSpecError("violation interface out of range");
        }
    } else if (spec.violation_interface) {
        throw InvalidSpecError("violation interface only applies to unstable targets");
    }
    if (spec.target == Target::UnstableVPSF && spec.flavor == Flavor::Cubes) {
        throw InvalidSpecError("VPSF is geometrically impossible with cubes only");
    }
}

Scenario generate(const ScenarioSpec& spec, const GenParams& params) {
    validate_spec(spec);
    Rng rng(mix_seed(spec.seed, 0x5ce9a11ull));
    Cosmetic cosmetic = sample_cosmetic(spec.height, rng);
    switch (spec.target) {
        case Target::Stable: return generate_stable(spec, params, rng, std::move(cosmetic));
        case Target::StableCounterbalanced:
            return generate_counterbalanced(spec, params, rng, std::move(cosmetic));
        case Target::UnstableVCOM: return generate_vcom(spec, params, rng, std::move(cosmetic));
        case Target::UnstableVPSF: return generate_vpsf(spec, params, rng, std::move(cosmetic));
    }
    throw InvalidSpecError("unknown target");
}

std::vector<ScenarioSpec> balanced_specs(Flavor flavor, int count, std::uint64_t master_seed) {
    std::vector<ScenarioSpec> specs;
    specs.reserve(count);
    int unstable_ordinal = 0;
    int stable_ordinal = 0;
    for (int i = 0; i < count; ++i) {
        ScenarioSpec spec;
        spec.flavor = flavor;
        spec.height = kMinHeight + (i / 2) % (kMaxHeight - kMinHeight + 1);
        spec.seed = mix_seed(master_seed, static_cast<std::uint64_t>(i));
        if (i % 2 == 0) {
            spec.target = (stable_ordinal % 5 == 4 && spec.height >= 3)
                              ? Target::StableCounterbalanced
                              : Target::Stable;
            ++stable_ordinal;
        } else {
            const bool vpsf = flavor == Flavor::CCS && unstable_ordinal % 2 == 1;
            spec.target = vpsf ? Target::UnstableVPSF : Target::UnstableVCOM;
            spec.violation_interface = (unstable_ordinal / 2) % (spec.height - 1);
            ++unstable_ordinal;
        }
        specs.push_back(spec);
    }
    return specs;
}

int table_count(Flavor flavor, int split_index, int height) {
    static constexpr int kCcs[3][5] = {
        {1340, 2464, 1716, 678, 194},
        {286, 528, 368, 144, 40},
        {286, 528, 368, 144, 40},
    };
    static constexpr int kCubes[3][5] = {
        {1680, 1680, 1558, 1274, 1030},
        {360, 360, 332, 272, 220},
        {360, 360, 332, 272, 220},
    };
    if (split_index < 0 || split_index > 2 || height < kMinHeight || height > kMaxHeight) return 0;
    const auto& table = flavor == Flavor::CCS ? kCcs : kCubes;
    return table[split_index][height - kMinHeight];
}

std::vector<PlannedScenario> plan_dataset(const DatasetConfig& config) {
    if (config.only_target && *config.only_target == Target::UnstableVPSF) {
        for (const Flavor f : config.flavors) {
            if (f == Flavor::Cubes) {
                throw InvalidSpecError("VPSF is geometrically impossible with cubes only");
            }
        }
    }

    std::vector<PlannedScenario> plan;
    std::uint64_t global_ordinal = 0;
    for (const Flavor flavor : config.flavors) {
        for (int split = 0; split < 3; ++split) {
            for (const int height : config.heights) {
                long long n = 0;
                if (const auto it = config.train_count_override.find(height);
                    it != config.train_count_override.end()) {
                    const double frac =
                        config.split_fractions[split] / config.split_fractions[0];
                    n = std::llround(it->second * frac);
                } else {
                    n = std::llround(table_count(flavor, split, height) * config.scale);
                }
                if (n <= 0) continue;

                // Stable half gets the extra on odd counts; within CCS
                // unstable, VCOM gets the extra.
                long long n_stable = (n + 1) / 2;
                long long n_unstable = n - n_stable;
                long long n_cb = height >= 3
                                     ? std::llround(n_stable * config.counterbalanced_fraction)
                                     : 0;
                long long n_vcom = flavor == Flavor::CCS ? (n_unstable + 1) / 2 : n_unstable;
                long long n_vpsf = n_unstable - n_vcom;
                if (flavor == Flavor::Cubes) n_vpsf = 0;

                std::vector<Target> targets;
                targets.reserve(n);
                if (config.only_target) {
                    targets.assign(n, *config.only_target);
                } else {
                    targets.insert(targets.end(), n_cb, Target::StableCounterbalanced);
                    targets.insert(targets.end(), n_stable - n_cb, Target::Stable);
                    targets.insert(targets.end(), n_vcom, Target::UnstableVCOM);
                    targets.insert(targets.end(), n_vpsf, Target::UnstableVPSF);
                }

                int vcom_ordinal = 0;
                int vpsf_ordinal = 0;
                for (std::size_t j = 0; j < targets.size(); ++j) {
                    ScenarioSpec spec;
                    spec.flavor = flavor;
                    spec.height = height;
                    spec.target = targets[j];
                    if (spec.target == Target::UnstableVCOM) {
                        spec.violation_interface = vcom_ordinal++ % (height - 1);
                    } else if (spec.target == Target::UnstableVPSF) {
                        spec.violation_interface = vpsf_ordinal++ % (height - 1);
                    }
                    spec.seed = mix_seed(config.master_seed, global_ordinal++);
                    validate_spec(spec);

                    char name[64];
                    std::snprintf(name, sizeof name, "%s/%s_h%d_%06zu.scene", kSplitNames[split],
                                  flavor_name(flavor), height, j);
                    plan.push_back({spec, split, name});
                }
            }
        }
    }
    return plan;
}

const char* flavor_name(Flavor f) { return f == Flavor::Cubes ? "cubes" : "ccs"; }

Flavor parse_flavor(std::string_view name) {
    if (name == "cubes") return Flavor::Cubes;
    if (name == "ccs") return Flavor::CCS;
    throw SchemaError("unknown flavor: '" + std::string(name) + "'");
}

const char* target_name(Target t) {
    switch (t) {
        case Target::Stable: return "stable";
        case Target::StableCounterbalanced: return "stable_counterbalanced";
        case Target::UnstableVCOM: return "unstable_vcom";
        case Target::UnstableVPSF: return "unstable_vpsf";
    }
    return "stable";
}

Target parse_target(std::string_view name) {
    if (name == "stable") return Target::Stable;
    if (name == "stable_counterbalanced") return Target::StableCounterbalanced;
    if (name == "unstable_vcom") return Target::UnstableVCOM;
    if (name == "unstable_vpsf") return Target::UnstableVPSF;
    throw SchemaError("unknown target: '" + std::string(name) + "'");
}

const char* orientation_name(Orientation o) {
    switch (o) {
        case Orientation::HeightA: return "height_a";
        case Orientation::HeightB: return "height_b";
        case Orientation::HeightC: return "height_c";
        case Orientation::Upright: return "upright";
        case Orientation::SidewaysX: return "sideways_x";
        case Orientation::Only: return "only";
    }
    return "only";
}

Orientation parse_orientation(std::string_view name) {
    if (name == "height_a") return Orientation::HeightA;
    if (name == "height_b") return Orientation::HeightB;
    if (name == "height_c") return Orientation::HeightC;
    if (name == "upright") return Orientation::Upright;
    if (name == "sideways_x") return Orientation::SidewaysX;
    if (name == "only") return Orientation::Only;
    throw SchemaError("unknown orientation: '" + std::string(name) + "'");
}

const char* shape_kind_name(ShapeKind k) {
    switch (k) {
        case ShapeKind::Cuboid: return "cuboid";
        case ShapeKind::Cylinder: return "cylinder";
        case ShapeKind::Sphere: return "sphere";
    }
    return "cuboid";
}

ShapeKind parse_shape_kind(std::string_view name) {
    if (name == "cuboid") return ShapeKind::Cuboid;
    if (name == "cylinder") return ShapeKind::Cylinder;
    if (name == "sphere") return ShapeKind::Sphere;
    throw SchemaError("unknown shape kind: '" + std::string(name) + "'");
}

}  // namespace stackkit
