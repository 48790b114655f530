#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stackkit/stability.hpp"

namespace stackkit {

enum class Flavor { Cubes, CCS };

enum class Target { Stable, StableCounterbalanced, UnstableVCOM, UnstableVPSF };

inline constexpr int kMinHeight = 2;
inline constexpr int kMaxHeight = 6;

// Cosmetic palettes, metadata only.
inline constexpr int kBackgroundCount = 25;
inline constexpr int kColorCount = 6;
inline constexpr int kLightCount = 5;

struct ScenarioSpec {
    Flavor flavor = Flavor::CCS;
    int height = 2;
    Target target = Target::Stable;
    std::optional<int> violation_interface;  // required for unstable targets
    std::uint64_t seed = 0;
};

struct Cosmetic {
    int background_id = 0;
    std::vector<int> object_colors;
    int light_id = 0;
};

struct Scenario {
    Stack stack;
    ScenarioSpec spec;
    StabilityReport report;  // at margin 0
    SegmentLabels labels;
    Cosmetic cosmetic;
    // Target StableCounterbalanced only: whether the counterbalanced
    // structure was achieved or the generator fell back to a plain stable
    // stack after exhausting retries.
    bool counterbalanced = false;
};

struct GenParams {
    // Generated labels stay clear of the decision boundary by this much.
    double delta_gen = 0.05;
    int max_retries = 1000;
};

// Throws InvalidSpecError for infeasible specs (VPSF with cubes, bad height
// or interface index).
void validate_spec(const ScenarioSpec& spec);

// Deterministic in spec.seed. The emitted scenario's recheck matches the
// target exactly; unstable scenarios have exactly one failing interface, at
// spec.violation_interface. Throws GenerationExhaustedError after
// max_retries failed attempts.
Scenario generate(const ScenarioSpec& spec, const GenParams& params = {});

// Balanced in-memory spec list: equal stable/unstable per height, unstable
// split evenly between the two violation types (VCOM only for cubes).
std::vector<ScenarioSpec> balanced_specs(Flavor flavor, int count, std::uint64_t master_seed);

inline constexpr std::array<const char*, 3> kSplitNames = {"train", "val", "test"};

// Published per-split scenario counts reproduced by the default config.
int table_count(Flavor flavor, int split_index, int height);

struct DatasetConfig {
    std::vector<Flavor> flavors = {Flavor::CCS, Flavor::Cubes};
    double scale = 1.0;
    std::uint64_t master_seed = 0;
    double counterbalanced_fraction = 0.2;
    int views_per_scenario = 16;
    std::vector<int> heights = {2, 3, 4, 5, 6};
    std::optional<Target> only_target;        // restrict the taxonomy
    std::map<int, int> train_count_override;  // per-height train counts
    std::array<double, 3> split_fractions = {0.7, 0.15, 0.15};
    GenParams gen;
};

struct PlannedScenario {
    ScenarioSpec spec;
    int split_index = 0;
    std::string relative_path;
};

// Pure function of the config; fixes specs, seeds and file paths.
std::vector<PlannedScenario> plan_dataset(const DatasetConfig& config);

const char* flavor_name(Flavor f);
Flavor parse_flavor(std::string_view name);
const char* target_name(Target t);
Target parse_target(std::string_view name);
const char* orientation_name(Orientation o);
Orientation parse_orientation(std::string_view name);
const char* shape_kind_name(ShapeKind k);
ShapeKind parse_shape_kind(std::string_view name);

}  // namespace stackkit
