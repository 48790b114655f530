#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stackkit/scenegen.hpp"

namespace stackkit {

inline constexpr int kSceneSchemaVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;

// Canonical text form: fixed key order, numbers at 17 significant digits, so
// serialize(parse(serialize(s))) is byte-identical.
std::string serialize_scene(const Scenario& scenario);

// Throws SchemaError on malformed or unknown-version input, ValidationError
// when stored annotations contradict the recomputed stability report or the
// z chain is inconsistent.
Scenario parse_scene(std::string_view text);

// Stability report and labels recomputed from a bare stack; used when a scene
// is authored from geometry rather than by the generator.
Scenario scenario_from_stack(Stack stack, Flavor flavor, std::uint64_t seed = 0);

struct ManifestEntry {
    std::string path;  // relative to the dataset root
    std::uint64_t hash = 0;
};

struct SplitListing {
    std::string name;
    std::vector<ManifestEntry> entries;
};

struct CountKey {
    std::string split;
    Flavor flavor = Flavor::CCS;
    int height = 0;
    Target target = Target::Stable;
};

struct DatasetManifest {
    int schema_version = kManifestSchemaVersion;
    std::vector<Flavor> flavors;
    double scale = 1.0;
    std::uint64_t master_seed = 0;
    int views_per_scenario = 16;
    double counterbalanced_fraction = 0.2;
    double delta_gen = 0.05;
    long long total_scenarios = 0;
    long long images_equivalent = 0;
    std::vector<std::pair<CountKey, long long>> counts;
    std::vector<SplitListing> splits;
    std::uint64_t content_hash = 0;

    long long count_for(const std::string& split, Flavor flavor, int height, Target target) const;
    const SplitListing* split_listing(std::string_view name) const;
};

std::string serialize_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(std::string_view text);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& root);
DatasetManifest read_manifest(const std::filesystem::path& root);

// Reads, hash-checks and re-validates every scene of the split.
// Throws IoError (unknown split / unreadable file), HashMismatchError,
// SchemaError or ValidationError.
std::vector<Scenario> load_split(const std::filesystem::path& root, const std::string& split);

// Generates every planned scenario (optionally across jobs worker threads;
// results are independent of jobs), writes scene files and the manifest.
DatasetManifest generate_dataset(const DatasetConfig& config, const std::filesystem::path& root,
                                 int jobs = 1);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace stackkit
