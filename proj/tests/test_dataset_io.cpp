#include <filesystem>

#include "doctest.h"
#include "stackkit/dataset_io.hpp"
#include "stackkit/text_format.hpp"
#include "test_support.hpp"

using namespace stackkit;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const char* tag) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("stackkit_test_" + std::string(tag) + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

DatasetConfig tiny_config(std::uint64_t seed) {
    DatasetConfig config;
    config.flavors = {Flavor::CCS};
    config.heights = {2, 3};
    config.train_count_override = {{2, 8}, {3, 8}};
    config.split_fractions = {0.7, 0.35, 0.35};
    config.master_seed = seed;
    return config;
}

}  // namespace

TEST_CASE("scene round-trip is byte identical and field exact") {
    const auto specs = balanced_specs(Flavor::CCS, 60, 4242);
    for (const ScenarioSpec& spec : specs) {
        const Scenario scenario = generate(spec);
        const std::string bytes = serialize_scene(scenario);
        const Scenario parsed = parse_scene(bytes);
        CHECK(serialize_scene(parsed) == bytes);
        REQUIRE(parsed.stack.height() == scenario.stack.height());
        for (int i = 0; i < scenario.stack.height(); ++i) {
            // Exact binary round-trip of every number.
            CHECK(parsed.stack.objects[i].offset.x == scenario.stack.objects[i].offset.x);
            CHECK(parsed.stack.objects[i].offset.y == scenario.stack.objects[i].offset.y);
            CHECK(parsed.stack.objects[i].z_base == scenario.stack.objects[i].z_base);
            CHECK(parsed.stack.objects[i].shape.a == scenario.stack.objects[i].shape.a);
        }
        CHECK(parsed.spec.seed == scenario.spec.seed);
        CHECK(parsed.labels == scenario.labels);
    }
}

TEST_CASE("17-significant-digit round trip") {
    const double awkward[] = {0.1, 1.0 / 3.0, 2.5000000000000004, 1e-17, -0.0};
    for (const double v : awkward) {
        CHECK(parse_double(format_double(v)) == v);
    }
}

TEST_CASE("tampered stability flag is a hard validation error") {
    ScenarioSpec spec;
    spec.flavor = Flavor::CCS;
    spec.height = 3;
    spec.target = Target::UnstableVCOM;
    spec.violation_interface = 0;
    spec.seed = 5;
    const Scenario scenario = generate(spec);
    std::string bytes = serialize_scene(scenario);
    const std::string needle = "\nstable false\n";
    const std::size_t pos = bytes.find(needle);
    REQUIRE(pos != std::string::npos);
    bytes.replace(pos, needle.size(), "\nstable true\n");
    CHECK_THROWS_AS(parse_scene(bytes), ValidationError);
}

TEST_CASE("malformed scenes are schema errors") {
    CHECK_THROWS_AS(parse_scene("not a scene\n"), SchemaError);
    CHECK_THROWS_AS(parse_scene("stackkit-scene\nschema_version 99\n"), SchemaError);
    // Height below 2 (an empty object list cannot be a scenario).
    CHECK_THROWS_AS(
        parse_scene("stackkit-scene\nschema_version 1\nflavor ccs\nheight 0\ntarget stable\n"
                    "seed 0\nbackground 0\nlight 0\nstable true\n"),
        SchemaError);
}

TEST_CASE("corrupted z chain is a validation error") {
    ScenarioSpec spec;
    spec.flavor = Flavor::Cubes;
    spec.height = 2;
    spec.target = Target::Stable;
    spec.seed = 9;
    const Scenario scenario = generate(spec);
    std::string bytes = serialize_scene(scenario);
    const std::string key = "object.1.z_base ";
    const std::size_t pos = bytes.find(key);
    REQUIRE(pos != std::string::npos);
    const std::size_t eol = bytes.find('\n', pos);
    bytes.replace(pos, eol - pos, key + "0.5");
    CHECK_THROWS_AS(parse_scene(bytes), ValidationError);
}

TEST_CASE("dataset write, manifest counts and split loading") {
    const fs::path root = make_temp_dir("dataset");
    const DatasetConfig config = tiny_config(77);
    const DatasetManifest manifest = generate_dataset(config, root);

    // Counts in the manifest equal files on disk.
    for (const SplitListing& listing : manifest.splits) {
        long long on_disk = 0;
        if (fs::exists(root / listing.name)) {
            for (const auto& entry : fs::directory_iterator(root / listing.name)) {
                (void)entry;
                ++on_disk;
            }
        }
        CHECK(on_disk == static_cast<long long>(listing.entries.size()));
        long long counted = 0;
        for (const auto& [key, value] : manifest.counts) {
            if (key.split == listing.name) counted += value;
        }
        CHECK(counted == static_cast<long long>(listing.entries.size()));
    }
    CHECK(manifest.images_equivalent == manifest.total_scenarios * 16);

    const std::vector<Scenario> train = load_split(root, "train");
    CHECK(train.size() == manifest.split_listing("train")->entries.size());

    CHECK_THROWS_AS(load_split(root, "holdout"), IoError);

    // Corrupt one scene file: loading the split must fail the hash check.
    const std::string victim = manifest.split_listing("train")->entries.front().path;
    std::string bytes = read_file(root / victim);
    bytes += "# trailing corruption\n";
    write_file(root / victim, bytes);
    CHECK_THROWS_AS(load_split(root, "train"), HashMismatchError);

    fs::remove_all(root);
}

TEST_CASE("dataset generation is deterministic and job-count independent") {
    const fs::path root1 = make_temp_dir("det1");
    const fs::path root2 = make_temp_dir("det2");
    const fs::path root4 = make_temp_dir("det4");
    const DatasetConfig config = tiny_config(31);

    const DatasetManifest m1 = generate_dataset(config, root1, 1);
    const DatasetManifest m2 = generate_dataset(config, root2, 1);
    const DatasetManifest m4 = generate_dataset(config, root4, 4);

    CHECK(m1.content_hash == m2.content_hash);
    CHECK(m1.content_hash == m4.content_hash);
    CHECK(read_file(root1 / "manifest") == read_file(root2 / "manifest"));
    CHECK(read_file(root1 / "manifest") == read_file(root4 / "manifest"));
    for (const SplitListing& listing : m1.splits) {
        for (const ManifestEntry& entry : listing.entries) {
            CHECK(read_file(root1 / entry.path) == read_file(root4 / entry.path));
        }
    }
    fs::remove_all(root1);
    fs::remove_all(root2);
    fs::remove_all(root4);
}

TEST_CASE("manifest round trip") {
    const fs::path root = make_temp_dir("manifest");
    const DatasetManifest manifest = generate_dataset(tiny_config(8), root);
    const DatasetManifest parsed = read_manifest(root);
    CHECK(serialize_manifest(parsed) == serialize_manifest(manifest));
    CHECK(parsed.content_hash == manifest.content_hash);
    CHECK(parsed.count_for("train", Flavor::CCS, 2, Target::Stable) ==
          manifest.count_for("train", Flavor::CCS, 2, Target::Stable));
    fs::remove_all(root);
}

TEST_CASE("scenario_from_stack derives annotations for authored geometry") {
    const Stack t_bare =
        make_stack({StackEntry{Shape::cube(1.0), Orientation::HeightC, {0.5, 0.0}},
                    StackEntry{Shape::cuboid(2.0, 1.0, 0.5), Orientation::HeightC, {1.5, 0.0}}});
    const Scenario scenario = scenario_from_stack(t_bare, Flavor::CCS, 3);
    CHECK(scenario.spec.target == Target::UnstableVCOM);
    CHECK(scenario.spec.violation_interface == 0);
    const std::string bytes = serialize_scene(scenario);
    const Scenario parsed = parse_scene(bytes);
    CHECK(serialize_scene(parsed) == bytes);
}
