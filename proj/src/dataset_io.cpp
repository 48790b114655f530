#include "stackkit/dataset_io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "stackkit/text_format.hpp"

namespace stackkit {

namespace {

constexpr const char* kSceneMagic = "stackkit-scene";
constexpr const char* kManifestMagic = "stackkit-manifest";

std::vector<double> split_doubles(std::string_view text) {
    std::vector<double> values;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) values.push_back(parse_double(token));
    return values;
}

std::string dims_string(const Shape& shape) {
    switch (shape.kind) {
        case ShapeKind::Cuboid:
            return format_double(shape.a) + " " + format_double(shape.b) + " " +
                   format_double(shape.c);
        case ShapeKind::Cylinder:
            return format_double(shape.a) + " " + format_double(shape.b);
        case ShapeKind::Sphere: return format_double(shape.a);
    }
    return {};
}

Shape shape_from(ShapeKind kind, const std::vector<double>& dims, double density) {
    try {
        switch (kind) {
            case ShapeKind::Cuboid:
                if (dims.size() != 3) throw SchemaError("cuboid needs 3 dimensions");
                return Shape::cuboid(dims[0], dims[1], dims[2], density);
            case ShapeKind::Cylinder:
                if (dims.size() != 2) throw SchemaError("cylinder needs 2 dimensions");
                return Shape::cylinder(dims[0], dims[1], density);
            case ShapeKind::Sphere:
                if (dims.size() != 1) throw SchemaError("sphere needs 1 dimension");
                return Shape::sphere(dims[0], density);
        }
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("bad shape dimensions: ") + e.what());
    }
    throw SchemaError("unknown shape kind");
}

std::string object_key(int index, const char* field) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "object.%d.%s", index, field);
    return buf;
}

std::string label_key(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "label.%d", index);
    return buf;
}

}  // namespace

std::string serialize_scene(const Scenario& scenario) {
    KeyValueDoc doc;
    doc.add(kSceneMagic, "");
    doc.add_int("schema_version", kSceneSchemaVersion);
    doc.add("flavor", flavor_name(scenario.spec.flavor));
    doc.add_int("height", scenario.spec.height);
    doc.add("target", target_name(scenario.spec.target));
    if (scenario.spec.violation_interface) {
        doc.add_int("violation_interface", *scenario.spec.violation_interface);
    }
    doc.add("seed", std::to_string(scenario.spec.seed));
    if (scenario.spec.target == Target::StableCounterbalanced) {
        doc.add_bool("counterbalanced", scenario.counterbalanced);
    }
    doc.add_int("background", scenario.cosmetic.background_id);
    doc.add_int("light", scenario.cosmetic.light_id);

    for (int i = 0; i < scenario.spec.height; ++i) {
        const PlacedObject& obj = scenario.stack.objects[i];
        doc.add(object_key(i, "kind"), shape_kind_name(obj.shape.kind));
        doc.add(object_key(i, "dims"), dims_string(obj.shape));
        doc.add_double(object_key(i, "density"), obj.shape.density);
        doc.add(object_key(i, "orientation"), orientation_name(obj.orientation));
        doc.add(object_key(i, "offset"),
                format_double(obj.offset.x) + " " + format_double(obj.offset.y));
        doc.add_double(object_key(i, "z_base"), obj.z_base);
        const int color = i < static_cast<int>(scenario.cosmetic.object_colors.size())
                              ? scenario.cosmetic.object_colors[i]
                              : 0;
        doc.add_int(object_key(i, "color"), color);
    }

    doc.add_bool("stable", scenario.report.stable);
    if (scenario.report.violation) {
        doc.add("violation_type",
                scenario.report.violation->type == ViolationType::VPSF ? "vpsf" : "vcom");
        doc.add_int("violating_index", scenario.report.violation->violating_index);
        doc.add_int("first_to_fall", scenario.report.violation->first_to_fall_index);
    }
    for (int i = 0; i < scenario.spec.height; ++i) {
        doc.add(label_key(i), label_names(scenario.labels[i]));
    }
    return doc.serialize();
}

Scenario parse_scene(std::string_view text) {
    const KeyValueDoc doc = KeyValueDoc::parse(text);
    if (doc.entries().empty() || doc.entries().front().first != kSceneMagic) {
        throw SchemaError("not a scene file");
    }
    if (doc.get_int("schema_version") != kSceneSchemaVersion) {
        throw SchemaError("unknown scene schema version");
    }

    Scenario scenario;
    scenario.spec.flavor = parse_flavor(doc.get("flavor"));
    scenario.spec.height = static_cast<int>(doc.get_int("height"));
    if (scenario.spec.height < kMinHeight || scenario.spec.height > kMaxHeight) {
        throw SchemaError("scene height out of range");
    }
    scenario.spec.target = parse_target(doc.get("target"));
    if (doc.has("violation_interface")) {
        scenario.spec.violation_interface = static_cast<int>(doc.get_int("violation_interface"));
    }
    scenario.spec.seed = static_cast<std::uint64_t>(std::stoull(doc.get("seed")));
    if (scenario.spec.target == Target::StableCounterbalanced) {
        scenario.counterbalanced = doc.get_bool("counterbalanced");
    }
    scenario.cosmetic.background_id = static_cast<int>(doc.get_int("background"));
    scenario.cosmetic.light_id = static_cast<int>(doc.get_int("light"));

    std::vector<double> stored_z;
    for (int i = 0; i < scenario.spec.height; ++i) {
        const ShapeKind kind = parse_shape_kind(doc.get(object_key(i, "kind")));
        const std::vector<double> dims = split_doubles(doc.get(object_key(i, "dims")));
        const double density = doc.get_double(object_key(i, "density"));
        const Shape shape = shape_from(kind, dims, density);
        const Orientation orient = parse_orientation(doc.get(object_key(i, "orientation")));
        if (!orientation_valid(kind, orient)) throw SchemaError("orientation/kind mismatch");
        const std::vector<double> off = split_doubles(doc.get(object_key(i, "offset")));
        if (off.size() != 2) throw SchemaError("offset needs 2 coordinates");
        const double z = doc.get_double(object_key(i, "z_base"));
        scenario.stack.objects.push_back(PlacedObject{shape, orient, {off[0], off[1]}, z});
        stored_z.push_back(z);
        scenario.cosmetic.object_colors.push_back(
            static_cast<int>(doc.get_int(object_key(i, "color"))));
    }

    // Recompute the z chain from resting geometry.
    double z = 0.0;
    for (int i = 0; i < scenario.spec.height; ++i) {
        if (std::abs(stored_z[i] - z) > kZTol) {
            throw ValidationError("stored z_base disagrees with resting geometry");
        }
        z = scenario.stack.objects[i].top_z();
    }

    try {
        scenario.report = check_stability(scenario.stack, 0.0);
    } catch (const InvalidStackError& e) {
        throw ValidationError(std::string("scene is not a resting stack: ") + e.what());
    }
    scenario.labels = annotate(scenario.stack, scenario.report);

    if (doc.get_bool("stable") != scenario.report.stable) {
        throw ValidationError("stored stability flag contradicts the recomputed report");
    }
    if (scenario.report.violation) {
        const char* type =
            scenario.report.violation->type == ViolationType::VPSF ? "vpsf" : "vcom";
        if (doc.get("violation_type") != type ||
            doc.get_int("violating_index") != scenario.report.violation->violating_index ||
            doc.get_int("first_to_fall") != scenario.report.violation->first_to_fall_index) {
            throw ValidationError("stored violation annotation contradicts the recomputed report");
        }
    } else if (doc.has("violation_type")) {
        throw ValidationError("violation annotation on a stable scene");
    }
    for (int i = 0; i < scenario.spec.height; ++i) {
        if (parse_label_names(doc.get(label_key(i))) != scenario.labels[i]) {
            throw ValidationError("stored object labels contradict the recomputed report");
        }
    }
    return scenario;
}

Scenario scenario_from_stack(Stack stack, Flavor flavor, std::uint64_t seed) {
    Scenario scenario;
    scenario.stack = std::move(stack);
    scenario.spec.flavor = flavor;
    scenario.spec.height = scenario.stack.height();
    scenario.spec.seed = seed;
    scenario.report = check_stability(scenario.stack, 0.0);
    scenario.labels = annotate(scenario.stack, scenario.report);
    switch (classify_violation(scenario.report)) {
        case StabilityClass::Stable: scenario.spec.target = Target::Stable; break;
        case StabilityClass::VCOM: scenario.spec.target = Target::UnstableVCOM; break;
        case StabilityClass::VPSF: scenario.spec.target = Target::UnstableVPSF; break;
    }
    if (scenario.report.violation) {
        scenario.spec.violation_interface = scenario.report.violation->violating_index;
    }
    scenario.cosmetic.object_colors.assign(scenario.stack.objects.size(), 0);
    for (std::size_t i = 0; i < scenario.stack.objects.size(); ++i) {
        scenario.cosmetic.object_colors[i] = static_cast<int>(i % kColorCount);
    }
    return scenario;
}

long long DatasetManifest::count_for(const std::string& split, Flavor flavor, int height,
                                     Target target) const {
    for (const auto& [key, value] : counts) {
        if (key.split == split && key.flavor == flavor && key.height == height &&
            key.target == target) {
            return value;
        }
    }
    return 0;
}

const SplitListing* DatasetManifest::split_listing(std::string_view name) const {
    for (const SplitListing& listing : splits) {
        if (listing.name == name) return &listing;
    }
    return nullptr;
}

std::string serialize_manifest(const DatasetManifest& manifest) {
    KeyValueDoc doc;
    doc.add(kManifestMagic, "");
    doc.add_int("schema_version", manifest.schema_version);
    std::string flavors;
    for (const Flavor f : manifest.flavors) {
        if (!flavors.empty()) flavors += ' ';
        flavors += flavor_name(f);
    }
    doc.add("flavors", flavors);
    doc.add_double("scale", manifest.scale);
    doc.add("master_seed", std::to_string(manifest.master_seed));
    doc.add_int("views_per_scenario", manifest.views_per_scenario);
    doc.add_double("counterbalanced_fraction", manifest.counterbalanced_fraction);
    doc.add_double("delta_gen", manifest.delta_gen);
    doc.add_int("total_scenarios", manifest.total_scenarios);
    doc.add_int("images_equivalent", manifest.images_equivalent);
    for (const auto& [key, value] : manifest.counts) {
        std::ostringstream line;
        line << key.split << ' ' << flavor_name(key.flavor) << ' ' << key.height << ' '
             << target_name(key.target) << ' ' << value;
        doc.add("count", line.str());
    }
    for (const SplitListing& listing : manifest.splits) {
        doc.add("split", listing.name + " " + std::to_string(listing.entries.size()));
        for (const ManifestEntry& entry : listing.entries) {
            doc.add("file", entry.path + " " + hex64(entry.hash));
        }
    }
    doc.add("content_hash", hex64(manifest.content_hash));
    return doc.serialize();
}

DatasetManifest parse_manifest(std::string_view text) {
    const KeyValueDoc doc = KeyValueDoc::parse(text);
    if (doc.entries().empty() || doc.entries().front().first != kManifestMagic) {
        throw SchemaError("not a manifest file");
    }
    if (doc.get_int("schema_version") != kManifestSchemaVersion) {
        throw SchemaError("unknown manifest schema version");
    }

    DatasetManifest manifest;
    {
        std::istringstream in{doc.get("flavors")};
        std::string token;
        while (in >> token) manifest.flavors.push_back(parse_flavor(token));
    }
    manifest.scale = doc.get_double("scale");
    manifest.master_seed = static_cast<std::uint64_t>(std::stoull(doc.get("master_seed")));
    manifest.views_per_scenario = static_cast<int>(doc.get_int("views_per_scenario"));
    manifest.counterbalanced_fraction = doc.get_double("counterbalanced_fraction");
    manifest.delta_gen = doc.get_double("delta_gen");
    manifest.total_scenarios = doc.get_int("total_scenarios");
    manifest.images_equivalent = doc.get_int("images_equivalent");
    manifest.content_hash = parse_hex64(doc.get("content_hash"));

    SplitListing* current = nullptr;
    for (const auto& [key, value] : doc.entries()) {
        if (key == "count") {
            std::istringstream in{value};
            std::string split, flavor, target;
            int height = 0;
            long long n = 0;
            if (!(in >> split >> flavor >> height >> target >> n)) {
                throw SchemaError("malformed count line");
            }
            manifest.counts.push_back(
                {{split, parse_flavor(flavor), height, parse_target(target)}, n});
        } else if (key == "split") {
            std::istringstream in{value};
            std::string name;
            std::size_t n = 0;
            if (!(in >> name >> n)) throw SchemaError("malformed split line");
            manifest.splits.push_back({name, {}});
            manifest.splits.back().entries.reserve(n);
            current = &manifest.splits.back();
        } else if (key == "file") {
            if (current == nullptr) throw SchemaError("file line before any split line");
            const std::size_t sep = value.rfind(' ');
            if (sep == std::string::npos) throw SchemaError("malformed file line");
            current->entries.push_back(
                {value.substr(0, sep), parse_hex64(std::string_view(value).substr(sep + 1))});
        }
    }
    return manifest;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& root) {
    write_file(root / "manifest", serialize_manifest(manifest));
}

DatasetManifest read_manifest(const std::filesystem::path& root) {
    return parse_manifest(read_file(root / "manifest"));
}

std::vector<Scenario> load_split(const std::filesystem::path& root, const std::string& split) {
    const DatasetManifest manifest = read_manifest(root);
    const SplitListing* listing = manifest.split_listing(split);
    if (listing == nullptr) throw IoError("unknown split '" + split + "'");

    std::vector<Scenario> scenarios;
    scenarios.reserve(listing->entries.size());
    for (const ManifestEntry& entry : listing->entries) {
        const std::string bytes = read_file(root / entry.path);
        if (fnv1a64(bytes) != entry.hash) {
            throw HashMismatchError("content hash mismatch for '" + entry.path + "'");
        }
        scenarios.push_back(parse_scene(bytes));
    }
    return scenarios;
}

DatasetManifest generate_dataset(const DatasetConfig& config, const std::filesystem::path& root,
                                 int jobs) {
    const std::vector<PlannedScenario> plan = plan_dataset(config);
    std::vector<Scenario> scenarios(plan.size());

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(plan.size())));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t first_error = plan.size();
    std::exception_ptr error;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= plan.size()) return;
            try {
                scenarios[i] = generate(plan[i].spec, config.gen);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (i < first_error) {
                    first_error = i;
                    error = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    if (error) std::rethrow_exception(error);

    DatasetManifest manifest;
    manifest.flavors = config.flavors;
    manifest.scale = config.scale;
    manifest.master_seed = config.master_seed;
    manifest.views_per_scenario = config.views_per_scenario;
    manifest.counterbalanced_fraction = config.counterbalanced_fraction;
    manifest.delta_gen = config.gen.delta_gen;
    manifest.total_scenarios = static_cast<long long>(plan.size());
    manifest.images_equivalent = manifest.total_scenarios * config.views_per_scenario;

    for (const char* split : kSplitNames) manifest.splits.push_back({split, {}});
    std::filesystem::create_directories(root);
    for (const SplitListing& listing : manifest.splits) {
        std::filesystem::create_directories(root / listing.name);
    }

    std::string hash_input;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const std::string bytes = serialize_scene(scenarios[i]);
        write_file(root / plan[i].relative_path, bytes);
        const ManifestEntry entry{plan[i].relative_path, fnv1a64(bytes)};
        manifest.splits[plan[i].split_index].entries.push_back(entry);
        hash_input += entry.path;
        hash_input += ' ';
        hash_input += hex64(entry.hash);
        hash_input += '\n';
    }
    manifest.content_hash = fnv1a64(hash_input);

    // Canonical count table, in plan order buckets.
    for (const Flavor flavor : config.flavors) {
        for (int split = 0; split < 3; ++split) {
            for (const int height : config.heights) {
                for (const Target target : {Target::Stable, Target::StableCounterbalanced,
                                            Target::UnstableVCOM, Target::UnstableVPSF}) {
                    long long n = 0;
                    for (std::size_t i = 0; i < plan.size(); ++i) {
                        const ScenarioSpec& spec = plan[i].spec;
                        if (plan[i].split_index == split && spec.flavor == flavor &&
                            spec.height == height && spec.target == target) {
                            ++n;
                        }
                    }
                    if (n > 0) {
                        manifest.counts.push_back(
                            {{kSplitNames[split], flavor, height, target}, n});
                    }
                }
            }
        }
    }

    write_manifest(manifest, root);
    return manifest;
}

}  // namespace stackkit
