// stackkit command line: dataset generation, stability checking, predictor
// training/evaluation, stackability ranking, stacking and counterbalancing
// episodes, and SVG scene rendering.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stackkit/dataset_io.hpp"
#include "stackkit/planner.hpp"
#include "stackkit/render_svg.hpp"
#include "stackkit/rng.hpp"
#include "stackkit/text_format.hpp"

namespace fs = std::filesystem;
using namespace stackkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnstable = 2;

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    int jobs = 1;
};

void print_config_line(const std::string& key, const std::string& value) {
    std::cout << "config: " << key << " " << value << "\n";
}

std::vector<Shape> parse_pool(const std::string& spec, int spheres, std::uint64_t seed) {
    const std::size_t sep = spec.find(':');
    if (sep == std::string::npos) throw SchemaError("pool spec must look like ccs:12");
    const std::string kind = spec.substr(0, sep);
    const int count = static_cast<int>(parse_int(spec.substr(sep + 1)));
    if (count < 1) throw SchemaError("pool must contain at least one object");

    Rng rng(mix_seed(seed, 0x9001ull));
    std::vector<Shape> pool;
    pool.reserve(count);
    if (kind == "cubes") {
        for (int i = 0; i < count; ++i) pool.push_back(Shape::cube(rng.uniform(0.3, 0.9)));
    } else if (kind == "cuboids") {
        for (int i = 0; i < count; ++i) {
            pool.push_back(Shape::cuboid(rng.uniform(0.3, 1.1), rng.uniform(0.3, 1.1),
                                         rng.uniform(0.3, 1.1)));
        }
    } else if (kind == "ccs") {
        if (spheres > count) throw SchemaError("more spheres than pool slots");
        for (int i = 0; i < count - spheres; ++i) {
            if (rng.coin(0.6)) {
                pool.push_back(Shape::cuboid(rng.uniform(0.3, 1.1), rng.uniform(0.3, 1.1),
                                             rng.uniform(0.3, 1.1)));
            } else {
                pool.push_back(Shape::cylinder(rng.uniform(0.15, 0.4), rng.uniform(0.3, 0.9)));
            }
        }
        for (int i = 0; i < spheres; ++i) pool.push_back(Shape::sphere(rng.uniform(0.15, 0.35)));
    } else {
        throw SchemaError("unknown pool kind '" + kind + "' (cubes, cuboids, ccs)");
    }
    return pool;
}

std::vector<double> parse_dims(const std::string& text) {
    std::vector<double> dims;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t sep = text.find('x', pos);
        if (sep == std::string::npos) sep = text.size();
        dims.push_back(parse_double(text.substr(pos, sep - pos)));
        pos = sep + 1;
    }
    return dims;
}

std::pair<Shape, Orientation> parse_counterweight(const std::string& spec) {
    const std::size_t sep = spec.find(':');
    if (sep == std::string::npos) {
        throw SchemaError("counterweight spec must look like cuboid:2x1x1");
    }
    const std::string kind = spec.substr(0, sep);
    const std::vector<double> dims = parse_dims(spec.substr(sep + 1));
    if (kind == "cube" && dims.size() == 1) {
        return {Shape::cube(dims[0]), Orientation::HeightC};
    }
    if (kind == "cuboid" && dims.size() == 3) {
        return {Shape::cuboid(dims[0], dims[1], dims[2]), Orientation::HeightC};
    }
    if (kind == "cylinder" && dims.size() == 2) {
        return {Shape::cylinder(dims[0], dims[1]), Orientation::Upright};
    }
    if (kind == "sphere" && dims.size() == 1) {
        return {Shape::sphere(dims[0]), Orientation::Only};
    }
    throw SchemaError("malformed counterweight spec '" + spec + "'");
}

std::unique_ptr<StabilityPredictor> make_predictor(const std::string& spec, std::uint64_t seed) {
    if (spec == "oracle") return std::make_unique<OraclePredictor>();
    if (spec.rfind("noisy:", 0) == 0) {
        const double sigma = parse_double(spec.substr(6));
        return std::make_unique<NoisyOraclePredictor>(sigma, mix_seed(seed, 0x401ull));
    }
    if (spec.rfind("model:", 0) == 0) {
        return std::make_unique<LogisticPredictor>(load_model(spec.substr(6)),
                                                   mix_seed(seed, 0x402ull));
    }
    throw SchemaError("unknown predictor '" + spec + "' (oracle, noisy:SIGMA, model:PATH)");
}

// --- generate ---------------------------------------------------------------

struct GenerateOpts {
    std::string flavor = "all";
    double scale = 1.0;
    std::string heights;
    std::string counts;
    std::string splits;
    std::string target;
    double cb_fraction = 0.2;
};

int cmd_generate(const GlobalOpts& global, const GenerateOpts& opts) {
    DatasetConfig config;
    config.master_seed = global.seed;
    config.scale = opts.scale;
    config.counterbalanced_fraction = opts.cb_fraction;

    if (opts.flavor == "all") config.flavors = {Flavor::CCS, Flavor::Cubes};
    else config.flavors = {parse_flavor(opts.flavor)};

    if (!opts.heights.empty()) {
        config.heights.clear();
        std::istringstream in{opts.heights};
        std::string token;
        while (std::getline(in, token, ',')) {
            config.heights.push_back(static_cast<int>(parse_int(token)));
        }
    }
    if (!opts.counts.empty()) {
        std::istringstream in{opts.counts};
        std::string token;
        while (std::getline(in, token, ',')) {
            const std::size_t eq = token.find('=');
            if (eq == std::string::npos) throw SchemaError("counts must look like 2=100,3=50");
            config.train_count_override[static_cast<int>(parse_int(token.substr(0, eq)))] =
                static_cast<int>(parse_int(token.substr(eq + 1)));
        }
    }
    if (!opts.splits.empty()) {
        std::istringstream in{opts.splits};
        std::string token;
        int i = 0;
        while (std::getline(in, token, ',') && i < 3) {
            config.split_fractions[i++] = parse_double(token);
        }
    }
    if (!opts.target.empty()) {
        if (opts.target == "stable") config.only_target = Target::Stable;
        else if (opts.target == "counterbalanced") config.only_target = Target::StableCounterbalanced;
        else if (opts.target == "vcom") config.only_target = Target::UnstableVCOM;
        else if (opts.target == "vpsf") config.only_target = Target::UnstableVPSF;
        else throw SchemaError("unknown target '" + opts.target + "'");
    }

    print_config_line("flavor", opts.flavor);
    print_config_line("scale", format_double(config.scale));
    print_config_line("cb-fraction", format_double(config.counterbalanced_fraction));
    print_config_line("target", opts.target.empty() ? "mixed" : opts.target);

    const fs::path root = global.out_dir;
    const DatasetManifest manifest = generate_dataset(config, root, global.jobs);

    for (const char* split : kSplitNames) {
        std::cout << "split " << split << ":\n";
        for (const Flavor flavor : config.flavors) {
            for (const int height : config.heights) {
                long long stable = 0, cb = 0, vcom = 0, vpsf = 0;
                for (const auto& [key, value] : manifest.counts) {
                    if (key.split != split || key.flavor != flavor || key.height != height) {
                        continue;
                    }
                    switch (key.target) {
                        case Target::Stable: stable = value; break;
                        case Target::StableCounterbalanced: cb = value; break;
                        case Target::UnstableVCOM: vcom = value; break;
                        case Target::UnstableVPSF: vpsf = value; break;
                    }
                }
                const long long total = stable + cb + vcom + vpsf;
                if (total == 0) continue;
                std::printf("  %-5s h=%d  stable %5lld  counterbalanced %5lld  vcom %5lld  "
                            "vpsf %5lld  total %6lld\n",
                            flavor_name(flavor), height, stable, cb, vcom, vpsf, total);
            }
        }
    }
    std::cout << "total scenarios " << manifest.total_scenarios << "\n";
    std::cout << "images-equivalent " << manifest.images_equivalent << "\n";
    std::cout << "content hash " << hex64(manifest.content_hash) << "\n";
    return kExitOk;
}

// --- check ------------------------------------------------------------------

int cmd_check(const std::string& scene_path) {
    const Scenario scenario = parse_scene(read_file(scene_path));
    const StabilityReport& report = scenario.report;
    std::cout << "stack height " << scenario.stack.height() << "\n";
    for (const InterfaceCheck& chk : report.per_interface) {
        std::printf("interface %d: %s margin %+.6f %s\n", chk.interface_index,
                    chk.degenerate ? "degenerate" : "planar", chk.margin,
                    chk.satisfied ? "satisfied" : "VIOLATED");
    }
    std::cout << "stable: " << (report.stable ? "true" : "false") << "\n";
    if (report.violation) {
        std::printf("violation: %s at interface %d (violating object %d, first to fall %d)\n",
                    report.violation->type == ViolationType::VPSF ? "VPSF" : "VCOM",
                    report.violation->violating_index, report.violation->violating_index,
                    report.violation->first_to_fall_index);
        return kExitUnstable;
    }
    return kExitOk;
}

// --- train / eval -----------------------------------------------------------

struct TrainOpts {
    std::string data;
    double sigma_obs = 0.0;
    double lr = 0.5;
    int epochs = 300;
    int batch = 64;
    double l2 = 0.0;
    std::string model_out;
};

void dataset_features(const std::vector<Scenario>& scenarios, const FeatureConfig& config,
                      std::uint64_t seed, std::vector<std::vector<double>>& xs,
                      std::vector<int>& stable) {
    xs.clear();
    stable.clear();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        xs.push_back(extract_features(scenarios[i].stack, config, mix_seed(seed, i)));
        stable.push_back(scenarios[i].report.stable ? 1 : 0);
    }
}

double model_accuracy(const LogisticModel& model, const std::vector<std::vector<double>>& xs,
                      const std::vector<int>& stable) {
    if (xs.empty()) return 0.0;
    int correct = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const int pred = model.predict_stable(xs[i]) >= 0.5 ? 1 : 0;
        correct += pred == stable[i];
    }
    return static_cast<double>(correct) / static_cast<double>(xs.size());
}

int cmd_train(const GlobalOpts& global, const TrainOpts& opts) {
    print_config_line("data", opts.data);
    print_config_line("sigma-obs", format_double(opts.sigma_obs));
    print_config_line("lr", format_double(opts.lr));
    print_config_line("epochs", std::to_string(opts.epochs));
    print_config_line("batch", std::to_string(opts.batch));
    print_config_line("l2", format_double(opts.l2));

    FeatureConfig config;
    config.sigma_obs = opts.sigma_obs;

    const std::vector<Scenario> train = load_split(opts.data, "train");
    std::vector<std::vector<double>> xs;
    std::vector<int> stable;
    dataset_features(train, config, mix_seed(global.seed, 0x7217ull), xs, stable);

    TrainHyper hyper;
    hyper.lr = opts.lr;
    hyper.epochs = opts.epochs;
    hyper.batch = opts.batch;
    hyper.l2 = opts.l2;
    hyper.seed = global.seed;

    LogisticModel model;
    if (opts.epochs == 0) {
        model.feature_config = config;
        model.weights.assign(config.dimension(), 0.0);
    } else {
        const TrainResult result = train_logistic(xs, stable, config, hyper);
        model = result.model;
        std::printf("final training loss %.6f\n", result.loss_trace.back());
    }

    std::printf("train accuracy: %.1f%%\n", 100.0 * model_accuracy(model, xs, stable));
    for (const char* split : {"val", "test"}) {
        const std::vector<Scenario> held = load_split(opts.data, split);
        std::vector<std::vector<double>> hx;
        std::vector<int> hy;
        dataset_features(held, config, mix_seed(global.seed, fnv1a64(split)), hx, hy);
        std::printf("%s accuracy: %.1f%%\n", split, 100.0 * model_accuracy(model, hx, hy));
    }

    const fs::path out = opts.model_out.empty() ? fs::path(global.out_dir) / "stackkit.model"
                                                : fs::path(opts.model_out);
    save_model(model, out);
    std::cout << "model saved to " << out.string() << "\n";
    return kExitOk;
}

struct EvalOpts {
    std::string data;
    std::string split = "test";
    std::string model;
    std::string predictor;
};

int cmd_eval(const GlobalOpts& global, const EvalOpts& opts) {
    print_config_line("data", opts.data);
    print_config_line("split", opts.split);
    const std::vector<Scenario> scenarios = load_split(opts.data, opts.split);

    int correct = 0;
    if (!opts.predictor.empty()) {
        print_config_line("predictor", opts.predictor);
        const auto predictor = make_predictor(opts.predictor, global.seed);
        for (const Scenario& s : scenarios) {
            const int pred = predictor->predict(s.stack) >= 0.5 ? 1 : 0;
            correct += pred == (s.report.stable ? 1 : 0);
        }
    } else {
        if (opts.model.empty()) throw SchemaError("eval needs --model or --predictor");
        print_config_line("model", opts.model);
        const LogisticModel model = load_model(opts.model);
        std::vector<std::vector<double>> xs;
        std::vector<int> stable;
        dataset_features(scenarios, model.feature_config, mix_seed(global.seed, 0xe7a1ull), xs,
                         stable);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const int pred = model.predict_stable(xs[i]) >= 0.5 ? 1 : 0;
            correct += pred == stable[i];
        }
    }
    std::printf("accuracy: %.1f%%\n",
                100.0 * static_cast<double>(correct) / static_cast<double>(scenarios.size()));
    return kExitOk;
}

// --- rank / stack / balance -------------------------------------------------

struct SearchOpts {
    std::string pool = "ccs:12";
    int spheres = 2;
    std::string predictor = "oracle";
    int iterations = 64;
    double proposal_std = 0.1;
};

AnnealingConfig search_config(const GlobalOpts& global, const SearchOpts& opts) {
    AnnealingConfig cfg;
    cfg.iterations = opts.iterations;
    cfg.proposal_std = opts.proposal_std;
    cfg.seed = mix_seed(global.seed, 0x5ea9cull);
    return cfg;
}

int cmd_rank(const GlobalOpts& global, const SearchOpts& opts) {
    print_config_line("pool", opts.pool);
    print_config_line("predictor", opts.predictor);
    const std::vector<Shape> pool = parse_pool(opts.pool, opts.spheres, global.seed);
    const auto predictor = make_predictor(opts.predictor, global.seed);
    const StackabilityResult result = rank_pool(pool, *predictor, search_config(global, opts));

    std::printf("%-4s %-6s %-28s %-11s %-8s %s\n", "rank", "object", "shape", "orientation",
                "score", "area");
    for (std::size_t r = 0; r < result.ranking.size(); ++r) {
        const RankedObject& obj = result.ranking[r];
        const Shape& s = pool[obj.pool_index];
        char shape_desc[64];
        switch (s.kind) {
            case ShapeKind::Cuboid:
                std::snprintf(shape_desc, sizeof shape_desc, "cuboid %.2fx%.2fx%.2f", s.a, s.b,
                              s.c);
                break;
            case ShapeKind::Cylinder:
                std::snprintf(shape_desc, sizeof shape_desc, "cylinder r=%.2f h=%.2f", s.a, s.b);
                break;
            case ShapeKind::Sphere:
                std::snprintf(shape_desc, sizeof shape_desc, "sphere r=%.2f", s.a);
                break;
        }
        std::printf("%-4zu %-6zu %-28s %-11s %.4f   %.4f\n", r, obj.pool_index, shape_desc,
                    orientation_name(obj.best_orientation), obj.score, obj.support_area);
    }
    return kExitOk;
}

struct StackOpts {
    int episodes = 50;
    double sigma_place = 0.0;
    std::string summary;
};

int cmd_stack(const GlobalOpts& global, const SearchOpts& search, const StackOpts& opts) {
    print_config_line("pool", search.pool);
    print_config_line("predictor", search.predictor);
    print_config_line("episodes", std::to_string(opts.episodes));
    print_config_line("sigma-place", format_double(opts.sigma_place));

    const std::vector<Shape> pool = parse_pool(search.pool, search.spheres, global.seed);
    const auto predictor = make_predictor(search.predictor, global.seed);

    std::map<int, int> histogram;
    double height_sum = 0.0;
    for (int e = 0; e < opts.episodes; ++e) {
        StackingEpisode episode;
        episode.pool = pool;
        episode.cfg = search_config(global, search);
        episode.cfg.seed = mix_seed(global.seed, 0xe9150de + e);
        episode.placement_noise = opts.sigma_place;
        episode.seed = mix_seed(global.seed, 0x5eed + e);
        run_stacking(episode, *predictor);
        histogram[episode.achieved_height] += 1;
        height_sum += episode.achieved_height;
    }

    int max_count = 0;
    for (const auto& [h, count] : histogram) max_count = std::max(max_count, count);
    for (int h = 1; h <= static_cast<int>(pool.size()); ++h) {
        const int count = histogram.count(h) != 0 ? histogram.at(h) : 0;
        const int bar = max_count > 0 ? (40 * count) / max_count : 0;
        std::printf("height %2d: %4d %s\n", h, count, std::string(bar, '#').c_str());
    }
    const double mean = height_sum / opts.episodes;
    std::printf("mean height: %.2f\n", mean);

    if (!opts.summary.empty()) {
        KeyValueDoc doc;
        doc.add("stackkit-stack-summary", "");
        doc.add("pool", search.pool);
        doc.add("predictor", search.predictor);
        doc.add_int("episodes", opts.episodes);
        doc.add_double("sigma_place", opts.sigma_place);
        doc.add_double("mean_height", mean);
        for (const auto& [h, count] : histogram) {
            doc.add_int("histogram." + std::to_string(h), count);
        }
        write_file(opts.summary, doc.serialize());
        std::cout << "summary written to " << opts.summary << "\n";
    }
    return kExitOk;
}

struct BalanceOpts {
    std::string scene;
    std::string counterweight = "cuboid:2x1x1";
    std::string predictor = "oracle";
    int episodes = 1;
    int iterations = 128;
};

int cmd_balance(const GlobalOpts& global, const BalanceOpts& opts) {
    print_config_line("scene", opts.scene);
    print_config_line("counterweight", opts.counterweight);
    print_config_line("predictor", opts.predictor);
    print_config_line("episodes", std::to_string(opts.episodes));

    const Scenario scenario = parse_scene(read_file(opts.scene));
    const auto [cw_shape, cw_orient] = parse_counterweight(opts.counterweight);
    const auto predictor = make_predictor(opts.predictor, global.seed);

    AnnealingConfig cfg;
    cfg.iterations = opts.iterations;
    cfg.seed = mix_seed(global.seed, 0xba1a4cell);

    int successes = 0;
    bool any_precondition_failure = false;
    for (int e = 0; e < opts.episodes; ++e) {
        BalanceTask task;
        task.frozen_stack = scenario.stack;
        task.counterweight = cw_shape;
        task.cw_orientation = cw_orient;
        task.seed = mix_seed(global.seed, 0xba5e + e);
        run_balance(task, *predictor, cfg);
        if (!task.precondition_ok) {
            any_precondition_failure = true;
            break;
        }
        successes += task.success ? 1 : 0;
        if (opts.episodes == 1) {
            std::printf("counterweight offset (%.4f, %.4f) score %.3f -> %s\n", task.offset.x,
                        task.offset.y, task.score, task.success ? "success" : "failure");
            if (!task.success && !task.feasible) {
                std::cout << "task is infeasible: no stable placement exists\n";
            }
        }
    }
    if (any_precondition_failure) {
        std::cout << "precondition violation: scene is not an unstable VCOM stack\n";
        return kExitError;
    }
    if (opts.episodes > 1) {
        std::printf("counterweight %s: success %d/%d (%.1f%%)\n", opts.counterweight.c_str(),
                    successes, opts.episodes, 100.0 * successes / opts.episodes);
    }
    return kExitOk;
}

// --- render -----------------------------------------------------------------

int cmd_render(const std::string& scene_path, const std::string& view, std::string out_path) {
    const Scenario scenario = parse_scene(read_file(scene_path));
    const std::string svg = render_scene_svg(scenario, view);
    if (out_path.empty()) out_path = scene_path + "." + view + ".svg";
    write_file(out_path, svg);
    std::cout << "rendered " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stackkit: analytic stacking mechanics toolkit"};
    app.fallthrough();
    app.set_config("--config", "", "Config file (INI; flags override file values)");

    GlobalOpts global;
    app.add_option("--seed", global.seed, "Master seed")->envname("STACKKIT_SEED");
    app.add_option("--out-dir", global.out_dir, "Output directory");
    app.add_option("--jobs", global.jobs, "Worker threads (results are independent of this)");

    GenerateOpts gen_opts;
    CLI::App* gen = app.add_subcommand("generate", "Generate an annotated scenario dataset");
    gen->add_option("--flavor", gen_opts.flavor, "ccs, cubes or all");
    gen->add_option("--scale", gen_opts.scale, "Scale factor on the published counts");
    gen->add_option("--heights", gen_opts.heights, "Comma list of heights, e.g. 2,3");
    gen->add_option("--counts", gen_opts.counts, "Per-height train counts, e.g. 2=100,3=50");
    gen->add_option("--splits", gen_opts.splits, "Split fractions, e.g. 0.7,0.15,0.15");
    gen->add_option("--target", gen_opts.target,
                    "Restrict to one target: stable, counterbalanced, vcom, vpsf");
    gen->add_option("--cb-fraction", gen_opts.cb_fraction,
                    "Fraction of stable scenarios that counterbalance");

    std::string check_scene;
    CLI::App* check = app.add_subcommand("check", "Check the stability of a scene file");
    check->add_option("scene", check_scene, "Scene file")->required();

    TrainOpts train_opts;
    CLI::App* train = app.add_subcommand("train", "Train the logistic stability predictor");
    train->add_option("--data", train_opts.data, "Dataset root")->required();
    train->add_option("--sigma-obs", train_opts.sigma_obs, "Observation noise");
    train->add_option("--lr", train_opts.lr, "Learning rate");
    train->add_option("--epochs", train_opts.epochs, "Training epochs");
    train->add_option("--batch", train_opts.batch, "Mini-batch size");
    train->add_option("--l2", train_opts.l2, "L2 regularization");
    train->add_option("--model-out", train_opts.model_out, "Model output path");

    EvalOpts eval_opts;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a predictor on a split");
    eval->add_option("--data", eval_opts.data, "Dataset root")->required();
    eval->add_option("--split", eval_opts.split, "train, val or test");
    eval->add_option("--model", eval_opts.model, "Model file");
    eval->add_option("--predictor", eval_opts.predictor, "oracle, noisy:SIGMA or model:PATH");

    SearchOpts search_opts;
    CLI::App* rank = app.add_subcommand("rank", "Rank a pool by stackability");
    rank->add_option("--pool", search_opts.pool, "Pool spec: cubes:N, cuboids:N, ccs:N");
    rank->add_option("--spheres", search_opts.spheres, "Sphere count in a ccs pool");
    rank->add_option("--predictor", search_opts.predictor, "oracle, noisy:SIGMA or model:PATH");
    rank->add_option("--iterations", search_opts.iterations, "Annealing iterations");
    rank->add_option("--proposal-std", search_opts.proposal_std, "Proposal standard deviation");

    StackOpts stack_opts;
    CLI::App* stack = app.add_subcommand("stack", "Run greedy stacking episodes");
    stack->add_option("--pool", search_opts.pool, "Pool spec: cubes:N, cuboids:N, ccs:N");
    stack->add_option("--spheres", search_opts.spheres, "Sphere count in a ccs pool");
    stack->add_option("--predictor", search_opts.predictor, "oracle, noisy:SIGMA or model:PATH");
    stack->add_option("--iterations", search_opts.iterations, "Annealing iterations");
    stack->add_option("--episodes", stack_opts.episodes, "Episode count");
    stack->add_option("--sigma-place", stack_opts.sigma_place, "Actuation noise");
    stack->add_option("--summary", stack_opts.summary, "Machine-readable summary file");

    BalanceOpts balance_opts;
    CLI::App* balance = app.add_subcommand("balance", "Counterbalance a frozen unstable scene");
    balance->add_option("--scene", balance_opts.scene, "Frozen unstable scene")->required();
    balance->add_option("--counterweight", balance_opts.counterweight,
                        "cube:S, cuboid:AxBxC, cylinder:RxH or sphere:R");
    balance->add_option("--predictor", balance_opts.predictor,
                        "oracle, noisy:SIGMA or model:PATH");
    balance->add_option("--episodes", balance_opts.episodes, "Episode count");
    balance->add_option("--iterations", balance_opts.iterations, "Annealing iterations");

    std::string render_scene_path, render_view = "front", render_out;
    CLI::App* render = app.add_subcommand("render", "Render a scene to SVG");
    render->add_option("scene", render_scene_path, "Scene file")->required();
    render->add_option("--view", render_view, "front, side or top");
    render->add_option("--out", render_out, "Output SVG path");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        print_config_line("seed", std::to_string(global.seed));
        print_config_line("out-dir", global.out_dir);
        print_config_line("jobs", std::to_string(global.jobs));
        if (gen->parsed()) return cmd_generate(global, gen_opts);
        if (check->parsed()) return cmd_check(check_scene);
        if (train->parsed()) return cmd_train(global, train_opts);
        if (eval->parsed()) return cmd_eval(global, eval_opts);
        if (rank->parsed()) return cmd_rank(global, search_opts);
        if (stack->parsed()) return cmd_stack(global, search_opts, stack_opts);
        if (balance->parsed()) return cmd_balance(global, balance_opts);
        if (render->parsed()) return cmd_render(render_scene_path, render_view, render_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
