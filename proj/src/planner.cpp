#include "stackkit/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stackkit/rng.hpp"
#include "stackkit/scenegen.hpp"
#include "stackkit/text_format.hpp"

namespace stackkit {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // pi * (3 - sqrt(5))
constexpr double kScoreThreshold = 0.5;

double max_half_extent(const PlacedObject& obj) {
    const Vec2 h = obj.horizontal_half_extents();
    return std::max(h.x, h.y);
}

// Evenly spread deterministic points over a disk.
std::vector<Vec2> sunflower_points(Vec2 center, double radius, int count) {
    std::vector<Vec2> points;
    points.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double r = radius * std::sqrt((i + 0.5) / count);
        const double a = i * kGoldenAngle;
        points.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    return points;
}

}  // namespace

void run_stacking(StackingEpisode& episode, const StabilityPredictor& predictor) {
    episode.log.clear();
    episode.final_stack.objects.clear();
    episode.achieved_height = 0;
    episode.collapsed = false;
    if (episode.pool.empty()) return;

    AnnealingConfig rank_cfg = episode.cfg;
    rank_cfg.seed = mix_seed(episode.seed, 0x4a11cull);
    const StackabilityResult ranking = rank_pool(episode.pool, predictor, rank_cfg);

    Rng noise_rng(mix_seed(episode.seed, 0xac7ull));

    // First object at the scene centre.
    {
        const RankedObject& first = ranking.ranking.front();
        Stack single;
        single.objects.push_back(
            PlacedObject{episode.pool[first.pool_index], first.best_orientation, {0.0, 0.0}, 0.0});
        double score = 1.0;
        try {
            score = predictor.predict(single);
        } catch (const Error&) {
            score = 0.0;
        }
        episode.final_stack = single;
        episode.achieved_height = 1;
        episode.log.push_back(
            {first.pool_index, first.best_orientation, {0.0, 0.0}, score, StepOutcome::Accepted});
    }

    for (std::size_t r = 1; r < ranking.ranking.size(); ++r) {
        const RankedObject& queued = ranking.ranking[r];
        const Shape& shape = episode.pool[queued.pool_index];

        AnnealingConfig place_cfg = episode.cfg;
        place_cfg.seed = mix_seed(episode.seed, 0x9a000 + r);
        const PlacementResult best = anneal_placement(episode.final_stack, shape,
                                                      queued.best_orientation, predictor,
                                                      place_cfg);
        if (best.score < kScoreThreshold) {
            episode.log.push_back({queued.pool_index, queued.best_orientation, best.offset,
                                   best.score, StepOutcome::Skipped});
            continue;  // put aside for the rest of the process
        }

        Vec2 committed = best.offset;
        if (episode.placement_noise > 0.0) {
            committed.x += episode.placement_noise * noise_rng.normal();
            committed.y += episode.placement_noise * noise_rng.normal();
        }

        Stack attempt = episode.final_stack;
        attempt.objects.push_back(PlacedObject{shape, queued.best_orientation, committed,
                                               episode.final_stack.objects.back().top_z()});
        bool stable = false;
        try {
            stable = check_stability(attempt, 0.0).stable;
        } catch (const Error&) {
            stable = false;  // lost contact entirely: the object falls
        }
        if (!stable) {
            episode.collapsed = true;
            episode.final_stack = attempt;
            episode.log.push_back({queued.pool_index, queued.best_orientation, committed,
                                   best.score, StepOutcome::Collapse});
            return;
        }
        episode.final_stack = attempt;
        ++episode.achieved_height;
        episode.log.push_back({queued.pool_index, queued.best_orientation, committed, best.score,
                               StepOutcome::Accepted});
    }
}

bool replay_episode(const StackingEpisode& episode) {
    Stack stack;
    for (const EpisodeStep& step : episode.log) {
        if (step.outcome == StepOutcome::Skipped) continue;
        const double z = stack.objects.empty() ? 0.0 : stack.objects.back().top_z();
        stack.objects.push_back(
            PlacedObject{episode.pool[step.pool_index], step.orientation, step.offset, z});
        bool stable = false;
        try {
            stable = check_stability(stack, 0.0).stable;
        } catch (const Error&) {
            stable = false;
        }
        const bool expected_stable = step.outcome == StepOutcome::Accepted;
        if (stable != expected_stable) return false;
    }
    return true;
}

std::string serialize_episode(const StackingEpisode& episode) {
    KeyValueDoc doc;
    doc.add("stackkit-episode", "");
    doc.add_int("schema_version", 1);
    doc.add("seed", std::to_string(episode.seed));
    doc.add_double("spawn_height", episode.spawn_height);
    doc.add_double("placement_noise", episode.placement_noise);
    doc.add_int("pool_size", static_cast<long long>(episode.pool.size()));
    for (std::size_t i = 0; i < episode.pool.size(); ++i) {
        const Shape& s = episode.pool[i];
        std::ostringstream line;
        line << shape_kind_name(s.kind) << ' ' << format_double(s.a) << ' ' << format_double(s.b)
             << ' ' << format_double(s.c) << ' ' << format_double(s.density);
        doc.add("pool." + std::to_string(i), line.str());
    }
    doc.add_int("steps", static_cast<long long>(episode.log.size()));
    for (std::size_t i = 0; i < episode.log.size(); ++i) {
        const EpisodeStep& step = episode.log[i];
        const char* outcome = step.outcome == StepOutcome::Accepted ? "accepted"
                              : step.outcome == StepOutcome::Skipped ? "skipped"
                                                                     : "collapse";
        std::ostringstream line;
        line << step.pool_index << ' ' << orientation_name(step.orientation) << ' '
             << format_double(step.offset.x) << ' ' << format_double(step.offset.y) << ' '
             << format_double(step.score) << ' ' << outcome;
        doc.add("step." + std::to_string(i), line.str());
    }
    doc.add_int("achieved_height", episode.achieved_height);
    doc.add_bool("collapsed", episode.collapsed);
    return doc.serialize();
}

StackingEpisode parse_episode(std::string_view text) {
    const KeyValueDoc doc = KeyValueDoc::parse(text);
    if (doc.entries().empty() || doc.entries().front().first != "stackkit-episode") {
        throw SchemaError("not an episode file");
    }
    if (doc.get_int("schema_version") != 1) throw SchemaError("unknown episode schema version");
    StackingEpisode episode;
    episode.seed = static_cast<std::uint64_t>(std::stoull(doc.get("seed")));
    episode.spawn_height = doc.get_double("spawn_height");
    episode.placement_noise = doc.get_double("placement_noise");
    const long long pool_size = doc.get_int("pool_size");
    for (long long i = 0; i < pool_size; ++i) {
        std::istringstream in{doc.get("pool." + std::to_string(i))};
        std::string kind;
        double a = 0, b = 0, c = 0, density = 1;
        if (!(in >> kind >> a >> b >> c >> density)) throw SchemaError("malformed pool entry");
        Shape shape;
        shape.kind = parse_shape_kind(kind);
        shape.a = a;
        shape.b = b;
        shape.c = c;
        shape.density = density;
        episode.pool.push_back(shape);
    }
    const long long steps = doc.get_int("steps");
    for (long long i = 0; i < steps; ++i) {
        std::istringstream in{doc.get("step." + std::to_string(i))};
        std::size_t pool_index = 0;
        std::string orient, outcome;
        double x = 0, y = 0, score = 0;
        if (!(in >> pool_index >> orient >> x >> y >> score >> outcome)) {
            throw SchemaError("malformed step entry");
        }
        EpisodeStep step;
        step.pool_index = pool_index;
        step.orientation = parse_orientation(orient);
        step.offset = {x, y};
        step.score = score;
        if (outcome == "accepted") step.outcome = StepOutcome::Accepted;
        else if (outcome == "skipped") step.outcome = StepOutcome::Skipped;
        else if (outcome == "collapse") step.outcome = StepOutcome::Collapse;
        else throw SchemaError("unknown step outcome: " + outcome);
        episode.log.push_back(step);
    }
    episode.achieved_height = static_cast<int>(doc.get_int("achieved_height"));
    episode.collapsed = doc.get_bool("collapsed");
    return episode;
}

void run_balance(BalanceTask& task, const StabilityPredictor& predictor,
                 const AnnealingConfig& config) {
    task.success = false;
    task.precondition_ok = true;
    task.feasible = true;

    StabilityReport report;
    try {
        report = check_stability(task.frozen_stack, 0.0);
    } catch (const Error&) {
        task.precondition_ok = false;
        return;
    }
    if (report.stable || classify_violation(report) != StabilityClass::VCOM) {
        task.precondition_ok = false;
        return;
    }

    const PlacedObject& top = task.frozen_stack.objects.back();
    const PlacedObject cw_placed{task.counterweight, task.cw_orientation, top.offset, top.top_z()};
    const double radius = config.search_radius > 0.0
                              ? config.search_radius
                              : max_half_extent(top) + max_half_extent(cw_placed);

    // Deterministic coarse probe of the search disk, then annealing from the
    // most promising starts. Binary predictor scores make a single walk from
    // the centre unreliable; the probe guarantees coverage.
    const int probe_count =
        std::clamp(static_cast<int>(3.2 * (radius / 0.045) * (radius / 0.045)), 128, 8192);
    const std::vector<Vec2> probes = sunflower_points(top.offset, radius, probe_count);

    PlacementResult best{top.offset,
                         placement_score(task.frozen_stack, task.counterweight,
                                         task.cw_orientation, top.offset, predictor)};
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double s = placement_score(task.frozen_stack, task.counterweight,
                                         task.cw_orientation, probes[i], predictor);
        if (s > best.score) best = {probes[i], s};
        scored.emplace_back(s, i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });

    const std::size_t starts = std::min<std::size_t>(6, scored.size());
    for (std::size_t k = 0; k < starts; ++k) {
        AnnealingConfig child = config;
        child.seed = mix_seed(mix_seed(task.seed, config.seed), 0xba1 + k);
        child.search_radius = radius;
        const PlacementResult r =
            anneal_placement(task.frozen_stack, task.counterweight, task.cw_orientation, predictor,
                             child, probes[scored[k].second]);
        if (r.score > best.score) best = r;
    }

    task.offset = best.offset;
    task.score = best.score;

    Stack attempt = task.frozen_stack;
    attempt.objects.push_back(
        PlacedObject{task.counterweight, task.cw_orientation, best.offset, top.top_z()});
    try {
        task.success = check_stability(attempt, 0.0).stable;
    } catch (const Error&) {
        task.success = false;
    }
    if (!task.success) {
        task.feasible = grid_feasible(task.frozen_stack, task.counterweight, task.cw_orientation);
    }
}

bool grid_feasible(const Stack& frozen, const Shape& counterweight, Orientation orientation,
                   double step, Vec2* found) {
    const PlacedObject& top = frozen.objects.back();
    const PlacedObject cw_placed{counterweight, orientation, top.offset, top.top_z()};
    const Vec2 top_half = top.horizontal_half_extents();
    const Vec2 cw_half = cw_placed.horizontal_half_extents();
    const double x0 = top.offset.x - top_half.x - cw_half.x;
    const double x1 = top.offset.x + top_half.x + cw_half.x;
    const double y0 = top.offset.y - top_half.y - cw_half.y;
    const double y1 = top.offset.y + top_half.y + cw_half.y;

    const int nx = static_cast<int>(std::floor((x1 - x0) / step));
    const int ny = static_cast<int>(std::floor((y1 - y0) / step));
    Stack attempt = frozen;
    attempt.objects.push_back(cw_placed);
    for (int ix = 0; ix <= nx; ++ix) {
        for (int iy = 0; iy <= ny; ++iy) {
            attempt.objects.back().offset = {x0 + ix * step, y0 + iy * step};
            try {
                if (check_stability(attempt, 0.0).stable) {
                    if (found != nullptr) *found = attempt.objects.back().offset;
                    return true;
                }
            } catch (const Error&) {
            }
        }
    }
    return false;
}

}  // namespace stackkit
