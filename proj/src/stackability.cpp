#include "stackkit/stackability.hpp"

#include <algorithm>
#include <cmath>

#include "stackkit/rng.hpp"

namespace stackkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_half_extent(const PlacedObject& obj) {
    const Vec2 h = obj.horizontal_half_extents();
    return std::max(h.x, h.y);
}

Vec2 clamp_to_disk(Vec2 p, Vec2 center, double radius) {
    const Vec2 d = p - center;
    const double r = norm(d);
    if (r <= radius || r == 0.0) return p;
    return center + (radius / r) * d;
}

}  // namespace

double placement_score(const Stack& below, const Shape& top, Orientation orientation, Vec2 offset,
                       const StabilityPredictor& predictor) {
    Stack candidate = below;
    const double z = below.objects.empty() ? 0.0 : below.objects.back().top_z();
    candidate.objects.push_back(PlacedObject{top, orientation, offset, z});
    try {
        return predictor.predict(candidate);
    } catch (const Error&) {
        return 0.0;  // cannot rest there
    }
}

PlacementResult anneal_placement(const Stack& below, const Shape& top, Orientation orientation,
                                 const StabilityPredictor& predictor, const AnnealingConfig& config,
                                 std::optional<Vec2> start) {
    const PlacedObject& base = below.objects.back();
    const PlacedObject top_placed{top, orientation, base.offset, base.top_z()};
    const double radius = config.search_radius > 0.0
                              ? config.search_radius
                              : max_half_extent(base) + max_half_extent(top_placed);
    const Vec2 center = base.offset;

    Rng rng(mix_seed(config.seed, 0xa27ea1ull));
    Vec2 cur = clamp_to_disk(start.value_or(center), center, radius);
    double cur_score = placement_score(below, top, orientation, cur, predictor);
    PlacementResult best{cur, cur_score};

    double temp = config.initial_temp;
    for (int k = 0; k < config.iterations; ++k) {
        Vec2 proposal{cur.x + config.proposal_std * rng.normal(),
                      cur.y + config.proposal_std * rng.normal()};
        proposal = clamp_to_disk(proposal, center, radius);
        const double score = placement_score(below, top, orientation, proposal, predictor);
        if (score > best.score) best = {proposal, score};
        bool accept = score >= cur_score;
        if (!accept && temp > 1e-12) {
            accept = rng.uniform() < std::exp((score - cur_score) / temp);
        }
        if (accept) {
            cur = proposal;
            cur_score = score;
        }
        temp *= config.cooling;
    }
    return best;
}

PlacementResult anneal_placement(const PlacedObject& base, const Shape& top,
                                 Orientation orientation, const StabilityPredictor& predictor,
                                 const AnnealingConfig& config) {
    Stack below;
    below.objects.push_back(base);
    return anneal_placement(below, top, orientation, predictor, config);
}

double stackability_score(const Shape& base_shape, Orientation base_orientation,
                          const std::vector<Shape>& others, const StabilityPredictor& predictor,
                          const AnnealingConfig& config, int perturbations) {
    if (others.empty()) throw EmptyPoolError("stackability needs at least one other object");
    const int p_count = std::max(1, perturbations);

    const PlacedObject base{base_shape, base_orientation, {0.0, 0.0}, 0.0};

    // Preliminary pass: best orientation per pool object on the fixed base.
    std::vector<Orientation> best_orient(others.size());
    for (std::size_t i = 0; i < others.size(); ++i) {
        double best = -1.0;
        double best_area = 0.0;
        for (const Orientation o : orientations_for(others[i].kind)) {
            AnnealingConfig child = config;
            child.seed = mix_seed(config.seed, 0x11000 + i * 8 + static_cast<int>(o));
            const double s = anneal_placement(base, others[i], o, predictor, child).score;
            const double area = projection_area(others[i], o);
            if (s > best || (s == best && area > best_area)) {
                best = s;
                best_area = area;
                best_orient[i] = o;
            }
        }
    }

    Rng perturb_rng(mix_seed(config.seed, 0x9e55ull));
    double sum = 0.0;
    for (int p = 0; p < p_count; ++p) {
        PlacedObject perturbed = base;
        perturbed.offset.x += config.proposal_std * perturb_rng.normal();
        perturbed.offset.y += config.proposal_std * perturb_rng.normal();
        for (std::size_t i = 0; i < others.size(); ++i) {
            AnnealingConfig child = config;
            child.seed = mix_seed(config.seed, 0x22000 + p * 1024 + i);
            sum += anneal_placement(perturbed, others[i], best_orient[i], predictor, child).score;
        }
    }
    return sum / (static_cast<double>(p_count) * static_cast<double>(others.size()));
}

StackabilityResult rank_pool(const std::vector<Shape>& pool, const StabilityPredictor& predictor,
                             const AnnealingConfig& config, int perturbations) {
    StackabilityResult result;
    result.ranking.reserve(pool.size());

    for (std::size_t i = 0; i < pool.size(); ++i) {
        std::vector<Shape> others;
        others.reserve(pool.size() - 1);
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (j != i) others.push_back(pool[j]);
        }

        RankedObject ranked;
        ranked.pool_index = i;
        double best = -1.0;
        double best_area = 0.0;
        for (const Orientation o : orientations_for(pool[i].kind)) {
            AnnealingConfig child = config;
            child.seed = mix_seed(config.seed, 0x33000 + i * 8 + static_cast<int>(o));
            const double s =
                stackability_score(pool[i], o, others, predictor, child, perturbations);
            ranked.per_orientation[o] = s;
            const double area = projection_area(pool[i], o);
            if (s > best || (s == best && area > best_area)) {
                best = s;
                best_area = area;
                ranked.best_orientation = o;
            }
        }
        ranked.score = best;
        ranked.support_area = best_area;
        result.ranking.push_back(std::move(ranked));
    }

    std::stable_sort(result.ranking.begin(), result.ranking.end(),
                     [](const RankedObject& a, const RankedObject& b) {
                         if (a.score != b.score) return a.score > b.score;
                         if (a.support_area != b.support_area) {
                             return a.support_area > b.support_area;
                         }
                         return a.pool_index < b.pool_index;
                     });
    return result;
}

double projection_area(const Shape& shape, Orientation orientation) {
    const PlacedObject obj{shape, orientation, {0.0, 0.0}, 0.0};
    switch (shape.kind) {
        case ShapeKind::Cuboid: {
            const Vec2 h = obj.horizontal_half_extents();
            return 4.0 * h.x * h.y;
        }
        case ShapeKind::Cylinder:
            if (orientation == Orientation::SidewaysX) {
                return 2.0 * shape.radius() * shape.cylinder_height();
            }
            return kPi * shape.radius() * shape.radius();
        case ShapeKind::Sphere: return kPi * shape.radius() * shape.radius();
    }
    return 0.0;
}

}  // namespace stackkit
