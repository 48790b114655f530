#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "stackkit/predictor.hpp"

namespace stackkit {

struct AnnealingConfig {
    int iterations = 64;
    double initial_temp = 1.0;
    double cooling = 0.92;
    double proposal_std = 0.1;
    // Search disk radius around the support axis; 0 selects the default
    // base half-extent + top half-extent, which always covers the feasible
    // overlap region.
    double search_radius = 0.0;
    std::uint64_t seed = 0;
};

struct PlacementResult {
    Vec2 offset;
    double score = 0.0;
};

// Predictor score for the candidate resting on top of the stack; 0 when the
// candidate cannot rest there at all.
double placement_score(const Stack& below, const Shape& top, Orientation orientation, Vec2 offset,
                       const StabilityPredictor& predictor);

// Simulated annealing over (x, y) in a disk around the top object's axis:
// Gaussian proposals, accept when not worse or with probability
// exp((s' - s) / T_k), T_k = T0 * cooling^k. Returns the best visited state.
PlacementResult anneal_placement(const Stack& below, const Shape& top, Orientation orientation,
                                 const StabilityPredictor& predictor, const AnnealingConfig& config,
                                 std::optional<Vec2> start = {});

// Two-object convenience form: the base alone on the ground.
PlacementResult anneal_placement(const PlacedObject& base, const Shape& top,
                                 Orientation orientation, const StabilityPredictor& predictor,
                                 const AnnealingConfig& config);

// Mean over perturbed base positions and pool objects of the best achievable
// placement score on the base ("how well can this object support the
// others"). Pool objects use their own best orientation, resolved against the
// unperturbed base. Throws EmptyPoolError.
double stackability_score(const Shape& base_shape, Orientation base_orientation,
                          const std::vector<Shape>& others, const StabilityPredictor& predictor,
                          const AnnealingConfig& config, int perturbations = 4);

struct RankedObject {
    std::size_t pool_index = 0;
    Orientation best_orientation = Orientation::Only;
    double score = 0.0;
    double support_area = 0.0;  // horizontal projection area in best orientation
    std::map<Orientation, double> per_orientation;
};

struct StackabilityResult {
    // Non-increasing in score; ties broken by larger projected support area,
    // then by pool index.
    std::vector<RankedObject> ranking;
};

StackabilityResult rank_pool(const std::vector<Shape>& pool, const StabilityPredictor& predictor,
                             const AnnealingConfig& config, int perturbations = 4);

double projection_area(const Shape& shape, Orientation orientation);

}  // namespace stackkit
