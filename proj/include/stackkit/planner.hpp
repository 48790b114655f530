#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stackkit/stackability.hpp"

namespace stackkit {

enum class StepOutcome { Accepted, Skipped, Collapse };

struct EpisodeStep {
    std::size_t pool_index = 0;
    Orientation orientation = Orientation::Only;
    Vec2 offset;
    double score = 0.0;
    StepOutcome outcome = StepOutcome::Accepted;
};

struct StackingEpisode {
    // Inputs.
    std::vector<Shape> pool;
    AnnealingConfig cfg;
    double spawn_height = 0.5;     // clearance above the tower while sampling
    double placement_noise = 0.0;  // actuation noise applied after a decision
    std::uint64_t seed = 0;

    // Outputs.
    std::vector<EpisodeStep> log;
    Stack final_stack;
    int achieved_height = 0;  // objects standing before the first collapse
    bool collapsed = false;
};

// Greedy construction: rank the pool by stackability (fixing each object's
// best orientation), place the first object at the scene centre, then anneal
// every queued object onto the tower. Scores below 0.5 put the object aside
// permanently; accepted placements are committed with actuation noise and
// ground-truth checked. A collapse ends the episode.
void run_stacking(StackingEpisode& episode, const StabilityPredictor& predictor);

// Re-executes the logged placements and reports whether every recorded
// outcome reproduces.
bool replay_episode(const StackingEpisode& episode);

std::string serialize_episode(const StackingEpisode& episode);
StackingEpisode parse_episode(std::string_view text);

struct BalanceTask {
    // Inputs: an unstable (VCOM) stack treated as frozen, plus the
    // counterweight to place on the topmost object's upper face.
    Stack frozen_stack;
    Shape counterweight;
    Orientation cw_orientation = Orientation::HeightC;
    std::uint64_t seed = 0;

    // Outputs.
    Vec2 offset;
    double score = 0.0;
    bool success = false;
    bool feasible = true;         // grid-certified when the search failed
    bool precondition_ok = true;  // input really was an unstable VCOM stack
};

// Multi-start annealing search for a counterweight placement maximizing the
// predictor score of the full unfrozen stack; success is ground-truth
// stability of the committed placement. When the search fails, an exhaustive
// grid check certifies whether any stable placement exists at all
// (feasible = false flags an impossible task).
void run_balance(BalanceTask& task, const StabilityPredictor& predictor,
                 const AnnealingConfig& config);

// Ground-truth grid search over counterweight positions (step in world
// units). Returns true and the first stable position found, if any.
bool grid_feasible(const Stack& frozen, const Shape& counterweight, Orientation orientation,
                   double step = 0.02, Vec2* found = nullptr);

}  // namespace stackkit
