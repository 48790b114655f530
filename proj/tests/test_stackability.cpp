#include <cmath>

#include "doctest.h"
#include "stackkit/stackability.hpp"
#include "test_support.hpp"

using namespace stackkit;

namespace {

AnnealingConfig test_config(std::uint64_t seed, int iterations = 64) {
    AnnealingConfig cfg;
    cfg.iterations = iterations;
    cfg.seed = seed;
    return cfg;
}

// Dense-grid search oracle over the same disk the annealer uses.
double grid_best_score(const PlacedObject& base, const Shape& top, Orientation orient,
                       const StabilityPredictor& predictor, double step = 0.02) {
    Stack below;
    below.objects.push_back(base);
    const PlacedObject top_probe{top, orient, base.offset, base.top_z()};
    const Vec2 bh = base.horizontal_half_extents();
    const Vec2 th = top_probe.horizontal_half_extents();
    const double radius = std::max(bh.x, bh.y) + std::max(th.x, th.y);
    double best = 0.0;
    for (double dx = -radius; dx <= radius; dx += step) {
        for (double dy = -radius; dy <= radius; dy += step) {
            if (dx * dx + dy * dy > radius * radius) continue;
            best = std::max(best, placement_score(below, top, orient,
                                                  {base.offset.x + dx, base.offset.y + dy},
                                                  predictor));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("annealing finds feasible placements and respects curved bases") {
    const OraclePredictor oracle;
    const PlacedObject big_cube{Shape::cube(1.2), Orientation::HeightC, {0.0, 0.0}, 0.0};
    const PlacementResult on_cube =
        anneal_placement(big_cube, Shape::cube(0.5), Orientation::HeightC, oracle, test_config(1));
    CHECK(on_cube.score == 1.0);

    const PlacedObject ball{Shape::sphere(0.4), Orientation::Only, {0.0, 0.0}, 0.0};
    const PlacementResult on_ball =
        anneal_placement(ball, Shape::cube(0.5), Orientation::HeightC, oracle, test_config(2));
    CHECK(on_ball.score == 0.0);
}

TEST_CASE("annealing is deterministic given the seed") {
    const OraclePredictor oracle;
    const PlacedObject base{Shape::cuboid(0.9, 0.7, 0.5), Orientation::HeightC, {0.3, -0.2}, 0.0};
    const PlacementResult a =
        anneal_placement(base, Shape::cylinder(0.2, 0.5), Orientation::Upright, oracle,
                         test_config(33));
    const PlacementResult b =
        anneal_placement(base, Shape::cylinder(0.2, 0.5), Orientation::Upright, oracle,
                         test_config(33));
    CHECK(a.offset.x == b.offset.x);
    CHECK(a.offset.y == b.offset.y);
    CHECK(a.score == b.score);
}

TEST_CASE("annealing matches the dense grid oracle on random pairs") {
    const OraclePredictor oracle;
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        Stack pair = testing::random_stack(rng, 2, 2);
        const PlacedObject base = pair.objects[0];
        const Shape top = pair.objects[1].shape;
        const Orientation orient = pair.objects[1].orientation;
        const double annealed =
            anneal_placement(base, top, orient, oracle, test_config(100 + trial)).score;
        const double grid = grid_best_score(base, top, orient, oracle);
        CHECK(annealed == grid);
    }
}

TEST_CASE("annealing is invariant under rigid scene translation") {
    const OraclePredictor oracle;
    const Shape top = Shape::cuboid(0.6, 0.4, 0.3);
    const PlacedObject base{Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0}, 0.0};
    const PlacedObject moved{Shape::cube(1.0), Orientation::HeightC, {5.0, -3.0}, 0.0};
    const PlacementResult a =
        anneal_placement(base, top, Orientation::HeightC, oracle, test_config(7));
    const PlacementResult b =
        anneal_placement(moved, top, Orientation::HeightC, oracle, test_config(7));
    CHECK(a.score == b.score);
    CHECK(a.offset.x - base.offset.x == doctest::Approx(b.offset.x - moved.offset.x));
    CHECK(a.offset.y - base.offset.y == doctest::Approx(b.offset.y - moved.offset.y));
}

TEST_CASE("stackability scores encode the support affordance") {
    const OraclePredictor oracle;
    const std::vector<Shape> pool = {Shape::cube(0.5), Shape::cylinder(0.2, 0.4)};

    // A sphere can support nothing.
    CHECK(stackability_score(Shape::sphere(0.4), Orientation::Only, pool, oracle,
                             test_config(3)) == 0.0);
    // A lying cylinder cannot either.
    CHECK(stackability_score(Shape::cylinder(0.3, 1.0), Orientation::SidewaysX, pool, oracle,
                             test_config(4)) == 0.0);
    // A big flat base supports everything, every time.
    CHECK(stackability_score(Shape::cube(1.2), Orientation::HeightC, {Shape::cube(0.4)}, oracle,
                             test_config(5)) == 1.0);

    CHECK_THROWS_AS(stackability_score(Shape::cube(1.0), Orientation::HeightC, {}, oracle,
                                       test_config(6)),
                    EmptyPoolError);
}

TEST_CASE("largest face of a cuboid is at least as stackable as the smallest") {
    const OraclePredictor oracle;
    const Shape slab = Shape::cuboid(1.2, 0.9, 0.25);
    const std::vector<Shape> pool = {Shape::cube(0.6), Shape::cube(0.8), Shape::cylinder(0.25, 0.5)};
    // HeightC rests on the 1.2 x 0.9 face; HeightA on the 0.9 x 0.25 face.
    const double largest =
        stackability_score(slab, Orientation::HeightC, pool, oracle, test_config(8));
    const double smallest =
        stackability_score(slab, Orientation::HeightA, pool, oracle, test_config(9));
    CHECK(largest >= smallest);
}

TEST_CASE("pool ranking: order, orientation choice, tie-breaks") {
    const OraclePredictor oracle;
    const std::vector<Shape> pool = {Shape::sphere(0.35), Shape::cuboid(1.0, 0.9, 0.6),
                                     Shape::cylinder(0.3, 0.6)};
    const StackabilityResult result = rank_pool(pool, oracle, test_config(10));
    REQUIRE(result.ranking.size() == 3);
    CHECK(result.ranking[0].pool_index == 1);  // cuboid
    CHECK(result.ranking[1].pool_index == 2);  // upright cylinder
    CHECK(result.ranking[2].pool_index == 0);  // sphere last
    CHECK(result.ranking[0].score >= result.ranking[1].score);
    CHECK(result.ranking[1].score > result.ranking[2].score);
    CHECK(result.ranking[2].score == 0.0);
    // The cylinder must be ranked in its upright orientation.
    CHECK(result.ranking[1].best_orientation == Orientation::Upright);

    // Identical cubes tie; pool order decides.
    const std::vector<Shape> cubes(4, Shape::cube(0.6));
    const StackabilityResult ties = rank_pool(cubes, oracle, test_config(11));
    for (std::size_t i = 0; i < ties.ranking.size(); ++i) {
        CHECK(ties.ranking[i].pool_index == i);
        CHECK(ties.ranking[i].score == ties.ranking[0].score);
    }
}

TEST_CASE("projection areas by orientation") {
    CHECK(projection_area(Shape::cuboid(0.4, 0.6, 0.8), Orientation::HeightC) ==
          doctest::Approx(0.24));
    CHECK(projection_area(Shape::cuboid(0.4, 0.6, 0.8), Orientation::HeightA) ==
          doctest::Approx(0.48));
    CHECK(projection_area(Shape::cylinder(0.3, 0.5), Orientation::SidewaysX) ==
          doctest::Approx(0.3));
    CHECK(projection_area(Shape::sphere(0.5), Orientation::Only) ==
          doctest::Approx(3.14159265358979323846 * 0.25));
}
