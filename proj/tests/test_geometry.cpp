#include <cmath>

#include "doctest.h"
#include "stackkit/geometry.hpp"
#include "stackkit/rng.hpp"
#include "stackkit/stability.hpp"
#include "test_support.hpp"

using namespace stackkit;

namespace {
constexpr double kPi = 3.14159265358979323846;

PlacedObject on_ground(const Shape& s, Orientation o, Vec2 offset) {
    return PlacedObject{s, o, offset, 0.0};
}
}  // namespace

TEST_CASE("volumes and masses of the primitives") {
    CHECK(Shape::cuboid(0.5, 0.6, 0.7).volume() == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(Shape::cylinder(0.3, 0.8).volume() ==
          doctest::Approx(kPi * 0.09 * 0.8).epsilon(1e-12));
    CHECK(Shape::sphere(0.4).volume() ==
          doctest::Approx(4.0 / 3.0 * kPi * 0.064).epsilon(1e-12));
    CHECK(Shape::cube(0.5, 2.0).mass() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(Shape::cuboid(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Shape::sphere(-0.1), std::invalid_argument);
}

TEST_CASE("orientation counts per shape kind") {
    CHECK(orientations_for(ShapeKind::Cuboid).size() == 3);
    CHECK(orientations_for(ShapeKind::Cylinder).size() == 2);
    CHECK(orientations_for(ShapeKind::Sphere).size() == 1);
    CHECK(orientation_valid(ShapeKind::Cylinder, Orientation::SidewaysX));
    CHECK_FALSE(orientation_valid(ShapeKind::Sphere, Orientation::Upright));
}

TEST_CASE("faces of the primitives") {
    const Faces cube = faces(on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0}));
    CHECK(cube.top.kind == FootprintKind::Rect);
    CHECK(cube.top.center.x == 0.0);
    CHECK(cube.top.a == doctest::Approx(0.5));
    CHECK(cube.top.b == doctest::Approx(0.5));

    const Faces ball = faces(on_ground(Shape::sphere(0.3), Orientation::Only, {1.0, 2.0}));
    CHECK(ball.top.kind == FootprintKind::Point);
    CHECK(ball.bottom.kind == FootprintKind::Point);
    CHECK(ball.top.center.x == doctest::Approx(1.0));
    CHECK(ball.top.center.y == doctest::Approx(2.0));

    const Faces lying =
        faces(on_ground(Shape::cylinder(0.2, 1.0), Orientation::SidewaysX, {0.0, 0.0}));
    CHECK(lying.top.kind == FootprintKind::SegmentX);
    CHECK(lying.top.a == doctest::Approx(0.5));

    const Faces upright =
        faces(on_ground(Shape::cylinder(0.4, 0.6), Orientation::Upright, {0.2, 0.1}));
    CHECK(upright.top.kind == FootprintKind::Disk);
    CHECK(upright.top.a == doctest::Approx(0.4));
}

TEST_CASE("cuboid orientations map the right edge to the vertical") {
    const Shape box = Shape::cuboid(0.4, 0.6, 0.8);
    CHECK(on_ground(box, Orientation::HeightA, {0, 0}).vertical_extent() == doctest::Approx(0.4));
    CHECK(on_ground(box, Orientation::HeightB, {0, 0}).vertical_extent() == doctest::Approx(0.6));
    CHECK(on_ground(box, Orientation::HeightC, {0, 0}).vertical_extent() == doctest::Approx(0.8));
    const Vec2 ha = on_ground(box, Orientation::HeightA, {0, 0}).horizontal_half_extents();
    CHECK(ha.x == doctest::Approx(0.3));
    CHECK(ha.y == doctest::Approx(0.4));
}

TEST_CASE("centroid heights, sideways cylinder included") {
    PlacedObject ball = on_ground(Shape::sphere(0.3), Orientation::Only, {0, 0});
    ball.z_base = 1.0;
    CHECK(ball.centroid().z == doctest::Approx(1.3));
    PlacedObject lying = on_ground(Shape::cylinder(0.2, 1.0), Orientation::SidewaysX, {0, 0});
    lying.z_base = 2.0;
    CHECK(lying.centroid().z == doctest::Approx(2.2));
}

TEST_CASE("contact region of two unit cubes matches interval arithmetic") {
    const PlacedObject lower = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0});
    PlacedObject upper = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.4, 0.0});
    upper.z_base = 1.0;
    const ContactInterface region = contact_region(lower, upper);
    REQUIRE(region.kind == RegionKind::Planar);

    // Interval oracle: intersection is x in [-0.1, 0.5], y in [-0.5, 0.5].
    const double x0 = std::max(-0.5, 0.4 - 0.5), x1 = std::min(0.5, 0.4 + 0.5);
    const double y0 = -0.5, y1 = 0.5;
    CHECK(x0 == doctest::Approx(-0.1));
    CHECK(x1 == doctest::Approx(0.5));
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const Vec2 p{rng.uniform(-0.4, 0.8), rng.uniform(-0.8, 0.8)};
        const bool inside_expected = p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
        CHECK(region_contains(region, p, 0.0) == inside_expected);
        if (inside_expected) {
            const double expected =
                std::min(std::min(p.x - x0, x1 - p.x), std::min(p.y - y0, y1 - p.y));
            CHECK(region.signed_margin(p) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("disk inside rect gives a planar region; curved faces degenerate ones") {
    const PlacedObject cube = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0});
    PlacedObject cyl = on_ground(Shape::cylinder(0.4, 0.5), Orientation::Upright, {0.0, 0.0});
    cyl.z_base = 1.0;
    CHECK(contact_region(cube, cyl).kind == RegionKind::Planar);

    PlacedObject ball = on_ground(Shape::sphere(0.3), Orientation::Only, {0.1, 0.0});
    ball.z_base = 1.0;
    const ContactInterface under_ball = contact_region(cube, ball);
    CHECK(under_ball.kind == RegionKind::Degenerate);
    CHECK_FALSE(under_ball.support_curved);
    CHECK(under_ball.locus.kind == FootprintKind::Point);

    // Cube resting on a sphere: curved support.
    PlacedObject ball_base = on_ground(Shape::sphere(0.3), Orientation::Only, {0.0, 0.0});
    PlacedObject cube_top = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0});
    cube_top.z_base = 0.6;
    const ContactInterface on_ball = contact_region(ball_base, cube_top);
    CHECK(on_ball.kind == RegionKind::Degenerate);
    CHECK(on_ball.support_curved);

    PlacedObject far = on_ground(Shape::cube(1.0), Orientation::HeightC, {3.0, 0.0});
    far.z_base = 1.0;
    CHECK_THROWS_AS(contact_region(cube, far), NoContactError);

    PlacedObject floating = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0});
    floating.z_base = 1.5;
    CHECK_THROWS_AS(contact_region(cube, floating), InvalidStackError);
}

TEST_CASE("sideways cylinder contact clips the line to the facing footprint") {
    const PlacedObject cube = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0});
    PlacedObject lying = on_ground(Shape::cylinder(0.2, 2.0), Orientation::SidewaysX, {0.3, 0.1});
    lying.z_base = 1.0;
    const ContactInterface region = contact_region(cube, lying);
    REQUIRE(region.kind == RegionKind::Degenerate);
    REQUIRE(region.locus.kind == FootprintKind::SegmentX);
    // Cylinder spans x in [-0.7, 1.3], cube top face x in [-0.5, 0.5].
    CHECK(region.locus.center.x == doctest::Approx(0.0));
    CHECK(region.locus.a == doctest::Approx(0.5));
    CHECK(region.locus.center.y == doctest::Approx(0.1));
}

TEST_CASE("region_contains per-kind examples") {
    const PlacedObject lower = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0});
    PlacedObject upper = on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0});
    upper.z_base = 1.0;
    const ContactInterface centered = contact_region(lower, upper);
    CHECK(region_contains(centered, {0.0, 0.0}, 0.1));

    // Intersection x in [0.6, 1.0]: probe past the right edge.
    const PlacedObject big = on_ground(Shape::cuboid(2.0, 1.0, 1.0), Orientation::HeightC, {0.0, 0.0});
    PlacedObject shifted = on_ground(Shape::cuboid(0.8, 1.0, 1.0), Orientation::HeightC, {1.0 - 0.2, 0.0});
    shifted.z_base = 1.0;
    const ContactInterface off = contact_region(big, shifted);
    CHECK_FALSE(region_contains(off, {1.1, 0.5}, 0.0));

    PlacedObject ball = on_ground(Shape::sphere(0.2), Orientation::Only, {1.0, 2.0});
    PlacedObject carrier = on_ground(Shape::cuboid(4.0, 6.0, 1.0), Orientation::HeightC, {1.0, 2.0});
    ball.z_base = 1.0;
    const ContactInterface point_region = contact_region(carrier, ball);
    CHECK(region_contains(point_region, {1.0, 2.0}, 1e-6));
}

TEST_CASE("cumulative_com weighted means") {
    std::vector<PlacedObject> objs;
    objs.push_back(on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0}));
    objs.push_back(on_ground(Shape::cube(1.0), Orientation::HeightC, {1.0, 0.0}));
    const auto [com2, mass2] = cumulative_com(objs, 0);
    CHECK(com2.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass2 == doctest::Approx(2.0).epsilon(1e-12));

    const auto [com1, mass1] = cumulative_com(objs, 1);
    CHECK(com1.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mass1 == doctest::Approx(1.0).epsilon(1e-12));

    // Direct weighted-sum oracle: masses {1, 1, 2} at x {0, 1.5, 0.6}.
    std::vector<PlacedObject> three;
    three.push_back(on_ground(Shape::cube(1.0), Orientation::HeightC, {0.0, 0.0}));
    three.push_back(on_ground(Shape::cube(1.0), Orientation::HeightC, {1.5, 0.0}));
    three.push_back(on_ground(Shape::cube(1.0, 2.0), Orientation::HeightC, {0.6, 0.0}));
    const double expected = (1.0 * 1.5 + 2.0 * 0.6) / 3.0;
    const auto [com3, mass3] = cumulative_com(three, 1);
    CHECK(com3.x == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mass3 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.9).epsilon(1e-12));

    CHECK_THROWS_AS(cumulative_com(three, 3), std::out_of_range);
}

TEST_CASE("direct cumulative CoM equals incremental top-down accumulation") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Stack stack = testing::random_stack(rng);
        const int n = stack.height();
        double m = 0.0, mx = 0.0, my = 0.0, mz = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            const double mi = stack.objects[i].mass();
            const Vec3 ri = stack.objects[i].centroid();
            m += mi;
            mx += mi * ri.x;
            my += mi * ri.y;
            mz += mi * ri.z;
            const auto [com, mass] = cumulative_com(stack.objects, i);
            CHECK(com.x == doctest::Approx(mx / m).epsilon(1e-12));
            CHECK(com.y == doctest::Approx(my / m).epsilon(1e-12));
            CHECK(com.z == doctest::Approx(mz / m).epsilon(1e-12));
            CHECK(mass == doctest::Approx(m).epsilon(1e-12));
        }
    }
}

TEST_CASE("Monte Carlo centroid agrees with the analytic centre") {
    const int n = 1'000'000;
    Rng rng(424242);

    const auto check_mean = [&](double mean, double expected, double sigma) {
        const double se = sigma / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(mean - expected) <= 3.0 * se);
    };

    // Cuboid 0.4 x 0.6 x 0.8 centred at the origin.
    {
        double sx = 0, sy = 0, sz = 0;
        for (int i = 0; i < n; ++i) {
            sx += rng.uniform(-0.2, 0.2);
            sy += rng.uniform(-0.3, 0.3);
            sz += rng.uniform(-0.4, 0.4);
        }
        check_mean(sx / n, 0.0, 0.4 / std::sqrt(12.0));
        check_mean(sy / n, 0.0, 0.6 / std::sqrt(12.0));
        check_mean(sz / n, 0.0, 0.8 / std::sqrt(12.0));
    }
    // Cylinder r=0.3, h=0.5.
    {
        double sx = 0, sy = 0, sz = 0;
        for (int i = 0; i < n; ++i) {
            const double r = 0.3 * std::sqrt(rng.uniform());
            const double a = rng.uniform(0.0, 2.0 * kPi);
            sx += r * std::cos(a);
            sy += r * std::sin(a);
            sz += rng.uniform(-0.25, 0.25);
        }
        check_mean(sx / n, 0.0, 0.15);  // sd of x inside a disk is r/2
        check_mean(sy / n, 0.0, 0.15);
        check_mean(sz / n, 0.0, 0.5 / std::sqrt(12.0));
    }
    // Sphere r=0.4 by rejection.
    {
        double sx = 0, sy = 0, sz = 0;
        int kept = 0;
        while (kept < n) {
            const double x = rng.uniform(-0.4, 0.4);
            const double y = rng.uniform(-0.4, 0.4);
            const double z = rng.uniform(-0.4, 0.4);
            if (x * x + y * y + z * z > 0.16) continue;
            sx += x;
            sy += y;
            sz += z;
            ++kept;
        }
        const double sd = 0.4 / std::sqrt(5.0);  // sd of a coordinate inside a ball
        check_mean(sx / n, 0.0, sd);
        check_mean(sy / n, 0.0, sd);
        check_mean(sz / n, 0.0, sd);
    }
}

TEST_CASE("contact_region commutes with horizontal translation") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        Stack stack = testing::random_stack(rng, 2, 2);
        const Vec2 d{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        Stack moved = stack;
        for (PlacedObject& obj : moved.objects) obj.offset = obj.offset + d;

        const ContactInterface a = contact_region(stack.objects[0], stack.objects[1]);
        const ContactInterface b = contact_region(moved.objects[0], moved.objects[1]);
        CHECK(a.kind == b.kind);
        for (int i = 0; i < 20; ++i) {
            const Vec2 p{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            CHECK(a.signed_margin(p) == doctest::Approx(b.signed_margin(p + d)).epsilon(1e-9));
        }
    }
}

TEST_CASE("region_contains agrees with a dense-grid membership oracle") {
    Rng rng(555);
    const double step = 0.01;
    long long total = 0, disagree = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Stack stack = testing::random_stack(rng, 2, 2);
        ContactInterface region;
        try {
            region = contact_region(stack.objects[0], stack.objects[1]);
        } catch (const Error&) {
            continue;
        }
        if (region.kind != RegionKind::Planar) continue;
        const Footprint& fa = region.lower_fp;
        const Footprint& fb = region.upper_fp;
        const double x0 = std::min(fa.center.x - fa.a, fb.center.x - fb.a) - 0.05;
        const double x1 = std::max(fa.center.x + fa.a, fb.center.x + fb.a) + 0.05;
        const double y0 = std::min(fa.center.y - fa.b - fa.a, fb.center.y - fb.b - fb.a) - 0.05;
        const double y1 = std::max(fa.center.y + fa.b + fa.a, fb.center.y + fb.b + fb.a) + 0.05;
        for (double x = x0; x <= x1; x += step) {
            for (double y = y0; y <= y1; y += step) {
                const Vec2 p{x, y};
                const bool oracle = testing::naive_inside(fa, p) && testing::naive_inside(fb, p);
                const bool got = region_contains(region, p, 0.0);
                ++total;
                if (oracle != got) {
                    ++disagree;
                    // Disagreements may only sit within one grid cell of the
                    // boundary.
                    CHECK(std::abs(region.signed_margin(p)) <= step * 1.5);
                }
            }
        }
    }
    REQUIRE(total > 100000);
    CHECK(static_cast<double>(disagree) / static_cast<double>(total) <= 0.001);
}

TEST_CASE("intersection areas") {
    const Footprint ra = Footprint::rect({0.0, 0.0}, 0.5, 0.5);
    const Footprint rb = Footprint::rect({0.4, 0.0}, 0.5, 0.5);
    CHECK(intersection_area(ra, rb) == doctest::Approx(0.6).epsilon(1e-12));

    const Footprint da = Footprint::disk({0.0, 0.0}, 0.3);
    CHECK(intersection_area(da, da) == doctest::Approx(kPi * 0.09).epsilon(1e-12));
    const Footprint db = Footprint::disk({0.6, 0.0}, 0.3);
    CHECK(intersection_area(da, db) == doctest::Approx(0.0).epsilon(1e-12));

    // Disk fully inside the rect.
    CHECK(intersection_area(da, ra) == doctest::Approx(kPi * 0.09).epsilon(1e-4));
    // Disk centred on a rect corner: a quarter remains.
    const Footprint corner = Footprint::disk({0.5, 0.5}, 0.2);
    CHECK(intersection_area(corner, ra) == doctest::Approx(kPi * 0.04 / 4.0).epsilon(1e-4));
}

TEST_CASE("planar margin is continuous across the sweep") {
    const Footprint lower = Footprint::rect({0.0, 0.0}, 0.5, 0.5);
    const double step = 1e-3;
    double prev = 0.0;
    bool first = true;
    for (double x = -1.5; x <= 1.5; x += step) {
        const Footprint upper = Footprint::rect({x, 0.0}, 0.3, 0.3);
        const double margin = planar_margin(lower, upper, {x, 0.0});
        if (!first) CHECK(std::abs(margin - prev) <= 2.0 * step);
        prev = margin;
        first = false;
    }
}
