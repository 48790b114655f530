#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "stackkit/errors.hpp"

namespace stackkit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Contact alignment tolerances (world length units).
inline constexpr double kZTol = 1e-9;
inline constexpr double kContactTol = 1e-9;

enum class ShapeKind { Cuboid, Cylinder, Sphere };

// Convex primitive with homogeneous density. Dimension slots by kind:
// cuboid edges (a, b, c); cylinder radius a, height b; sphere radius a.
struct Shape {
    ShapeKind kind = ShapeKind::Cuboid;
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double density = 1.0;

    static Shape cuboid(double a, double b, double c, double density = 1.0);
    static Shape cube(double side, double density = 1.0);
    static Shape cylinder(double radius, double height, double density = 1.0);
    static Shape sphere(double radius, double density = 1.0);

    double radius() const { return a; }
    double cylinder_height() const { return b; }
    double volume() const;
    double mass() const { return density * volume(); }
};

// Discrete resting orientations: cuboids afford three (which edge is
// vertical), cylinders two, spheres one.
enum class Orientation { HeightA, HeightB, HeightC, Upright, SidewaysX, Only };

std::span<const Orientation> orientations_for(ShapeKind kind);
bool orientation_valid(ShapeKind kind, Orientation o);

enum class FootprintKind { Rect, Disk, Point, SegmentX };

// Horizontal locus in world coordinates. Rect: half extents (a, b);
// Disk: radius a; SegmentX: half length a along x; Point: center only.
struct Footprint {
    FootprintKind kind = FootprintKind::Point;
    Vec2 center;
    double a = 0.0;
    double b = 0.0;

    static Footprint rect(Vec2 center, double hx, double hy);
    static Footprint disk(Vec2 center, double radius);
    static Footprint point(Vec2 center);
    static Footprint segment_x(Vec2 center, double half_length);

    bool degenerate() const {
        return kind == FootprintKind::Point || kind == FootprintKind::SegmentX;
    }
    double area() const;
    double inradius() const;
    // Signed Euclidean distance to the boundary, positive inside. Degenerate
    // loci have no interior: result is minus the distance to the locus.
    double signed_distance(Vec2 p) const;
    // Projection of p onto the closed set.
    Vec2 nearest_point(Vec2 p) const;
    Footprint translated(Vec2 d) const;
};

struct PlacedObject {
    Shape shape;
    Orientation orientation = Orientation::Only;
    Vec2 offset;          // world position of the vertical centroid axis
    double z_base = 0.0;  // bottom of the vertical extent

    double vertical_extent() const;
    double top_z() const { return z_base + vertical_extent(); }
    // Axis-aligned bounding half extents of the horizontal projection.
    Vec2 horizontal_half_extents() const;
    Vec3 centroid() const;
    double mass() const { return shape.mass(); }
    bool top_flat() const;
    bool bottom_flat() const;
};

struct Faces {
    Footprint top;
    Footprint bottom;
};

// Top support locus and bottom contact locus in world coordinates.
Faces faces(const PlacedObject& obj);

enum class RegionKind { Planar, Degenerate };

// Support region between two consecutive stacked objects. Planar regions are
// the (convex) intersection of the lower top face with the upper bottom face,
// stored as the two constituent footprints. Degenerate regions carry the
// explicit contact locus; support_curved marks a curved lower face, which
// never affords stability under load.
struct ContactInterface {
    int lower_index = 0;
    int upper_index = 1;
    RegionKind kind = RegionKind::Planar;
    Footprint lower_fp;
    Footprint upper_fp;
    Footprint locus;
    bool support_curved = false;
    double plane_z = 0.0;

    // Planar: min of the constituent signed distances (the region margin).
    // Degenerate: minus the distance to the locus.
    double signed_margin(Vec2 p) const;
    double area() const;
};

// Throws NoContactError when the faces do not touch, InvalidStackError when
// the upper object does not rest on the lower one.
ContactInterface contact_region(const PlacedObject& lower, const PlacedObject& upper,
                                int lower_index = 0, int upper_index = 1);

// Planar: p inside with signed boundary distance >= margin.
// Degenerate: Euclidean distance from p to the locus <= margin.
bool region_contains(const ContactInterface& region, Vec2 p, double margin);

// min of the two faces' signed distances at p. Equals the planar region
// margin where the region exists and extends continuously where it does not.
double planar_margin(const Footprint& lower_top, const Footprint& upper_bottom, Vec2 p);

double intersection_area(const Footprint& fa, const Footprint& fb);

// Mass-weighted mean of world centroids of objects[from_index..end].
std::pair<Vec3, double> cumulative_com(std::span<const PlacedObject> objects,
                                       std::size_t from_index);

}  // namespace stackkit
