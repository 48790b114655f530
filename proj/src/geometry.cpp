#include "stackkit/geometry.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace stackkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Positive-area overlap threshold for planar contacts.
constexpr double kInteriorEps = 1e-9;

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) {
        throw std::invalid_argument(std::string(what) + " must be strictly positive");
    }
}

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

Shape Shape::cuboid(double a, double b, double c, double density) {
    require_positive(a, "cuboid edge a");
    require_positive(b, "cuboid edge b");
    require_positive(c, "cuboid edge c");
    require_positive(density, "density");
    return Shape{ShapeKind::Cuboid, a, b, c, density};
}

Shape Shape::cube(double side, double density) { return cuboid(side, side, side, density); }

Shape Shape::cylinder(double radius, double height, double density) {
    require_positive(radius, "cylinder radius");
    require_positive(height, "cylinder height");
    require_positive(density, "density");
    return Shape{ShapeKind::Cylinder, radius, height, 0.0, density};
}

Shape Shape::sphere(double radius, double density) {
    require_positive(radius, "sphere radius");
    require_positive(density, "density");
    return Shape{ShapeKind::Sphere, radius, 0.0, 0.0, density};
}

double Shape::volume() const {
    switch (kind) {
        case ShapeKind::Cuboid: return a * b * c;
        case ShapeKind::Cylinder: return kPi * a * a * b;
        case ShapeKind::Sphere: return 4.0 / 3.0 * kPi * a * a * a;
    }
    return 0.0;
}

namespace {
constexpr std::array<Orientation, 3> kCuboidOrients = {Orientation::HeightA, Orientation::HeightB,
                                                       Orientation::HeightC};
constexpr std::array<Orientation, 2> kCylinderOrients = {Orientation::Upright,
                                                         Orientation::SidewaysX};
constexpr std::array<Orientation, 1> kSphereOrients = {Orientation::Only};
}  // namespace

std::span<const Orientation> orientations_for(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Cuboid: return kCuboidOrients;
        case ShapeKind::Cylinder: return kCylinderOrients;
        case ShapeKind::Sphere: return kSphereOrients;
    }
    return {};
}

bool orientation_valid(ShapeKind kind, Orientation o) {
    const auto all = orientations_for(kind);
    return std::find(all.begin(), all.end(), o) != all.end();
}

Footprint Footprint::rect(Vec2 center, double hx, double hy) {
    require_positive(hx, "rect half extent x");
    require_positive(hy, "rect half extent y");
    return Footprint{FootprintKind::Rect, center, hx, hy};
}

Footprint Footprint::disk(Vec2 center, double radius) {
    require_positive(radius, "disk radius");
    return Footprint{FootprintKind::Disk, center, radius, 0.0};
}

Footprint Footprint::point(Vec2 center) { return Footprint{FootprintKind::Point, center, 0.0, 0.0}; }

Footprint Footprint::segment_x(Vec2 center, double half_length) {
    require_positive(half_length, "segment half length");
    return Footprint{FootprintKind::SegmentX, center, half_length, 0.0};
}

double Footprint::area() const {
    switch (kind) {
        case FootprintKind::Rect: return 4.0 * a * b;
        case FootprintKind::Disk: return kPi * a * a;
        default: return 0.0;
    }
}

double Footprint::inradius() const {
    switch (kind) {
        case FootprintKind::Rect: return std::min(a, b);
        case FootprintKind::Disk: return a;
        default: return 0.0;
    }
}

double Footprint::signed_distance(Vec2 p) const {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    switch (kind) {
        case FootprintKind::Rect: {
            const double ex = std::abs(dx) - a;
            const double ey = std::abs(dy) - b;
            if (ex <= 0.0 && ey <= 0.0) return -std::max(ex, ey);
            return -std::hypot(std::max(ex, 0.0), std::max(ey, 0.0));
        }
        case FootprintKind::Disk: return a - std::hypot(dx, dy);
        case FootprintKind::Point: return -std::hypot(dx, dy);
        case FootprintKind::SegmentX: {
            const double ex = std::max(std::abs(dx) - a, 0.0);
            return -std::hypot(ex, dy);
        }
    }
    return 0.0;
}

Vec2 Footprint::nearest_point(Vec2 p) const {
    switch (kind) {
        case FootprintKind::Rect:
            return {clamp(p.x, center.x - a, center.x + a), clamp(p.y, center.y - b, center.y + b)};
        case FootprintKind::Disk: {
            const double d = dist(p, center);
            if (d <= a) return p;
            const double s = a / d;
            return {center.x + s * (p.x - center.x), center.y + s * (p.y - center.y)};
        }
        case FootprintKind::Point: return center;
        case FootprintKind::SegmentX:
            return {clamp(p.x, center.x - a, center.x + a), center.y};
    }
    return center;
}

Footprint Footprint::translated(Vec2 d) const {
    Footprint f = *this;
    f.center = center + d;
    return f;
}

double PlacedObject::vertical_extent() const {
    switch (shape.kind) {
        case ShapeKind::Cuboid:
            switch (orientation) {
                case Orientation::HeightA: return shape.a;
                case Orientation::HeightB: return shape.b;
                default: return shape.c;
            }
        case ShapeKind::Cylinder:
            return orientation == Orientation::SidewaysX ? 2.0 * shape.radius()
                                                         : shape.cylinder_height();
        case ShapeKind::Sphere: return 2.0 * shape.radius();
    }
    return 0.0;
}

Vec2 PlacedObject::horizontal_half_extents() const {
    switch (shape.kind) {
        case ShapeKind::Cuboid:
            // The two non-vertical edges keep their (a, b, c) order in (x, y).
            switch (orientation) {
                case Orientation::HeightA: return {shape.b / 2.0, shape.c / 2.0};
                case Orientation::HeightB: return {shape.a / 2.0, shape.c / 2.0};
                default: return {shape.a / 2.0, shape.b / 2.0};
            }
        case ShapeKind::Cylinder:
            if (orientation == Orientation::SidewaysX) {
                return {shape.cylinder_height() / 2.0, shape.radius()};
            }
            return {shape.radius(), shape.radius()};
        case ShapeKind::Sphere: return {shape.radius(), shape.radius()};
    }
    return {0.0, 0.0};
}

Vec3 PlacedObject::centroid() const {
    return {offset.x, offset.y, z_base + vertical_extent() / 2.0};
}

bool PlacedObject::top_flat() const {
    if (shape.kind == ShapeKind::Cuboid) return true;
    return shape.kind == ShapeKind::Cylinder && orientation == Orientation::Upright;
}

bool PlacedObject::bottom_flat() const { return top_flat(); }

Faces faces(const PlacedObject& obj) {
    switch (obj.shape.kind) {
        case ShapeKind::Cuboid: {
            const Vec2 h = obj.horizontal_half_extents();
            const Footprint f = Footprint::rect(obj.offset, h.x, h.y);
            return {f, f};
        }
        case ShapeKind::Cylinder: {
            if (obj.orientation == Orientation::SidewaysX) {
                const Footprint f =
                    Footprint::segment_x(obj.offset, obj.shape.cylinder_height() / 2.0);
                return {f, f};
            }
            const Footprint f = Footprint::disk(obj.offset, obj.shape.radius());
            return {f, f};
        }
        case ShapeKind::Sphere: {
            const Footprint f = Footprint::point(obj.offset);
            return {f, f};
        }
    }
    return {Footprint::point(obj.offset), Footprint::point(obj.offset)};
}

namespace {

// Strictly positive-area overlap of two 2D footprints.
bool interior_overlap(const Footprint& fa, const Footprint& fb) {
    if (fa.kind == FootprintKind::Rect && fb.kind == FootprintKind::Rect) {
        const double ox = fa.a + fb.a - std::abs(fa.center.x - fb.center.x);
        const double oy = fa.b + fb.b - std::abs(fa.center.y - fb.center.y);
        return ox > kInteriorEps && oy > kInteriorEps;
    }
    if (fa.kind == FootprintKind::Disk && fb.kind == FootprintKind::Disk) {
        return dist(fa.center, fb.center) < fa.a + fb.a - kInteriorEps;
    }
    const Footprint& rect = fa.kind == FootprintKind::Rect ? fa : fb;
    const Footprint& disk = fa.kind == FootprintKind::Rect ? fb : fa;
    return dist(rect.nearest_point(disk.center), disk.center) < disk.a - kInteriorEps;
}

bool point_on(const Footprint& f, Vec2 p) { return f.signed_distance(p) >= -kContactTol; }

// Contact locus when at least one face is curved (Point or SegmentX).
Footprint degenerate_locus(const Footprint& lower, const Footprint& upper) {
    const bool lower_deg = lower.degenerate();

    if (lower.kind == FootprintKind::Point || upper.kind == FootprintKind::Point) {
        const Vec2 p =
            lower.kind == FootprintKind::Point ? lower.center : upper.center;
        const Footprint& other = lower.kind == FootprintKind::Point ? upper : lower;
        if (!point_on(other, p)) throw NoContactError("point contact locus misses the facing surface");
        return Footprint::point(p);
    }

    // At least one SegmentX; the other is Rect, Disk or SegmentX.
    const Footprint& seg = lower_deg ? lower : upper;
    const Footprint& other = lower_deg ? upper : lower;
    double x0 = seg.center.x - seg.a;
    double x1 = seg.center.x + seg.a;
    const double y = seg.center.y;
    switch (other.kind) {
        case FootprintKind::Rect: {
            if (std::abs(y - other.center.y) > other.b + kContactTol) {
                throw NoContactError("segment contact outside the facing rectangle");
            }
            x0 = std::max(x0, other.center.x - other.a);
            x1 = std::min(x1, other.center.x + other.a);
            break;
        }
        case FootprintKind::Disk: {
            const double dy = y - other.center.y;
            if (std::abs(dy) > other.a + kContactTol) {
                throw NoContactError("segment contact outside the facing disk");
            }
            const double half_chord = std::sqrt(std::max(other.a * other.a - dy * dy, 0.0));
            x0 = std::max(x0, other.center.x - half_chord);
            x1 = std::min(x1, other.center.x + half_chord);
            break;
        }
        case FootprintKind::SegmentX: {
            if (std::abs(y - other.center.y) > kContactTol) {
                throw NoContactError("parallel line contacts at different y");
            }
            x0 = std::max(x0, other.center.x - other.a);
            x1 = std::min(x1, other.center.x + other.a);
            break;
        }
        case FootprintKind::Point: break;  // handled above
    }
    if (x1 < x0 - kContactTol) throw NoContactError("segment contact interval is empty");
    const double half = (x1 - x0) / 2.0;
    const Vec2 mid{(x0 + x1) / 2.0, y};
    if (half <= kContactTol) return Footprint::point(mid);
    return Footprint::segment_x(mid, half);
}

}  // namespace

ContactInterface contact_region(const PlacedObject& lower, const PlacedObject& upper,
                                int lower_index, int upper_index) {
    if (std::abs(upper.z_base - lower.top_z()) > kZTol) {
        throw InvalidStackError("upper object does not rest on the lower one");
    }
    ContactInterface ci;
    ci.lower_index = lower_index;
    ci.upper_index = upper_index;
    ci.plane_z = lower.top_z();

    const Footprint lower_top = faces(lower).top;
    const Footprint upper_bottom = faces(upper).bottom;

    if (!lower_top.degenerate() && !upper_bottom.degenerate()) {
        if (!interior_overlap(lower_top, upper_bottom)) {
            throw NoContactError("support faces do not overlap");
        }
        ci.kind = RegionKind::Planar;
        ci.lower_fp = lower_top;
        ci.upper_fp = upper_bottom;
        return ci;
    }

    ci.kind = RegionKind::Degenerate;
    ci.support_curved = lower_top.degenerate();
    ci.locus = degenerate_locus(lower_top, upper_bottom);
    return ci;
}

double ContactInterface::signed_margin(Vec2 p) const {
    if (kind == RegionKind::Planar) return planar_margin(lower_fp, upper_fp, p);
    return locus.signed_distance(p);
}

double ContactInterface::area() const {
    if (kind != RegionKind::Planar) return 0.0;
    return intersection_area(lower_fp, upper_fp);
}

bool region_contains(const ContactInterface& region, Vec2 p, double margin) {
    if (region.kind == RegionKind::Planar) return region.signed_margin(p) >= margin;
    return -region.signed_margin(p) <= margin;
}

double planar_margin(const Footprint& lower_top, const Footprint& upper_bottom, Vec2 p) {
    return std::min(lower_top.signed_distance(p), upper_bottom.signed_distance(p));
}

namespace {

double disk_disk_area(const Footprint& da, const Footprint& db) {
    const double d = dist(da.center, db.center);
    const double r1 = da.a, r2 = db.a;
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) {
        const double r = std::min(r1, r2);
        return kPi * r * r;
    }
    const double a1 = std::acos(clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
    const double a2 = std::acos(clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
    return r1 * r1 * (a1 - std::sin(2.0 * a1) / 2.0) + r2 * r2 * (a2 - std::sin(2.0 * a2) / 2.0);
}

// Fixed-step Simpson over the disk's chord heights clipped to the rect.
double disk_rect_area(const Footprint& disk, const Footprint& rect) {
    const double r = disk.a;
    const double x0 = std::max(disk.center.x - r, rect.center.x - rect.a);
    const double x1 = std::min(disk.center.x + r, rect.center.x + rect.a);
    if (x1 <= x0) return 0.0;
    const double ylo = rect.center.y - rect.b;
    const double yhi = rect.center.y + rect.b;
    const auto strip = [&](double x) {
        const double dx = x - disk.center.x;
        const double h = std::sqrt(std::max(r * r - dx * dx, 0.0));
        const double lo = std::max(disk.center.y - h, ylo);
        const double hi = std::min(disk.center.y + h, yhi);
        return std::max(hi - lo, 0.0);
    };
    const int n = 2048;  // even
    const double step = (x1 - x0) / n;
    double sum = strip(x0) + strip(x1);
    for (int i = 1; i < n; ++i) sum += strip(x0 + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * step / 3.0;
}

}  // namespace

double intersection_area(const Footprint& fa, const Footprint& fb) {
    if (fa.degenerate() || fb.degenerate()) return 0.0;
    if (fa.kind == FootprintKind::Rect && fb.kind == FootprintKind::Rect) {
        const double ox = std::max(fa.a + fb.a - std::abs(fa.center.x - fb.center.x), 0.0);
        const double oy = std::max(fa.b + fb.b - std::abs(fa.center.y - fb.center.y), 0.0);
        return std::min(ox, 2.0 * std::min(fa.a, fb.a)) * std::min(oy, 2.0 * std::min(fa.b, fb.b));
    }
    if (fa.kind == FootprintKind::Disk && fb.kind == FootprintKind::Disk) {
        return disk_disk_area(fa, fb);
    }
    const Footprint& disk = fa.kind == FootprintKind::Disk ? fa : fb;
    const Footprint& rect = fa.kind == FootprintKind::Disk ? fb : fa;
    return disk_rect_area(disk, rect);
}

std::pair<Vec3, double> cumulative_com(std::span<const PlacedObject> objects,
                                       std::size_t from_index) {
    if (from_index >= objects.size()) {
        throw std::out_of_range("cumulative_com: from_index past the end");
    }
    double m = 0.0, mx = 0.0, my = 0.0, mz = 0.0;
    for (std::size_t j = from_index; j < objects.size(); ++j) {
        const double mj = objects[j].mass();
        const Vec3 rj = objects[j].centroid();
        m += mj;
        mx += mj * rj.x;
        my += mj * rj.y;
        mz += mj * rj.z;
    }
    return {{mx / m, my / m, mz / m}, m};
}

}  // namespace stackkit
