#include "stackkit/render_svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace stackkit {

namespace {

constexpr std::array<const char*, kColorCount> kPalette = {
    "#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2", "#edc948",
};

constexpr double kScale = 100.0;  // px per world unit
constexpr double kPad = 0.25;     // world units around the stack

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Box {
    double cx = 0.0;  // horizontal centre (view axis)
    double half = 0.0;
    double z0 = 0.0;
    double z1 = 0.0;
};

enum class Mark { BoxMark, CircleMark };

struct Element {
    Mark mark = Mark::BoxMark;
    Box box;
    double circle_r = 0.0;  // CircleMark: centre (cx, (z0+z1)/2), radius
};

// Projection of one object for a vertical view along the given axis.
Element project_vertical(const PlacedObject& obj, bool along_x) {
    const Vec2 half = obj.horizontal_half_extents();
    Element el;
    el.box.cx = along_x ? obj.offset.x : obj.offset.y;
    el.box.half = along_x ? half.x : half.y;
    el.box.z0 = obj.z_base;
    el.box.z1 = obj.top_z();
    const bool circle =
        obj.shape.kind == ShapeKind::Sphere ||
        (obj.shape.kind == ShapeKind::Cylinder && obj.orientation == Orientation::SidewaysX &&
         !along_x);
    if (circle) {
        el.mark = Mark::CircleMark;
        el.circle_r = obj.shape.radius();
    }
    return el;
}

const char* outline_color(unsigned mask) {
    if (mask & kLabelViolating) return "#d62728";
    if (mask & kLabelFirstToFall) return "#ff7f0e";
    return nullptr;
}

}  // namespace

std::string render_svg(const Stack& stack, const SegmentLabels& labels, const Cosmetic& cosmetic,
                       std::string_view view) {
    if (view != "front" && view != "side" && view != "top") {
        throw std::invalid_argument("view must be front, side or top");
    }
    const bool top_view = view == "top";
    const bool along_x = view != "side";

    // World bounds.
    double lo = -kPad, hi = kPad, vlo = -kPad, vhi = kPad;
    for (const PlacedObject& obj : stack.objects) {
        const Vec2 half = obj.horizontal_half_extents();
        if (top_view) {
            lo = std::min(lo, obj.offset.x - half.x - kPad);
            hi = std::max(hi, obj.offset.x + half.x + kPad);
            vlo = std::min(vlo, obj.offset.y - half.y - kPad);
            vhi = std::max(vhi, obj.offset.y + half.y + kPad);
        } else {
            const double c = along_x ? obj.offset.x : obj.offset.y;
            const double h = along_x ? half.x : half.y;
            lo = std::min(lo, c - h - kPad);
            hi = std::max(hi, c + h + kPad);
            vhi = std::max(vhi, obj.top_z() + kPad);
        }
    }

    const double width = (hi - lo) * kScale;
    const double height = (vhi - vlo) * kScale;
    const auto sx = [&](double w) { return (w - lo) * kScale; };
    // SVG y grows downward.
    const auto sy = [&](double w) { return (vhi - w) * kScale; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" fill=\"#fafafa\"/>\n";
    if (!top_view) {
        svg << "<line x1=\"0\" y1=\"" << fmt(sy(0.0)) << "\" x2=\"" << fmt(width) << "\" y2=\""
            << fmt(sy(0.0)) << "\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
    }

    for (std::size_t i = 0; i < stack.objects.size(); ++i) {
        const PlacedObject& obj = stack.objects[i];
        const unsigned mask = i < labels.size() ? labels[i] : 0u;
        const int color_id = i < cosmetic.object_colors.size()
                                 ? cosmetic.object_colors[i] % kColorCount
                                 : static_cast<int>(i % kColorCount);
        const char* fill = kPalette[color_id];
        const char* outline = outline_color(mask);
        std::string stroke = outline != nullptr
                                 ? std::string(" stroke=\"") + outline +
                                       "\" stroke-width=\"3\" stroke-dasharray=\"6 3\""
                                 : std::string(" stroke=\"#333333\" stroke-width=\"1\"");

        if (top_view) {
            const Vec2 half = obj.horizontal_half_extents();
            const bool circle = obj.shape.kind == ShapeKind::Sphere ||
                                (obj.shape.kind == ShapeKind::Cylinder &&
                                 obj.orientation == Orientation::Upright);
            if (circle) {
                svg << "<circle cx=\"" << fmt(sx(obj.offset.x)) << "\" cy=\"" << fmt(sy(obj.offset.y))
                    << "\" r=\"" << fmt(obj.shape.radius() * kScale) << "\" fill=\"" << fill
                    << "\" fill-opacity=\"0.85\"" << stroke << "/>\n";
            } else {
                svg << "<rect x=\"" << fmt(sx(obj.offset.x - half.x)) << "\" y=\""
                    << fmt(sy(obj.offset.y + half.y)) << "\" width=\"" << fmt(2.0 * half.x * kScale)
                    << "\" height=\"" << fmt(2.0 * half.y * kScale) << "\" fill=\"" << fill
                    << "\" fill-opacity=\"0.85\"" << stroke << "/>\n";
            }
            continue;
        }

        const Element el = project_vertical(obj, along_x);
        if (el.mark == Mark::CircleMark) {
            svg << "<circle cx=\"" << fmt(sx(el.box.cx)) << "\" cy=\""
                << fmt(sy((el.box.z0 + el.box.z1) / 2.0)) << "\" r=\"" << fmt(el.circle_r * kScale)
                << "\" fill=\"" << fill << "\" fill-opacity=\"0.85\"" << stroke << "/>\n";
        } else {
            svg << "<rect x=\"" << fmt(sx(el.box.cx - el.box.half)) << "\" y=\"" << fmt(sy(el.box.z1))
                << "\" width=\"" << fmt(2.0 * el.box.half * kScale) << "\" height=\""
                << fmt((el.box.z1 - el.box.z0) * kScale) << "\" fill=\"" << fill
                << "\" fill-opacity=\"0.85\"" << stroke << "/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_scene_svg(const Scenario& scenario, std::string_view view) {
    return render_svg(scenario.stack, scenario.labels, scenario.cosmetic, view);
}

}  // namespace stackkit
