#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stackkit/geometry.hpp"

namespace stackkit {

// Neutral-equilibrium tolerance: a degenerate contact on a flat support holds
// only while the cumulative CoM above projects onto the locus itself.
inline constexpr double kNeutralEps = 1e-9;

struct StackEntry {
    Shape shape;
    Orientation orientation = Orientation::Only;
    Vec2 offset;
};

// Bottom-up single-stranded tower resting on the ground plane z = 0.
// Object i+1 rests on object i; z_base values follow from resting contacts.
struct Stack {
    std::vector<PlacedObject> objects;
    int height() const { return static_cast<int>(objects.size()); }
};

Stack make_stack(std::span<const StackEntry> entries);
Stack make_stack(std::initializer_list<StackEntry> entries);

// Throws InvalidStackError on a broken z chain or bad dimensions.
void validate_stack(const Stack& stack);

// Contact regions between consecutive objects, bottom-up.
// Throws InvalidStackError when any pair does not touch.
std::vector<ContactInterface> stack_interfaces(const Stack& stack);

struct InterfaceCheck {
    int interface_index = 0;  // between objects index and index + 1
    double margin = 0.0;
    bool satisfied = true;
    bool degenerate = false;
    bool support_curved = false;
};

enum class ViolationType { VCOM, VPSF };

struct Violation {
    ViolationType type = ViolationType::VCOM;
    int violating_index = 0;
    int first_to_fall_index = 0;
};

struct StabilityReport {
    bool stable = true;
    // One entry per object-object interface. The ground interface is an
    // infinite plane and always satisfied, so it is not listed.
    std::vector<InterfaceCheck> per_interface;
    std::optional<Violation> violation;
};

// Top-down cumulative centre-of-mass check. Planar interfaces are satisfied
// when the cumulative CoM of everything above projects inside the support
// region with signed distance >= margin (boundary inclusive at margin 0).
// Degenerate interfaces are satisfied only on a flat support with the
// cumulative CoM within kNeutralEps of the locus; a curved support never
// carries load. The lowest failing interface defines the violation: its lower
// object violates, the object immediately above falls first.
StabilityReport check_stability(const Stack& stack, double margin = 0.0);

enum class StabilityClass { Stable, VCOM, VPSF };

// VPSF when the lowest failing interface is degenerate, VCOM when planar.
StabilityClass classify_violation(const StabilityReport& report);

enum LabelBit : unsigned {
    kLabelBase = 1u,
    kLabelTop = 2u,
    kLabelViolating = 4u,
    kLabelFirstToFall = 8u,
};

// Per-object label bitmask; 0 means "other". Multi-labels are allowed
// (a 2-stack violation makes object 0 both base and violating).
using SegmentLabels = std::vector<unsigned>;

SegmentLabels annotate(const Stack& stack, const StabilityReport& report);

std::string label_names(unsigned mask);
unsigned parse_label_names(std::string_view names);

}  // namespace stackkit
