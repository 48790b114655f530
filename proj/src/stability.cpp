#include "stackkit/stability.hpp"

#include <cmath>
#include <sstream>

namespace stackkit {

Stack make_stack(std::span<const StackEntry> entries) {
    Stack stack;
    stack.objects.reserve(entries.size());
    double z = 0.0;
    for (const StackEntry& e : entries) {
        if (!orientation_valid(e.shape.kind, e.orientation)) {
            throw InvalidStackError("orientation not afforded by the shape");
        }
        PlacedObject obj{e.shape, e.orientation, e.offset, z};
        z = obj.top_z();
        stack.objects.push_back(obj);
    }
    return stack;
}

Stack make_stack(std::initializer_list<StackEntry> entries) {
    return make_stack(std::span<const StackEntry>(entries.begin(), entries.size()));
}

void validate_stack(const Stack& stack) {
    if (stack.objects.empty()) throw InvalidStackError("empty stack");
    double z = 0.0;
    for (std::size_t i = 0; i < stack.objects.size(); ++i) {
        const PlacedObject& obj = stack.objects[i];
        if (!(obj.shape.a > 0.0) || !(obj.shape.density > 0.0)) {
            throw InvalidStackError("non-positive shape dimensions");
        }
        if (!orientation_valid(obj.shape.kind, obj.orientation)) {
            throw InvalidStackError("orientation not afforded by the shape");
        }
        if (std::abs(obj.z_base - z) > kZTol) {
            std::ostringstream msg;
            msg << "object " << i << " does not rest on its support (z_base " << obj.z_base
                << ", expected " << z << ")";
            throw InvalidStackError(msg.str());
        }
        z = obj.top_z();
    }
}

std::vector<ContactInterface> stack_interfaces(const Stack& stack) {
    std::vector<ContactInterface> interfaces;
    if (stack.objects.size() < 2) return interfaces;
    interfaces.reserve(stack.objects.size() - 1);
    for (std::size_t i = 0; i + 1 < stack.objects.size(); ++i) {
        try {
            interfaces.push_back(contact_region(stack.objects[i], stack.objects[i + 1],
                                                static_cast<int>(i), static_cast<int>(i + 1)));
        } catch (const NoContactError& e) {
            std::ostringstream msg;
            msg << "no contact at interface " << i << ": " << e.what();
            throw InvalidStackError(msg.str());
        }
    }
    return interfaces;
}

StabilityReport check_stability(const Stack& stack, double margin) {
    validate_stack(stack);
    const auto interfaces = stack_interfaces(stack);
    const int n = stack.height();

    StabilityReport report;
    report.per_interface.resize(interfaces.size());

    // Top-down incremental accumulation of the substack CoM.
    double m_acc = 0.0, mx_acc = 0.0, my_acc = 0.0;
    for (int i = n - 2; i >= 0; --i) {
        const PlacedObject& above = stack.objects[i + 1];
        const double m = above.mass();
        const Vec3 r = above.centroid();
        m_acc += m;
        mx_acc += m * r.x;
        my_acc += m * r.y;
        const Vec2 com{mx_acc / m_acc, my_acc / m_acc};

        const ContactInterface& iface = interfaces[i];
        InterfaceCheck chk;
        chk.interface_index = i;
        chk.degenerate = iface.kind == RegionKind::Degenerate;
        chk.support_curved = iface.support_curved;
        chk.margin = iface.signed_margin(com);
        if (chk.degenerate) {
            chk.satisfied = !iface.support_curved && -chk.margin <= kNeutralEps;
        } else {
            chk.satisfied = chk.margin >= margin;
        }
        report.per_interface[i] = chk;
    }

    for (const InterfaceCheck& chk : report.per_interface) {
        if (!chk.satisfied) {
            report.stable = false;
            report.violation = Violation{
                chk.degenerate ? ViolationType::VPSF : ViolationType::VCOM,
                chk.interface_index,
                chk.interface_index + 1,
            };
            break;  // lowest failing interface is the mechanical root cause
        }
    }
    return report;
}

StabilityClass classify_violation(const StabilityReport& report) {
    if (!report.violation) return StabilityClass::Stable;
    return report.violation->type == ViolationType::VPSF ? StabilityClass::VPSF
                                                         : StabilityClass::VCOM;
}

SegmentLabels annotate(const Stack& stack, const StabilityReport& report) {
    SegmentLabels labels(stack.objects.size(), 0u);
    if (labels.empty()) return labels;
    labels.front() |= kLabelBase;
    labels.back() |= kLabelTop;
    if (report.violation) {
        labels[report.violation->violating_index] |= kLabelViolating;
        labels[report.violation->first_to_fall_index] |= kLabelFirstToFall;
    }
    return labels;
}

std::string label_names(unsigned mask) {
    if (mask == 0u) return "other";
    std::string out;
    const auto append = [&out](std::string_view name) {
        if (!out.empty()) out += ' ';
        out += name;
    };
    if (mask & kLabelBase) append("base");
    if (mask & kLabelTop) append("top");
    if (mask & kLabelViolating) append("violating");
    if (mask & kLabelFirstToFall) append("first_to_fall");
    return out;
}

unsigned parse_label_names(std::string_view names) {
    unsigned mask = 0u;
    std::istringstream in{std::string(names)};
    std::string token;
    while (in >> token) {
        if (token == "other") continue;
        if (token == "base") mask |= kLabelBase;
        else if (token == "top") mask |= kLabelTop;
        else if (token == "violating") mask |= kLabelViolating;
        else if (token == "first_to_fall") mask |= kLabelFirstToFall;
        else throw SchemaError("unknown object label: " + token);
    }
    return mask;
}

}  // namespace stackkit
