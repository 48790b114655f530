#pragma once

#include <string>
#include <string_view>

#include "stackkit/scenegen.hpp"

namespace stackkit {

// Orthographic projection of the stack ("front" = x/z, "side" = y/z,
// "top" = x/y). Violating and first-to-fall objects get dashed outlines.
// Output bytes are a pure function of the inputs.
std::string render_svg(const Stack& stack, const SegmentLabels& labels, const Cosmetic& cosmetic,
                       std::string_view view);

std::string render_scene_svg(const Scenario& scenario, std::string_view view);

}  // namespace stackkit
