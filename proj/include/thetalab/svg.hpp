#pragma once

#include <string>

#include "thetalab/broken_lines.hpp"

namespace thetalab {

struct RenderOptions {
    int width = 720;
    int height = 720;
    // half-width of the viewport in plane units; 0 = fit to content
    Rational view = 0;
    bool labels = true;
};

// Deterministic SVG of a rank-2 diagram: walls as black rays or lines
// labeled with their scattering terms, broken lines as red polylines labeled
// with the domain monomials.  Byte-stable for identical input.
std::string render_svg(const ScatteringDiagram &diagram, const std::vector<BrokenLine> &lines,
                       const RenderOptions &opts = {});

} // namespace thetalab
