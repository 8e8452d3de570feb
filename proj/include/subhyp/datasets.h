#pragma once

#include "subhyp/extension.h"

#include <string>
#include <vector>

namespace subhyp::datasets {

/// Boundary data by name:
///   constant[:c]  f = c (default 1)
///   x1            f = first anchor coordinate
///   slit01        0 on the upper slit faces and 1 on the lower ones over |x| <= 1/4,
///                 blending to 1/2 by |x| = 3/8; 1/2 everywhere else
///   holder        1 - (|a - x0| / 0.4)^0.8 near x0, 0 beyond; x0 = bottom-centre of the bounding box
///   cusp          1 / |a - x0|, x0 a third of the way along the bottom of the bounding box
BoundaryFunction by_name(const std::string& name, const Domain& d);

/// Anchor of the holder and cusp data on `d`.
Point holder_centre(const Domain& d);
Point cusp_centre(const Domain& d);

std::vector<std::string> names();

}  // namespace subhyp::datasets
