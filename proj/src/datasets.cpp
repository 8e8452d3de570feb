#include "subhyp/datasets.h"

#include "subhyp/errors.h"

#include <cmath>

namespace subhyp::datasets {

Point holder_centre(const Domain& d) {
    return {0.5 * (d.bbox_min().x + d.bbox_max().x), d.bbox_min().y};
}

Point cusp_centre(const Domain& d) {
    return {d.bbox_min().x + (d.bbox_max().x - d.bbox_min().x) / 3, d.bbox_min().y};
}

BoundaryFunction by_name(const std::string& name, const Domain& d) {
    BoundaryFunction f;
    if (name == "constant" || name.rfind("constant:", 0) == 0) {
        double c = 1.0;
        if (name.size() > 9) {
            try {
                c = std::stod(name.substr(9));
            } catch (const std::exception&) {
                throw InputError("bad constant in '" + name + "'");
            }
        }
        return BoundaryFunction::constant(c);
    }
    if (name == "x1") {
        f.add("any", "ax");
    } else if (name == "slit01") {
        f.add("slit+", "0.5 - 0.5*smoothstep(0.375, 0.25, abs(ax))");
        f.add("slit-", "0.5 + 0.5*smoothstep(0.375, 0.25, abs(ax))");
        f.add("any", "0.5");
    } else if (name == "holder") {
        Point c = holder_centre(d);
        f.add("any", [c](Point a) { return std::max(0.0, 1 - std::pow(euclid_norm(a - c) / 0.4, 0.8)); },
              "holder bump");
    } else if (name == "cusp") {
        Point c = cusp_centre(d);
        f.add("any", [c](Point a) { return 1 / euclid_norm(a - c); }, "cusp");
    } else {
        throw InputError("unknown dataset '" + name + "'");
    }
    return f;
}

std::vector<std::string> names() { return {"constant", "x1", "slit01", "holder", "cusp"}; }

}  // namespace subhyp::datasets
