#pragma once

#include "subhyp/criteria.h"

#include <optional>
#include <string>
#include <vector>

namespace subhyp {

/// A bound check passes when measured <= bound. A stability check also carries the constant
/// measured at depth - 1 and passes when the two agree within the factor `bound`.
struct VerifyCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    int samples = 0;
    std::string detail;
    std::optional<double> coarse;
};

struct VerifyOptions {
    int depth = 8;
    double p = 4.0;
    double q = 3.0;
    /// Touching Whitney pairs for the anchor-containment check.
    int pairs = 1000;
    /// Random points or pairs per sampled check.
    int samples = 200;
    unsigned seed = 1;
    /// Dataset name for the extension checks.
    std::string data = "x1";
};

struct VerifyReport {
    std::string domain;
    int depth = 0;
    std::vector<VerifyCheck> checks;

    bool pass() const;
    const VerifyCheck* find(const std::string& name) const;
};

/// Bound-check harness on one domain. Constants that must be stable are measured at depth and
/// depth - 1, so depth must be at least 8 with the default five scales.
VerifyReport run_verify(const Domain& d, const std::string& name, const VerifyOptions& opt = {});

}  // namespace subhyp
