#pragma once

#include "subhyp/verify.h"

#include "json.hpp"

#include <string>
#include <vector>

namespace subhyp::io {

using nlohmann::json;

/// Throws InputError when the file cannot be read or does not parse.
json read_json_file(const std::string& path);

/// {"type":"polygon","outer":[[x,y],...],"holes":[[[x,y],...],...],"slits":[[[x1,y1],[x2,y2]],...]}
/// or {"type":"grid","cell":h,"rows":["0110",...],"origin":[x,y]}. Optional "name" and "basepoint".
Domain domain_from_json(const json& j);
Domain load_domain(const std::string& path);

/// [{"where":{"face":"slit+","box":[x0,y0,x1,y1]},"expr":"ax*ay"}, ...], first match wins.
BoundaryFunction boundary_function_from_json(const json& j);
BoundaryFunction load_boundary_function(const std::string& path);

json cubes_json(const WhitneyDecomposition& w);
json whitney_report_json(const WhitneyReport& r);
/// "a,b" per touching pair with a < b.
std::string adjacency_csv(const WhitneyDecomposition& w);

struct PairQuery {
    Point x, y;
    double alpha = 0.5;
};

/// Rows x1,y1,x2,y2,alpha; blank lines, '#' comments and a non-numeric header are skipped.
std::vector<PairQuery> parse_pairs_csv(const std::string& text);
std::vector<PairQuery> load_pairs_csv(const std::string& path);

struct PairResult {
    PairQuery query;
    MetricEstimate estimate;
    std::string error;  // empty, "outside", "uncovered", "divergent" or "input"
};

/// One d_tilde estimate per query; failures are reported per row.
std::vector<PairResult> estimate_pairs(const WhitneyDecomposition& w, const std::vector<PairQuery>& pairs);
std::string pairs_csv(const std::vector<PairResult>& rows);
json pairs_json(const std::vector<PairResult>& rows);

/// {"alpha","scales","elements":[{"id","anchor","face",...}],"samples":[{"p","count","elements"}],
///  "inaccessible":[{"p","ladder"}]}; infinite distances are null. With with_clusters, elements seen at a boundary sample also
/// carry "scales" and "cluster_sizes" (cubes in their cluster at each scale); this costs a
/// component search per element and scale.
json boundary_json(const AlphaBoundary& ab, bool with_clusters = false);

/// x,y,F,dF1,dF2 on an n x n grid of cell centres over the bounding box, evaluable points only.
std::string field_csv(const ExtensionField& ef, int n);

json verify_json(const VerifyReport& r);

/// Fixed 17-significant-digit formatting, locale independent.
std::string num(double v);

}  // namespace subhyp::io
