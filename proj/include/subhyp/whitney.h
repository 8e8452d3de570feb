#pragma once

#include "subhyp/geometry.h"

#include <array>
#include <random>
#include <vector>

namespace subhyp {

struct WhitneyCube {
    int level = 0;
    long i = 0;
    long j = 0;
    Cube cube;
    double dist = 0.0;  // dist(Q, boundary)
    BoundaryPoint anchor;
};

/// Dyadic Whitney cubes over the domain's square root box, with touching-cube adjacency
/// and nearest-boundary anchors. Keeps a pointer to the domain, which must outlive it.
class WhitneyDecomposition {
public:
    /// Assemble from explicit dyadic cells (level, i, j); no Whitney predicate is enforced.
    static WhitneyDecomposition from_cells(const Domain& d, int depth_limit,
                                           const std::vector<std::array<long, 3>>& cells);

    const Domain& domain() const { return *domain_; }
    int depth_limit() const { return depth_; }
    std::size_t size() const { return cubes_.size(); }
    const std::vector<WhitneyCube>& cubes() const { return cubes_; }
    const WhitneyCube& operator[](int id) const { return cubes_[static_cast<std::size_t>(id)]; }
    const std::vector<int>& neighbors(int id) const;
    double deficit_area() const { return deficit_; }
    double finest_side() const;

    /// Cube containing p, or -1 when p is outside every cube.
    int locate(Point p) const;
    /// Cube ids meeting the closed box [lo, hi], ascending.
    std::vector<int> cubes_in_box(Point lo, Point hi) const;

private:
    friend WhitneyDecomposition build_whitney(const Domain& d, int depth_limit);
    void index();

    const Domain* domain_ = nullptr;
    int depth_ = 0;
    std::vector<WhitneyCube> cubes_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> owner_;  // finest-level cell -> cube id
    long fine_n_ = 0;
    int bucket_n_ = 0;
    std::vector<std::vector<int>> buckets_;
    double deficit_ = 0.0;
};

/// Throws ResolutionError("empty decomposition") when no cube qualifies.
WhitneyDecomposition build_whitney(const Domain& d, int depth_limit = 9);

/// Throws InputError on an invalid id.
const std::vector<int>& neighbors(const WhitneyDecomposition& w, int q);
BoundaryPoint anchor_point(const WhitneyDecomposition& w, int q);

/// Uniform point of the domain that lies in some cube. Throws ResolutionError after 10^6 misses.
Point sample_covered(const WhitneyDecomposition& w, std::mt19937& rng);

struct WhitneyReport {
    std::size_t cubes = 0;
    std::size_t pairs = 0;
    int wcov_failures = 0;
    int wadd1_failures = 0;
    int wadd3_failures = 0;
    int max_neighbors = 0;
    int max_star_neighbors = 0;
    double min_ratio = 0.0;  // touching-pair diameter ratios
    double max_ratio = 0.0;
    double deficit_area = 0.0;

    bool pass() const { return wcov_failures == 0 && wadd1_failures == 0 && wadd3_failures == 0; }
};

WhitneyReport verify_whitney(const WhitneyDecomposition& w);

}  // namespace subhyp
