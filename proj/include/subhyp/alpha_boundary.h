#pragma once

#include "subhyp/metrics.h"

#include <map>
#include <vector>

namespace subhyp {

struct AlphaBoundaryOptions {
    double alpha = 0.5;
    int n_scales = 5;
    double merge_tol = 2.0;
    /// Boundary samples per finest scale length.
    int sample_density = 4;
    double guard = kDivergenceGuard;
};

/// One point of the alpha-boundary: an anchor plus the finest-scale cube group approaching it.
struct BoundaryElement {
    int id = -1;
    BoundaryPoint anchor;
    std::vector<int> cubes;  // finest-scale approach group, ascending ids
    int representative = -1;  // smallest id in cubes
    double basepoint_distance = 0.0;  // chain cost from the basepoint cube
};

struct BoundarySample {
    Point p;
    std::vector<int> elements;
    bool inaccessible = false;
    std::vector<double> ladder;  // basepoint chain distance per scale (inaccessible samples)
};

struct ElementDistance {
    double rho_c = 0.0;
    double d_tilde_c = 0.0;
    std::vector<double> per_scale;  // rho_c estimate at each scale, coarse to fine
};

/// A query endpoint for element_metric: an element id, or an interior point.
struct ElementOrPoint {
    int element = -1;
    Point p;

    static ElementOrPoint of(int id) { return {id, {}}; }
    static ElementOrPoint at(Point x) { return {-1, x}; }
};

class AlphaBoundary {
public:
    /// Throws ResolutionError when the decomposition is shallower than n_scales + 2.
    AlphaBoundary(const WhitneyDecomposition& w, const AlphaBoundaryOptions& opt);

    const WhitneyDecomposition& decomposition() const { return *w_; }
    const AlphaBoundaryOptions& options() const { return opt_; }
    double alpha() const { return opt_.alpha; }
    /// Scales delta_k, coarse to fine.
    const std::vector<double>& scales() const { return scales_; }
    double finest_scale() const { return scales_.back(); }

    const std::vector<BoundaryElement>& elements() const { return elements_; }
    const BoundaryElement& element(int id) const;
    const std::vector<BoundarySample>& samples() const { return samples_; }
    std::vector<int> inaccessible_samples() const;

    /// Elements anchored at a boundary point; empty when no accessible approach exists.
    std::vector<int> elements_at(Point anchor) const;
    /// Element at `anchor` whose approach group holds cube k, or -1.
    int element_with_cube(Point anchor, int k) const;

    /// omega_{Q,alpha}: the element reached along [x_Q, a_Q). Throws NumericalError if none.
    int omega_for_cube(int q) const;
    /// (alpha,Q)-visibility: anchor Q-visible and the straight approach from x_Q lands in the element.
    bool is_alpha_Q_visible(int element, const Cube& q) const;

    /// Element cluster at scale k: components of the scale-k cube set holding the finest group.
    std::vector<int> cluster_at_scale(int element, int k) const;
    /// Basepoint chain distance of each scale's cluster, coarse to fine.
    std::vector<double> basepoint_ladder(int element) const;

    ElementDistance element_metric(const ElementOrPoint& a, const ElementOrPoint& b) const;

    /// Chain cost from the basepoint cube to every cube.
    const std::vector<double>& basepoint_distances() const { return base_dist_; }

private:
    struct AnchorGroups {
        BoundaryPoint anchor;
        std::vector<std::vector<int>> groups;  // merged finest groups, ascending by first cube
        std::vector<int> element_ids;  // per group; -1 when inaccessible
        std::vector<double> group_distance;
    };

    long long key(Point p) const;
    const AnchorGroups* find_groups(Point anchor) const;
    AnchorGroups& ensure_groups(Point anchor, ChainSearch& search);
    AnchorGroups compute_groups(Point anchor, ChainSearch& search) const;
    std::vector<int> scale_set(Point anchor, double delta) const;
    std::vector<std::vector<int>> components(const std::vector<int>& cubes) const;
    /// A component approaches the anchor when one of its cubes lies within 8 diameters of it
    /// and sees it along a straight segment.
    bool sees_anchor(const std::vector<int>& comp, Point anchor) const;
    int approach_cube(Point anchor, Point target) const;
    /// 1 when cube k lies in the element's finest group, or in the component of the finest
    /// scale set holding k that meets the element's cluster; 0 when that component misses
    /// it; -1 when k lies in no scale set.
    int approach_in_element(int id, int k) const;
    double cluster_cost(ChainSearch& search, const std::vector<int>& from, const std::vector<int>& to,
                        double bound) const;

    const WhitneyDecomposition* w_;
    AlphaBoundaryOptions opt_;
    std::vector<double> scales_;
    std::vector<double> base_dist_;
    std::vector<BoundaryElement> elements_;
    std::vector<BoundarySample> samples_;
    std::map<long long, AnchorGroups> anchors_;
    std::vector<int> cube_omega_;
};

/// omega^[alpha] for a beta-element: the alpha-element at the same anchor holding its
/// representative cube. Throws NumericalError when none exists.
int project_beta_to_alpha(const AlphaBoundary& ab_alpha, const AlphaBoundary& ab_beta, int omega_beta);

}  // namespace subhyp
