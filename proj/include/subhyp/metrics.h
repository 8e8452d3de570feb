#pragma once

#include "subhyp/whitney.h"

#include <functional>
#include <limits>
#include <vector>

namespace subhyp {

inline constexpr double kDivergenceGuard = 1e12;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// alpha = (p - n) / (p - 1); throws InputError unless p > n.
double alpha_from_p(double p, int n = 2);
/// Throws InputError unless 0 < alpha <= 1.
void check_alpha(double alpha);

struct MetricEstimate {
    double upper = 0.0;
    double chain_sum = 0.0;
    double certified_lower = 0.0;
    std::vector<int> chain;
};

/// Integral of rho^(alpha-1) ds (sup-norm arclength) along the polyline. Endpoints may lie on
/// the boundary. Throws InputError when a piece leaves the domain and NumericalError
/// ("divergent length") when the integral exceeds kDivergenceGuard.
double subhyperbolic_length(const Domain& d, const std::vector<Point>& polyline, double alpha,
                            double quad_tol = 1e-6);

/// Node-weighted Dijkstra over the cube graph: the cost of a chain is the sum of
/// (diam Q)^alpha over its cubes, plus the source offset.
class ChainSearch {
public:
    ChainSearch(const WhitneyDecomposition& w, double alpha);

    double weight(int id) const { return weight_[static_cast<std::size_t>(id)]; }
    double alpha() const { return alpha_; }

    /// Sources carry their starting cost (their own weight is not added).
    /// Stops at `target` when given, and never settles nodes beyond `bound`.
    void run(const std::vector<std::pair<int, double>>& sources, double bound = kInfinity, int target = -1,
             const std::function<bool(int)>& allowed = {});

    double dist(int id) const;
    const std::vector<int>& settled() const { return settled_; }
    std::vector<int> path_to(int id) const;

private:
    const WhitneyDecomposition* w_;
    double alpha_;
    std::vector<double> weight_;
    std::vector<double> dist_;
    std::vector<int> prev_;
    std::vector<int> touched_;
    std::vector<int> settled_;
};

/// Dijkstra chain between the cubes containing x and y. Throws ResolutionError("refine
/// decomposition") when a point lies in no cube, InputError when it is outside the domain.
std::vector<int> best_chain(const WhitneyDecomposition& w, Point x, Point y, double alpha);

/// Upper estimate of d_alpha from polylines through the best chain, or the direct segment.
/// certified_lower is 0; chain_sum is the chain's sum of (diam Q)^alpha.
MetricEstimate d_alpha(const WhitneyDecomposition& w, Point x, Point y, double alpha);

/// d_alpha plus ||x - y||^alpha; certified_lower = ||x - y||^alpha.
MetricEstimate d_tilde(const WhitneyDecomposition& w, Point x, Point y, double alpha);

/// diam Q * rho(x_Q)^(alpha-1): the subhyperbolic length of a straight crossing of Q through
/// its centre. Chains weighted this way track the quadrature estimates more closely than
/// sums of (diam Q)^alpha.
double crossing_length(const WhitneyCube& q, double alpha);

/// Meeting point of two touching closed cubes (centre of their intersection).
Point touch_point(const Cube& a, const Cube& b);

}  // namespace subhyp
