#pragma once

#include "subhyp/extension.h"

#include <optional>
#include <vector>

namespace subhyp {

struct LambdaTerm {
    int cube = -1;
    int omega1 = -1;  // element with the largest f among the candidates
    int omega2 = -1;  // element with the smallest f
    double value = 0.0;
};

/// Per-cube maxima summed over Whitney cubes: a lower bound for the packing supremum.
struct TraceNormReport {
    double lambda_est = 0.0;
    std::vector<LambdaTerm> per_cube_terms;  // cubes with at least two candidates, by cube id
    double eta = 41.0;
    double p = 4.0;
    bool restricted_to_whitney = true;
    bool no_pairs = false;  // no cube had two candidates
};

struct VariationalOptions {
    double eta = 41.0;
    /// Only cubes meeting the epsilon-collar contribute.
    std::optional<double> collar_epsilon;
    /// Use every element anchored in eta*Q, skipping the visibility filter.
    bool ignore_agglutination = false;
    int max_candidates = 64;
};

/// Throws InputError unless p > 2 and ab was built with alpha = (p-2)/(p-1).
TraceNormReport variational_lambda(const BoundaryFunction& f, const AlphaBoundary& ab, double p,
                                   const VariationalOptions& opt = {});

/// Cubes with dist(Q, boundary) < epsilon, ascending.
std::vector<int> collar_cubes(const WhitneyDecomposition& w, double epsilon);

struct CollarConfig {
    double epsilon = 0.1;
    double theta = 4.0;
    double eta = 352.0;

    /// Throws InputError unless epsilon > 0, theta >= 1, eta >= 22 theta^2 and every cube of w
    /// satisfies diam/theta <= dist <= theta diam.
    void validate(const WhitneyDecomposition& w) const;
};

/// Collar cubes with the area of Q inside the collar, from an 8x8 midpoint sample on
/// cubes that straddle its edge.
std::vector<std::pair<int, double>> collar_weights(const WhitneyDecomposition& w, double epsilon);
double covered_collar_area(const WhitneyDecomposition& w, double epsilon);

/// Sum of |f(omega_Q)|^p times the collar area of Q.
double collar_lp_norm(const BoundaryFunction& f, const AlphaBoundary& ab, const CollarConfig& cfg, double p);

struct TraceNormW1p {
    double collar_lp = 0.0;  // p-th power
    TraceNormReport lambda;  // collar-restricted
    double value = 0.0;  // collar_lp^(1/p) + lambda^(1/p)
};

TraceNormW1p trace_norm_W1p(const BoundaryFunction& f, const AlphaBoundary& ab, const CollarConfig& cfg, double p);

struct SharpMaximalField {
    std::vector<double> values;  // per cube, at its centre
    std::vector<char> empty;  // no ball held two elements at any radius
    std::vector<double> radii;
    double alpha = 0.0;
    double beta = 0.0;

    /// Sum of value^p |Q| over all cubes, or over cubes with dist(Q, boundary) < epsilon.
    double lp_norm(const WhitneyDecomposition& w, double p, std::optional<double> epsilon = std::nullopt) const;
};

/// f# at every cube centre over 24 dyadic radii r_j = side * 2^-j. The beta-distance from the
/// centre to an element is the cheapest chain of crossing lengths to one of its finest cubes
/// plus (1/beta)|x_K - anchor|^beta; an element lies in the ball of radius r when that
/// distance is at most r^beta. ab_alpha and ab_beta share one decomposition, with
/// alpha = (p-2)/(p-1) and beta = (q-2)/(q-1), 2 < q < p.
SharpMaximalField sharp_maximal(const BoundaryFunction& f, const AlphaBoundary& ab_alpha,
                                const AlphaBoundary& ab_beta, double q, double p);

struct HolderPair {
    Point x, y;
    double ratio = 0.0;
};

struct HolderReport {
    double max_ratio = 0.0;
    std::vector<HolderPair> pairs;
};

/// |F(x) - F(y)| / d_tilde_upper(x, y)^(1 - 1/p) on n_pairs random covered pairs plus `extra`.
/// The upper estimate of d_tilde makes every ratio a lower bound for the true constant.
HolderReport check_holder(const ExtensionField& ef, double p, int n_pairs, unsigned seed,
                          const std::vector<std::pair<Point, Point>>& extra = {});

/// Pairs mirrored across each slit, at heights 2^-k times the slit length.
std::vector<std::pair<Point, Point>> cross_slit_pairs(const Domain& d, int per_slit = 8);

struct PoincareReport {
    double max_ratio = 0.0;
    int cubes = 0;
};

/// |F(x) - F(y)| / (diam Q (avg_Q |grad F|^q)^(1/q)) over random point pairs in sampled cubes.
PoincareReport check_sobolev_poincare(const ExtensionField& ef, double q, int n_cubes, unsigned seed);

}  // namespace subhyp
