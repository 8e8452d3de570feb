#pragma once

#include "subhyp/alpha_boundary.h"
#include "subhyp/expr.h"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace subhyp {

/// Which elements a rule applies to: "any", an exact face tag such as "4+" or "2",
/// "slit+" / "slit-" (one side of any slit), "slit" (slit points without a side: tips and
/// merged approaches), "outer" or "hole".
class FaceSelector {
public:
    static FaceSelector parse(const std::string& text);
    bool matches(const Domain& d, const BoundaryElement& e) const;
    const std::string& text() const { return text_; }

private:
    enum class Kind { any, exact, slit_side, slit_point, outer, hole };
    Kind kind_ = Kind::any;
    FaceTag tag_;
    int side_ = 0;
    std::string text_ = "any";
};

using ElementFunction = std::function<double(const Domain&, const BoundaryElement&)>;

struct BoundaryRule {
    FaceSelector face;
    std::optional<std::array<Point, 2>> box;  // closed anchor box [lo, hi]
    ElementFunction value;
    std::string description;
};

/// f on the alpha-boundary: the first rule matching an element gives its value.
class BoundaryFunction {
public:
    BoundaryFunction& add(const std::string& face, const std::string& expr,
                          std::optional<std::array<Point, 2>> box = std::nullopt);
    BoundaryFunction& add(const std::string& face, std::function<double(Point)> fn, std::string description,
                          std::optional<std::array<Point, 2>> box = std::nullopt);

    static BoundaryFunction constant(double c);
    /// a*f + b*g, elementwise.
    static BoundaryFunction combine(double a, const BoundaryFunction& f, double b, const BoundaryFunction& g);

    /// Throws DataRuleError naming the element when no rule matches.
    double operator()(const Domain& d, const BoundaryElement& e) const;
    double operator()(const AlphaBoundary& ab, int element) const;

    const std::vector<BoundaryRule>& rules() const { return rules_; }

private:
    std::vector<BoundaryRule> rules_;
};

struct PUEntry {
    int cube = -1;
    double value = 0.0;
    Point grad;
};

/// Bump profile exp(-1/(1-t^2)) on (-1,1), zero outside.
double bump(double t);
double bump_derivative(double t);

/// phi_Q(x) for every cube with x in Q* = (9/8)Q. Throws ResolutionError when no Q* holds x.
std::vector<PUEntry> partition_of_unity(const WhitneyDecomposition& w, Point x);

class ExtensionField {
public:
    const WhitneyDecomposition& decomposition() const { return *w_; }
    const std::vector<double>& coefficients() const { return c_; }
    double sigma() const { return sigma_; }
    double b_c() const { return b_c_; }

    /// Throws ResolutionError in the deficit region.
    double evaluate(Point x) const;
    Point gradient(Point x) const;
    std::pair<double, Point> value_and_gradient(Point x) const;
    /// True when some Q* holds x.
    bool evaluable(Point x) const;

private:
    friend ExtensionField build_extension(const BoundaryFunction&, const WhitneyDecomposition&, const AlphaBoundary&,
                                          double, double);
    const WhitneyDecomposition* w_ = nullptr;
    std::vector<double> c_;
    double sigma_ = kInfinity;
    double b_c_ = 0.0;
};

/// c_Q = f(omega_{Q,alpha}) when diam Q <= sigma, else b_c.
ExtensionField build_extension(const BoundaryFunction& f, const WhitneyDecomposition& w, const AlphaBoundary& ab,
                               double sigma = kInfinity, double b_c = 0.0);

struct TraceResult {
    double value = 0.0;
    double residual = 0.0;
    int cube = -1;  // representative cube of the approach
    std::vector<double> params;  // t_k of the evaluated ladder points
    std::vector<double> ladder;  // F at those points
};

/// Limit of F along [x_Q0, anchor) at t_k = 2^-k, k = 1..12, with first-order Richardson
/// extrapolation. Q0 is the largest cube within 10 radii of the anchor that the element is
/// (alpha,Q0)-visible from. Throws NumericalError when the residual exceeds
/// trace_tol * max(1, |value|) or fewer than three ladder points are evaluable.
TraceResult trace(const std::function<double(Point)>& F, const std::function<bool(Point)>& evaluable,
                  const AlphaBoundary& ab, int element, double trace_tol = 1e-3);
TraceResult trace(const ExtensionField& ef, const AlphaBoundary& ab, int element, double trace_tol = 1e-3);

/// Representative cube used by trace, or -1.
int trace_cube(const AlphaBoundary& ab, int element);

/// Integral of |grad F|^p (Euclidean norm): per cube, 4x4 Gauss on the cells cut out by the
/// neighbours' star bands, each band split `subdivisions` times. Cells where only phi_Q is
/// nonzero are skipped.
double seminorm_quadrature(const ExtensionField& ef, double p, int subdivisions = 1);
/// The same rule restricted to cube q.
double cube_gradient_integral(const ExtensionField& ef, int q, double p, int subdivisions = 1);
/// Sum over touching pairs of |c_Q - c_K|^p (diam Q + diam K)^(2-p).
double seminorm_vbound(const ExtensionField& ef, double p);

}  // namespace subhyp
