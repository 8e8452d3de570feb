#include "subhyp/extension.h"

#include "subhyp/errors.h"

#include <algorithm>
#include <cmath>

namespace subhyp {

FaceSelector FaceSelector::parse(const std::string& text) {
    FaceSelector f;
    f.text_ = text;
    if (text == "any") {
        f.kind_ = Kind::any;
    } else if (text == "slit+" || text == "slit-") {
        f.kind_ = Kind::slit_side;
        f.side_ = text.back() == '+' ? 1 : -1;
    } else if (text == "slit") {
        f.kind_ = Kind::slit_point;
    } else if (text == "outer") {
        f.kind_ = Kind::outer;
    } else if (text == "hole") {
        f.kind_ = Kind::hole;
    } else {
        std::string digits = text;
        int side = 0;
        if (!digits.empty() && (digits.back() == '+' || digits.back() == '-')) {
            side = digits.back() == '+' ? 1 : -1;
            digits.pop_back();
        }
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
            throw InputError("bad face selector '" + text + "'");
        }
        f.kind_ = Kind::exact;
        f.tag_ = {std::stoi(digits), side};
    }
    return f;
}

bool FaceSelector::matches(const Domain& d, const BoundaryElement& e) const {
    const FaceTag& t = e.anchor.face;
    auto kind = [&]() {
        return t.segment >= 0 ? d.segments()[static_cast<std::size_t>(t.segment)].kind : SegmentKind::outer;
    };
    switch (kind_) {
        case Kind::any: return true;
        case Kind::exact: return t == tag_;
        case Kind::slit_side: return kind() == SegmentKind::slit && t.side == side_;
        case Kind::slit_point: return kind() == SegmentKind::slit && t.side == 0;
        case Kind::outer: return kind() == SegmentKind::outer;
        case Kind::hole: return kind() == SegmentKind::hole;
    }
    return false;
}

BoundaryFunction& BoundaryFunction::add(const std::string& face, const std::string& expr,
                                        std::optional<std::array<Point, 2>> box) {
    Expression e = Expression::parse(expr);
    return add(face, [e](Point a) { return e(a.x, a.y); }, expr, box);
}

BoundaryFunction& BoundaryFunction::add(const std::string& face, std::function<double(Point)> fn,
                                        std::string description, std::optional<std::array<Point, 2>> box) {
    BoundaryRule r;
    r.face = FaceSelector::parse(face);
    r.box = box;
    r.value = [fn = std::move(fn)](const Domain&, const BoundaryElement& e) { return fn(e.anchor.p); };
    r.description = std::move(description);
    rules_.push_back(std::move(r));
    return *this;
}

BoundaryFunction BoundaryFunction::constant(double c) {
    BoundaryFunction f;
    f.add("any", [c](Point) { return c; }, std::to_string(c));
    return f;
}

BoundaryFunction BoundaryFunction::combine(double a, const BoundaryFunction& f, double b, const BoundaryFunction& g) {
    BoundaryFunction h;
    BoundaryRule r;
    r.face = FaceSelector::parse("any");
    r.value = [a, f, b, g](const Domain& d, const BoundaryElement& e) { return a * f(d, e) + b * g(d, e); };
    r.description = "linear combination";
    h.rules_.push_back(std::move(r));
    return h;
}

double BoundaryFunction::operator()(const Domain& d, const BoundaryElement& e) const {
    for (const auto& r : rules_) {
        if (!r.face.matches(d, e)) continue;
        if (r.box) {
            Point lo = (*r.box)[0], hi = (*r.box)[1];
            Point p = e.anchor.p;
            if (p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y) continue;
        }
        double v = r.value(d, e);
        if (!std::isfinite(v)) {
            throw DataRuleError("rule '" + r.description + "' is not finite at element " + std::to_string(e.id));
        }
        return v;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "no rule matches element %d at (%.17g, %.17g) face %s", e.id, e.anchor.p.x,
                  e.anchor.p.y, e.anchor.face.str().c_str());
    throw DataRuleError(buf);
}

double BoundaryFunction::operator()(const AlphaBoundary& ab, int element) const {
    return (*this)(ab.decomposition().domain(), ab.element(element));
}

double bump(double t) {
    double s = 1 - t * t;
    return s > 0 ? std::exp(-1 / s) : 0.0;
}

double bump_derivative(double t) {
    double s = 1 - t * t;
    return s > 0 ? std::exp(-1 / s) * (-2 * t / (s * s)) : 0.0;
}

std::vector<PUEntry> partition_of_unity(const WhitneyDecomposition& w, Point x) {
    std::vector<int> cand;
    int k = w.locate(x);
    if (k >= 0) {
        cand = w.neighbors(k);
        cand.push_back(k);
    } else {
        double h = w.finest_side();
        cand = w.cubes_in_box(x - Point{h, h}, x + Point{h, h});
    }
    std::vector<PUEntry> out;
    double sum = 0.0;
    Point gsum;
    for (int q : cand) {
        const Cube& c = w[q].cube;
        double s = 1.125 * c.radius;
        double tx = (x.x - c.center.x) / s, ty = (x.y - c.center.y) / s;
        double bx = bump(tx), by = bump(ty);
        double psi = bx * by;
        if (psi <= 0.0) continue;
        Point g{bump_derivative(tx) / s * by, bx * bump_derivative(ty) / s};
        out.push_back({q, psi, g});
        sum += psi;
        gsum = gsum + g;
    }
    if (!(sum > 0.0)) throw ResolutionError("point lies in the coverage deficit; refine decomposition");
    for (auto& e : out) {
        e.grad = (1 / sum) * e.grad - (e.value / (sum * sum)) * gsum;
        e.value /= sum;
    }
    std::sort(out.begin(), out.end(), [](const PUEntry& a, const PUEntry& b) { return a.cube < b.cube; });
    return out;
}

std::pair<double, Point> ExtensionField::value_and_gradient(Point x) const {
    auto pu = partition_of_unity(*w_, x);
    double base = c_[static_cast<std::size_t>(pu.front().cube)];
    double v = 0.0;
    Point g;
    for (const auto& e : pu) {
        double dc = c_[static_cast<std::size_t>(e.cube)] - base;
        v += dc * e.value;
        g = g + dc * e.grad;
    }
    return {base + v, g};
}

double ExtensionField::evaluate(Point x) const { return value_and_gradient(x).first; }

Point ExtensionField::gradient(Point x) const { return value_and_gradient(x).second; }

bool ExtensionField::evaluable(Point x) const {
    try {
        partition_of_unity(*w_, x);
        return true;
    } catch (const ResolutionError&) {
        return false;
    }
}

ExtensionField build_extension(const BoundaryFunction& f, const WhitneyDecomposition& w, const AlphaBoundary& ab,
                               double sigma, double b_c) {
    if (&ab.decomposition() != &w) throw InputError("alpha-boundary was built on another decomposition");
    if (!(sigma > 0)) throw InputError("sigma must be positive");
    ExtensionField ef;
    ef.w_ = &w;
    ef.sigma_ = sigma;
    ef.b_c_ = b_c;
    ef.c_.resize(w.size());
    for (std::size_t q = 0; q < w.size(); ++q) {
        if (w.cubes()[q].cube.diam() <= sigma) {
            ef.c_[q] = f(ab, ab.omega_for_cube(static_cast<int>(q)));
        } else {
            ef.c_[q] = b_c;
        }
    }
    return ef;
}

int trace_cube(const AlphaBoundary& ab, int element) {
    const WhitneyDecomposition& w = ab.decomposition();
    const BoundaryElement& e = ab.element(element);
    std::vector<int> cand;
    for (std::size_t q = 0; q < w.size(); ++q) {
        const Cube& c = w.cubes()[q].cube;
        if (sup_norm(c.center - e.anchor.p) <= 10 * c.radius) cand.push_back(static_cast<int>(q));
    }
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) { return w[a].level < w[b].level; });
    for (int q : cand) {
        if (ab.is_alpha_Q_visible(element, w[q].cube)) return q;
    }
    return -1;
}

TraceResult trace(const std::function<double(Point)>& F, const std::function<bool(Point)>& evaluable,
                  const AlphaBoundary& ab, int element, double trace_tol) {
    TraceResult r;
    r.cube = trace_cube(ab, element);
    if (r.cube < 0) throw NumericalError("no visible representative cube for element " + std::to_string(element));
    Point a = ab.element(element).anchor.p;
    Point x0 = ab.decomposition()[r.cube].cube.center;
    for (int k = 1; k <= 12; ++k) {
        double t = std::ldexp(1.0, -k);
        Point y = a + t * (x0 - a);
        if (!evaluable(y)) break;
        r.params.push_back(t);
        r.ladder.push_back(F(y));
    }
    std::size_t n = r.ladder.size();
    if (n < 3) throw NumericalError("trace ladder too short for element " + std::to_string(element));
    double last = 2 * r.ladder[n - 1] - r.ladder[n - 2];
    double prev = 2 * r.ladder[n - 2] - r.ladder[n - 3];
    r.value = last;
    r.residual = std::abs(last - prev);
    if (r.residual > trace_tol * std::max(1.0, std::abs(r.value))) {
        std::string msg = "trace ladder did not converge for element " + std::to_string(element) + ":";
        for (double v : r.ladder) msg += " " + std::to_string(v);
        throw NumericalError(msg);
    }
    return r;
}

TraceResult trace(const ExtensionField& ef, const AlphaBoundary& ab, int element, double trace_tol) {
    return trace([&](Point y) { return ef.evaluate(y); }, [&](Point y) { return ef.evaluable(y); }, ab, element,
                 trace_tol);
}

double cube_gradient_integral(const ExtensionField& ef, int q, double p, int subdivisions) {
    static const double node[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double weight[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    if (subdivisions < 1) throw InputError("subdivisions must be positive");
    const WhitneyDecomposition& w = ef.decomposition();
    const Cube& c = w[q].cube;
    // Breakpoints in [-1, 1] at the inner edges of the neighbours' stars.
    std::vector<double> cuts{-1.0, 1.0};
    double inner = 1.0;
    for (int k : w.neighbors(q)) {
        double b = std::min(1.0, w[k].cube.radius / (8 * c.radius));
        cuts.push_back(b - 1);
        cuts.push_back(1 - b);
        inner = std::min(inner, 1 - b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::pair<double, double>> parts;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        double h = (cuts[i] - cuts[i - 1]) / subdivisions;
        for (int s = 0; s < subdivisions; ++s) parts.push_back({cuts[i - 1] + s * h, cuts[i - 1] + (s + 1) * h});
    }
    double sum = 0.0;
    for (auto [y0, y1] : parts) {
        for (auto [x0, x1] : parts) {
            // Only phi_Q is nonzero away from the bands, so the gradient vanishes there.
            if (x0 >= -inner && x1 <= inner && y0 >= -inner && y1 <= inner) continue;
            double hx = (x1 - x0) / 2, hy = (y1 - y0) / 2;
            for (int j = 0; j < 4; ++j) {
                for (int i = 0; i < 4; ++i) {
                    Point u{x0 + hx * (node[i] + 1), y0 + hy * (node[j] + 1)};
                    Point g = ef.gradient(c.center + c.radius * u);
                    sum += weight[i] * weight[j] * hx * hy * std::pow(euclid_norm(g), p);
                }
            }
        }
    }
    return sum * c.radius * c.radius;
}

double seminorm_quadrature(const ExtensionField& ef, double p, int subdivisions) {
    double total = 0.0;
    for (int q = 0; q < static_cast<int>(ef.decomposition().size()); ++q) {
        total += cube_gradient_integral(ef, q, p, subdivisions);
    }
    return total;
}

double seminorm_vbound(const ExtensionField& ef, double p) {
    const WhitneyDecomposition& w = ef.decomposition();
    const auto& c = ef.coefficients();
    double total = 0.0;
    for (int q = 0; q < static_cast<int>(w.size()); ++q) {
        for (int k : w.neighbors(q)) {
            if (k < q) continue;
            double dc = std::abs(c[static_cast<std::size_t>(q)] - c[static_cast<std::size_t>(k)]);
            if (dc == 0.0) continue;
            total += std::pow(dc, p) * std::pow(w[q].cube.diam() + w[k].cube.diam(), 2 - p);
        }
    }
    return total;
}

}  // namespace subhyp
