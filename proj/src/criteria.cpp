#include "subhyp/criteria.h"

#include "subhyp/errors.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <random>

namespace subhyp {

namespace {

void check_exponent(const AlphaBoundary& ab, double p, const char* what) {
    double alpha = alpha_from_p(p);
    if (std::abs(ab.alpha() - alpha) > 1e-12) {
        throw InputError(std::string(what) + ": alpha-boundary built with alpha " + std::to_string(ab.alpha()) +
                         ", expected " + std::to_string(alpha));
    }
}

std::vector<double> element_values(const BoundaryFunction& f, const AlphaBoundary& ab) {
    std::vector<double> v(ab.elements().size());
    for (std::size_t e = 0; e < v.size(); ++e) v[e] = f(ab, static_cast<int>(e));
    return v;
}

}  // namespace

TraceNormReport variational_lambda(const BoundaryFunction& f, const AlphaBoundary& ab, double p,
                                   const VariationalOptions& opt) {
    check_exponent(ab, p, "variational_lambda");
    if (!(opt.eta >= 1)) throw InputError("eta must be at least 1");
    if (opt.max_candidates < 2) throw InputError("max_candidates must be at least 2");
    const WhitneyDecomposition& w = ab.decomposition();
    TraceNormReport rep;
    rep.eta = opt.eta;
    rep.p = p;
    std::vector<double> val = element_values(f, ab);
    const auto& elements = ab.elements();
    std::vector<int> cubes;
    if (opt.collar_epsilon) {
        cubes = collar_cubes(w, *opt.collar_epsilon);
    } else {
        cubes.resize(w.size());
        for (std::size_t q = 0; q < w.size(); ++q) cubes[q] = static_cast<int>(q);
    }
    std::vector<std::pair<double, int>> near;
    for (int q : cubes) {
        const Cube& c = w[q].cube;
        double reach = opt.eta * c.radius;
        near.clear();
        for (const auto& e : elements) {
            double d = sup_norm(e.anchor.p - c.center);
            if (d <= reach) near.push_back({d, e.id});
        }
        std::sort(near.begin(), near.end());
        int taken = 0, hi = -1, lo = -1;
        for (auto [d, id] : near) {
            if (taken == opt.max_candidates) break;
            if (!opt.ignore_agglutination && !ab.is_alpha_Q_visible(id, c)) continue;
            ++taken;
            if (hi < 0 || val[static_cast<std::size_t>(id)] > val[static_cast<std::size_t>(hi)]) hi = id;
            if (lo < 0 || val[static_cast<std::size_t>(id)] < val[static_cast<std::size_t>(lo)]) lo = id;
        }
        if (taken < 2) continue;
        double spread = val[static_cast<std::size_t>(hi)] - val[static_cast<std::size_t>(lo)];
        double term = std::pow(spread, p) / std::pow(c.diam(), p - 2);
        rep.per_cube_terms.push_back({q, hi, lo, term});
        rep.lambda_est += term;
    }
    rep.no_pairs = rep.per_cube_terms.empty();
    return rep;
}

std::vector<int> collar_cubes(const WhitneyDecomposition& w, double epsilon) {
    std::vector<int> out;
    for (std::size_t q = 0; q < w.size(); ++q) {
        if (w.cubes()[q].dist < epsilon) out.push_back(static_cast<int>(q));
    }
    return out;
}

void CollarConfig::validate(const WhitneyDecomposition& w) const {
    if (!(epsilon > 0)) throw InputError("epsilon must be positive");
    if (!(theta >= 1)) throw InputError("theta must be at least 1");
    if (!(eta >= 22 * theta * theta)) throw InputError("eta must be at least 22 theta^2");
    for (const auto& c : w.cubes()) {
        double d = c.cube.diam();
        if (c.dist < d / theta * (1 - 1e-12) || c.dist > theta * d * (1 + 1e-12)) {
            throw InputError("Whitney cubes do not satisfy the covering condition for theta " + std::to_string(theta));
        }
    }
}

std::vector<std::pair<int, double>> collar_weights(const WhitneyDecomposition& w, double epsilon) {
    const Domain& d = w.domain();
    std::vector<std::pair<int, double>> out;
    for (int q : collar_cubes(w, epsilon)) {
        const auto& wc = w[q];
        double area = wc.cube.diam() * wc.cube.diam();
        if (wc.dist + wc.cube.diam() < epsilon) {
            out.push_back({q, area});
            continue;
        }
        int inside = 0;
        for (int j = 0; j < 8; ++j) {
            for (int i = 0; i < 8; ++i) {
                Point x = wc.cube.center + wc.cube.radius * Point{(2 * i + 1) / 8.0 - 1, (2 * j + 1) / 8.0 - 1};
                if (d.boundary_distance(x) < epsilon) ++inside;
            }
        }
        if (inside > 0) out.push_back({q, area * inside / 64.0});
    }
    return out;
}

double covered_collar_area(const WhitneyDecomposition& w, double epsilon) {
    double total = 0.0;
    for (auto [q, a] : collar_weights(w, epsilon)) total += a;
    return total;
}

double collar_lp_norm(const BoundaryFunction& f, const AlphaBoundary& ab, const CollarConfig& cfg, double p) {
    const WhitneyDecomposition& w = ab.decomposition();
    cfg.validate(w);
    double total = 0.0;
    for (auto [q, a] : collar_weights(w, cfg.epsilon)) {
        total += std::pow(std::abs(f(ab, ab.omega_for_cube(q))), p) * a;
    }
    return total;
}

TraceNormW1p trace_norm_W1p(const BoundaryFunction& f, const AlphaBoundary& ab, const CollarConfig& cfg, double p) {
    TraceNormW1p out;
    out.collar_lp = collar_lp_norm(f, ab, cfg, p);
    VariationalOptions opt;
    opt.eta = cfg.eta;
    opt.collar_epsilon = cfg.epsilon;
    out.lambda = variational_lambda(f, ab, p, opt);
    out.value = std::pow(out.collar_lp, 1 / p) + std::pow(out.lambda.lambda_est, 1 / p);
    return out;
}

double SharpMaximalField::lp_norm(const WhitneyDecomposition& w, double p, std::optional<double> epsilon) const {
    double total = 0.0;
    for (std::size_t q = 0; q < w.size(); ++q) {
        const auto& wc = w.cubes()[q];
        if (epsilon && !(wc.dist < *epsilon)) continue;
        total += std::pow(values[q], p) * wc.cube.diam() * wc.cube.diam();
    }
    return std::pow(total, 1 / p);
}

SharpMaximalField sharp_maximal(const BoundaryFunction& f, const AlphaBoundary& ab_alpha,
                                const AlphaBoundary& ab_beta, double q, double p) {
    if (!(q > 2 && q < p)) throw InputError("sharp_maximal needs 2 < q < p");
    check_exponent(ab_alpha, p, "sharp_maximal");
    check_exponent(ab_beta, q, "sharp_maximal");
    if (&ab_alpha.decomposition() != &ab_beta.decomposition()) {
        throw InputError("alpha and beta boundaries must share a decomposition");
    }
    const WhitneyDecomposition& w = ab_alpha.decomposition();
    const double beta = ab_beta.alpha();
    constexpr int kRadii = 24;
    SharpMaximalField out;
    out.alpha = ab_alpha.alpha();
    out.beta = beta;
    const double top = w.domain().box_side();
    for (int j = 0; j < kRadii; ++j) out.radii.push_back(std::ldexp(top, -j));
    out.values.assign(w.size(), 0.0);
    out.empty.assign(w.size(), 0);

    const auto& elems = ab_beta.elements();
    std::vector<double> val(elems.size());
    double vmax = -kInfinity, vmin = kInfinity;
    for (std::size_t e = 0; e < elems.size(); ++e) {
        val[e] = f(ab_alpha, project_beta_to_alpha(ab_alpha, ab_beta, static_cast<int>(e)));
        vmax = std::max(vmax, val[e]);
        vmin = std::min(vmin, val[e]);
    }
    if (elems.empty()) {
        out.empty.assign(w.size(), 1);
        return out;
    }
    if (vmax == vmin) return out;

    // Crossing cost of each cube and, per element, its finest cubes with the straight-line
    // cost from the cube centre to the anchor.
    std::vector<double> weight(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) weight[k] = crossing_length(w.cubes()[k], beta);
    std::vector<std::vector<std::pair<int, double>>> reach(elems.size());
    for (const auto& e : elems) {
        for (int k : e.cubes) {
            double tail = std::pow(sup_norm(w[k].cube.center - e.anchor.p), beta) / beta;
            reach[static_cast<std::size_t>(e.id)].push_back({k, tail - weight[static_cast<std::size_t>(k)] / 2});
        }
    }

    std::vector<double> dist(w.size());
    using Item = std::pair<double, int>;
    for (std::size_t q0 = 0; q0 < w.size(); ++q0) {
        std::fill(dist.begin(), dist.end(), kInfinity);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[q0] = weight[q0] / 2;
        pq.push({dist[q0], static_cast<int>(q0)});
        while (!pq.empty()) {
            auto [dv, v] = pq.top();
            pq.pop();
            if (dv > dist[static_cast<std::size_t>(v)]) continue;
            for (int u : w.neighbors(v)) {
                double nd = dv + weight[static_cast<std::size_t>(u)];
                if (nd < dist[static_cast<std::size_t>(u)]) {
                    dist[static_cast<std::size_t>(u)] = nd;
                    pq.push({nd, u});
                }
            }
        }
        // Bucket j holds the elements whose ball radius rho^(1/beta) lies in (r_{j+1}, r_j].
        std::array<double, kRadii> hi, lo;
        std::array<int, kRadii> count{};
        hi.fill(-kInfinity);
        lo.fill(kInfinity);
        for (std::size_t e = 0; e < elems.size(); ++e) {
            double key = kInfinity;
            for (auto [k, extra] : reach[e]) key = std::min(key, dist[static_cast<std::size_t>(k)] + extra);
            double r = std::pow(key, 1 / beta);
            if (!(r <= top)) continue;
            int j = std::min(kRadii - 1, static_cast<int>(std::floor(std::log2(top / r))));
            while (j > 0 && std::ldexp(top, -j) < r) --j;
            hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], val[e]);
            lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], val[e]);
            ++count[static_cast<std::size_t>(j)];
        }
        double best = 0.0, h = -kInfinity, l = kInfinity;
        int n = 0;
        for (int j = kRadii - 1; j >= 0; --j) {
            h = std::max(h, hi[static_cast<std::size_t>(j)]);
            l = std::min(l, lo[static_cast<std::size_t>(j)]);
            n += count[static_cast<std::size_t>(j)];
            if (n >= 2) best = std::max(best, (h - l) / std::ldexp(top, -j));
        }
        out.values[q0] = best;
        out.empty[q0] = n < 2;
    }
    return out;
}

HolderReport check_holder(const ExtensionField& ef, double p, int n_pairs, unsigned seed,
                          const std::vector<std::pair<Point, Point>>& extra) {
    double alpha = alpha_from_p(p);
    const WhitneyDecomposition& w = ef.decomposition();
    std::mt19937 rng(seed);
    std::vector<std::pair<Point, Point>> pairs;
    for (int i = 0; i < n_pairs; ++i) {
        Point x = sample_covered(w, rng);
        Point y = sample_covered(w, rng);
        pairs.push_back({x, y});
    }
    for (const auto& pr : extra) {
        if (ef.evaluable(pr.first) && ef.evaluable(pr.second) && w.locate(pr.first) >= 0 &&
            w.locate(pr.second) >= 0) {
            pairs.push_back(pr);
        }
    }
    HolderReport rep;
    for (auto [x, y] : pairs) {
        double num = std::abs(ef.evaluate(x) - ef.evaluate(y));
        double ratio = 0.0;
        if (num > 0) ratio = num / std::pow(d_tilde(w, x, y, alpha).upper, 1 - 1 / p);
        rep.pairs.push_back({x, y, ratio});
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    return rep;
}

std::vector<std::pair<Point, Point>> cross_slit_pairs(const Domain& d, int per_slit) {
    std::vector<std::pair<Point, Point>> out;
    for (const auto& s : d.segments()) {
        if (s.kind != SegmentKind::slit) continue;
        Point dir = s.b - s.a;
        double len = euclid_norm(dir);
        Point n{-dir.y / len, dir.x / len};
        for (double t : {0.35, 0.5, 0.65}) {
            Point m = s.a + t * dir;
            for (int k = 0; k < per_slit; ++k) {
                double h = len * std::ldexp(1.0, -(k + 3));
                out.push_back({m + h * n, m - h * n});
            }
        }
    }
    return out;
}

PoincareReport check_sobolev_poincare(const ExtensionField& ef, double q, int n_cubes, unsigned seed) {
    if (!(q > 2)) throw InputError("q must exceed the dimension");
    const WhitneyDecomposition& w = ef.decomposition();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(w.size()) - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PoincareReport rep;
    for (int i = 0; i < n_cubes; ++i) {
        int k = pick(rng);
        const Cube& c = w[k].cube;
        double avg = cube_gradient_integral(ef, k, q) / (c.diam() * c.diam());
        double scale = c.diam() * std::pow(avg, 1 / q);
        ++rep.cubes;
        for (int t = 0; t < 16; ++t) {
            Point x = c.center + c.radius * Point{u(rng), u(rng)};
            Point y = c.center + c.radius * Point{u(rng), u(rng)};
            double num = std::abs(ef.evaluate(x) - ef.evaluate(y));
            if (num <= 1e-14) continue;
            rep.max_ratio = std::max(rep.max_ratio, scale > 0 ? num / scale : kInfinity);
        }
    }
    return rep;
}

}  // namespace subhyp
