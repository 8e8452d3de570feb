#include "subhyp/metrics.h"

#include "subhyp/errors.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>

namespace subhyp {

double alpha_from_p(double p, int n) {
    if (!(p > n)) throw InputError("p must exceed the dimension");
    return (p - n) / (p - 1);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in (0, 1]");
}

namespace {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol);
}

/// Integral over t in [0, T] of f(t) = L * rho(t)^(alpha-1) where rho(0) = 0.
double singular_piece(const std::function<double(double)>& rho, double len, double alpha, double T, double tol) {
    auto f = [&](double t) { return len * std::pow(rho(t), alpha - 1); };
    double sum = 0.0, prev_piece = 0.0, t = T;
    int growing = 0;
    for (int k = 0; k < 400; ++k) {
        double r1 = rho(t), r2 = rho(t / 2), r4 = rho(t / 4);
        if (r1 > 0 && std::abs(r1 - 2 * r2) <= 1e-9 * r1 && std::abs(r2 - 2 * r4) <= 1e-9 * r2) {
            double c = r1 / t;
            sum += len * std::pow(c, alpha - 1) * std::pow(t, alpha) / alpha;
            if (!(sum <= kDivergenceGuard)) throw NumericalError("divergent length");
            return sum;
        }
        double piece = integrate(f, t / 2, t, tol);
        sum += piece;
        if (!(sum <= kDivergenceGuard)) throw NumericalError("divergent length");
        if (k > 0) {
            double ratio = piece / prev_piece;
            if (ratio < 1.0) {
                growing = 0;
                if (piece * ratio / (1 - ratio) < tol * sum) return sum;
            } else if (++growing > 60) {
                throw NumericalError("divergent length");
            }
        }
        prev_piece = piece;
        t /= 2;
    }
    throw NumericalError("divergent length");
}

double segment_length(const Domain& d, Point p, Point q, double alpha, double tol) {
    double len = sup_norm(q - p);
    if (len == 0.0) return 0.0;
    double on = std::max(d.tolerance_eps(), 1e-13 * d.box_side());
    bool sp = d.boundary_distance(p) <= on, sq = d.boundary_distance(q) <= on;
    bool ok;
    if (sp && sq) {
        Point m = 0.5 * (p + q);
        ok = d.segment_in_domain(p, m, true) && d.segment_in_domain(q, m, true);
    } else if (sp) {
        ok = d.segment_in_domain(p, q, true);
    } else if (sq) {
        ok = d.segment_in_domain(q, p, true);
    } else {
        ok = d.segment_in_domain(p, q);
    }
    if (!ok) throw InputError("polyline leaves the domain");
    if (alpha == 1.0) return len;
    auto rho_fwd = [&](double t) { return d.boundary_distance(p + t * (q - p)); };
    auto rho_bwd = [&](double t) { return d.boundary_distance(q + t * (p - q)); };
    auto f = [&](double t) { return len * std::pow(rho_fwd(t), alpha - 1); };
    double total;
    if (sp && sq) {
        total = singular_piece(rho_fwd, len, alpha, 0.5, tol) + singular_piece(rho_bwd, len, alpha, 0.5, tol);
    } else if (sp) {
        total = singular_piece(rho_fwd, len, alpha, 0.5, tol) + integrate(f, 0.5, 1.0, tol);
    } else if (sq) {
        total = integrate(f, 0.0, 0.5, tol) + singular_piece(rho_bwd, len, alpha, 0.5, tol);
    } else {
        total = integrate(f, 0.0, 1.0, tol);
    }
    if (!(total <= kDivergenceGuard)) throw NumericalError("divergent length");
    return total;
}

int snap(const WhitneyDecomposition& w, Point p) {
    if (!w.domain().contains(p)) throw InputError("outside domain");
    int q = w.locate(p);
    if (q < 0) throw ResolutionError("refine decomposition");
    return q;
}

double polyline_or_inf(const Domain& d, const std::vector<Point>& pts, double alpha) {
    try {
        return subhyperbolic_length(d, pts, alpha);
    } catch (const InputError&) {
        return kInfinity;
    }
}

}  // namespace

double subhyperbolic_length(const Domain& d, const std::vector<Point>& polyline, double alpha, double quad_tol) {
    check_alpha(alpha);
    for (std::size_t i = 1; i + 1 < polyline.size(); ++i) {
        if (!d.contains(polyline[i])) throw InputError("polyline vertex outside the domain");
    }
    double total = 0.0;
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        total += segment_length(d, polyline[i - 1], polyline[i], alpha, quad_tol);
    }
    if (!(total <= kDivergenceGuard)) throw NumericalError("divergent length");
    return total;
}

ChainSearch::ChainSearch(const WhitneyDecomposition& w, double alpha)
    : w_(&w), alpha_(alpha), weight_(w.size()), dist_(w.size(), kInfinity), prev_(w.size(), -1) {
    for (std::size_t i = 0; i < w.size(); ++i) weight_[i] = std::pow(w.cubes()[i].cube.diam(), alpha);
}

void ChainSearch::run(const std::vector<std::pair<int, double>>& sources, double bound, int target,
                      const std::function<bool(int)>& allowed) {
    for (int t : touched_) {
        dist_[static_cast<std::size_t>(t)] = kInfinity;
        prev_[static_cast<std::size_t>(t)] = -1;
    }
    touched_.clear();
    settled_.clear();
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (auto [s, c] : sources) {
        auto& ds = dist_[static_cast<std::size_t>(s)];
        if (c < ds) {
            if (ds == kInfinity) touched_.push_back(s);
            ds = c;
            prev_[static_cast<std::size_t>(s)] = -1;
            pq.push({c, s});
        }
    }
    while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv > dist_[static_cast<std::size_t>(v)]) continue;
        if (dv > bound) break;
        settled_.push_back(v);
        if (v == target) break;
        for (int u : w_->neighbors(v)) {
            if (allowed && !allowed(u)) continue;
            double nd = dv + weight_[static_cast<std::size_t>(u)];
            auto& du = dist_[static_cast<std::size_t>(u)];
            if (nd < du) {
                if (du == kInfinity) touched_.push_back(u);
                du = nd;
                prev_[static_cast<std::size_t>(u)] = v;
                pq.push({nd, u});
            }
        }
    }
}

double ChainSearch::dist(int id) const { return dist_[static_cast<std::size_t>(id)]; }

std::vector<int> ChainSearch::path_to(int id) const {
    std::vector<int> path;
    if (dist(id) == kInfinity) return path;
    for (int v = id; v >= 0; v = prev_[static_cast<std::size_t>(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

double crossing_length(const WhitneyCube& q, double alpha) {
    return q.cube.diam() * std::pow(q.dist + q.cube.radius, alpha - 1);
}

Point touch_point(const Cube& a, const Cube& b) {
    double x0 = std::max(a.center.x - a.radius, b.center.x - b.radius);
    double x1 = std::min(a.center.x + a.radius, b.center.x + b.radius);
    double y0 = std::max(a.center.y - a.radius, b.center.y - b.radius);
    double y1 = std::min(a.center.y + a.radius, b.center.y + b.radius);
    return {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
}

std::vector<int> best_chain(const WhitneyDecomposition& w, Point x, Point y, double alpha) {
    check_alpha(alpha);
    int qx = snap(w, x), qy = snap(w, y);
    if (qx == qy) return {qx};
    ChainSearch search(w, alpha);
    search.run({{qx, search.weight(qx)}}, kInfinity, qy);
    return search.path_to(qy);
}

MetricEstimate d_alpha(const WhitneyDecomposition& w, Point x, Point y, double alpha) {
    check_alpha(alpha);
    const Domain& d = w.domain();
    MetricEstimate est;
    bool swapped = lex_less(y, x);
    if (swapped) std::swap(x, y);
    est.chain = best_chain(w, x, y, alpha);
    if (x == y) {
        if (swapped) std::reverse(est.chain.begin(), est.chain.end());
        return est;
    }
    if (est.chain.empty()) {
        est.upper = est.chain_sum = kInfinity;
        return est;
    }
    for (int q : est.chain) est.chain_sum += std::pow(w[q].cube.diam(), alpha);
    double best = kInfinity;
    if (d.segment_in_domain(x, y)) best = subhyperbolic_length(d, {x, y}, alpha);
    if (est.chain.size() > 1) {
        std::vector<Point> via_centres{x}, via_touch{x};
        for (std::size_t i = 1; i < est.chain.size(); ++i) {
            Point t = touch_point(w[est.chain[i - 1]].cube, w[est.chain[i]].cube);
            via_centres.push_back(t);
            via_touch.push_back(t);
            if (i + 1 < est.chain.size()) via_centres.push_back(w[est.chain[i]].cube.center);
        }
        via_centres.push_back(y);
        via_touch.push_back(y);
        best = std::min(best, polyline_or_inf(d, via_centres, alpha));
        best = std::min(best, polyline_or_inf(d, via_touch, alpha));
        // Greedy shortcut of the touch polyline with bounded look-ahead.
        std::vector<Point> pulled{via_touch.front()};
        std::size_t i = 0;
        while (i + 1 < via_touch.size()) {
            std::size_t j = std::min(via_touch.size() - 1, i + 16);
            while (j > i + 1 && !d.segment_in_domain(via_touch[i], via_touch[j])) --j;
            pulled.push_back(via_touch[j]);
            i = j;
        }
        if (pulled.size() < via_touch.size()) best = std::min(best, polyline_or_inf(d, pulled, alpha));
    }
    est.upper = best;
    if (swapped) std::reverse(est.chain.begin(), est.chain.end());
    return est;
}

MetricEstimate d_tilde(const WhitneyDecomposition& w, Point x, Point y, double alpha) {
    MetricEstimate est = d_alpha(w, x, y, alpha);
    double gap = std::pow(sup_norm(x - y), alpha);
    est.upper += gap;
    est.certified_lower = gap;
    return est;
}

}  // namespace subhyp
