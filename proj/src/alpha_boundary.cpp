#include "subhyp/alpha_boundary.h"

#include "subhyp/errors.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace subhyp {

namespace {

double point_cube_dist(Point a, const Cube& c) { return std::max(0.0, sup_norm(a - c.center) - c.radius); }

bool contains_sorted(const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); }

bool intersects_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

AlphaBoundary::AlphaBoundary(const WhitneyDecomposition& w, const AlphaBoundaryOptions& opt) : w_(&w), opt_(opt) {
    check_alpha(opt.alpha);
    if (opt.n_scales < 1) throw InputError("n_scales must be positive");
    if (!(opt.merge_tol > 0)) throw InputError("merge_tol must be positive");
    if (opt.sample_density < 1) throw InputError("sample_density must be positive");
    int required = opt.n_scales + 2;
    if (w.depth_limit() < required) {
        throw ResolutionError("alpha-boundary needs decomposition depth >= " + std::to_string(required));
    }
    const Domain& d = w.domain();
    for (int k = 0; k < opt.n_scales; ++k) scales_.push_back(std::ldexp(d.box_side(), -(k + 1)));

    ChainSearch search(w, opt.alpha);
    int base = w.locate(d.basepoint());
    if (base < 0) throw ResolutionError("basepoint lies in no cube; refine decomposition");
    search.run({{base, search.weight(base)}});
    base_dist_.assign(w.size(), kInfinity);
    for (std::size_t i = 0; i < w.size(); ++i) base_dist_[i] = search.dist(static_cast<int>(i));

    // Boundary samples along every segment, endpoints included.
    double spacing = finest_scale() / opt.sample_density;
    std::set<long long> seen;
    for (const auto& s : d.segments()) {
        double len = euclid_norm(s.b - s.a);
        int n = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-9)));
        for (int i = 0; i <= n; ++i) {
            Point p = i == n ? s.b : s.a + (static_cast<double>(i) / n) * (s.b - s.a);
            long long k = key(p);
            if (!seen.insert(k).second) continue;
            BoundarySample sample;
            sample.p = p;
            samples_.push_back(sample);
        }
    }
    for (auto& sample : samples_) {
        const AnchorGroups& g = ensure_groups(sample.p, search);
        for (int e : g.element_ids) {
            if (e >= 0) sample.elements.push_back(e);
        }
        sample.inaccessible = sample.elements.empty();
    }
    cube_omega_.assign(w.size(), -1);
    for (std::size_t q = 0; q < w.size(); ++q) {
        const auto& c = w.cubes()[q];
        const AnchorGroups& g = ensure_groups(c.anchor.p, search);
        int k = approach_cube(c.anchor.p, c.cube.center);
        for (std::size_t i = 0; i < g.groups.size() && k >= 0; ++i) {
            if (contains_sorted(g.groups[i], k)) cube_omega_[q] = g.element_ids[i];
        }
    }
    // Ladders for inaccessible samples: basepoint distance of every scale's cluster.
    for (auto& sample : samples_) {
        if (!sample.inaccessible) continue;
        const AnchorGroups* g = find_groups(sample.p);
        std::vector<int> finest;
        for (const auto& grp : g->groups) finest.insert(finest.end(), grp.begin(), grp.end());
        std::sort(finest.begin(), finest.end());
        for (double delta : scales_) {
            double best = kInfinity;
            if (!finest.empty()) {
                for (const auto& comp : components(scale_set(sample.p, delta))) {
                    if (!intersects_sorted(comp, finest)) continue;
                    for (int c : comp) best = std::min(best, base_dist_[static_cast<std::size_t>(c)]);
                }
            }
            sample.ladder.push_back(best);
        }
    }
}

long long AlphaBoundary::key(Point p) const {
    const Domain& d = w_->domain();
    double unit = 1e-9 * d.box_side();
    long long kx = std::llround((p.x - d.box_origin().x) / unit);
    long long ky = std::llround((p.y - d.box_origin().y) / unit);
    return kx * 2000000007LL + ky;
}

const AlphaBoundary::AnchorGroups* AlphaBoundary::find_groups(Point anchor) const {
    auto it = anchors_.find(key(anchor));
    return it == anchors_.end() ? nullptr : &it->second;
}

AlphaBoundary::AnchorGroups& AlphaBoundary::ensure_groups(Point anchor, ChainSearch& search) {
    long long k = key(anchor);
    auto it = anchors_.find(k);
    if (it != anchors_.end()) return it->second;
    AnchorGroups g = compute_groups(anchor, search);
    const Domain& d = w_->domain();
    const auto& segs = d.segments();
    for (std::size_t i = 0; i < g.groups.size(); ++i) {
        if (!(g.group_distance[i] <= opt_.guard)) {
            g.element_ids.push_back(-1);
            continue;
        }
        BoundaryElement e;
        e.id = static_cast<int>(elements_.size());
        e.cubes = g.groups[i];
        e.representative = e.cubes.front();
        e.basepoint_distance = g.group_distance[i];
        Point centroid;
        for (int c : e.cubes) centroid = centroid + (1.0 / e.cubes.size()) * (*w_)[c].cube.center;
        e.anchor = {anchor, d.face_at(anchor, centroid)};
        if (e.anchor.face.side != 0) {
            const auto& s = segs[static_cast<std::size_t>(e.anchor.face.segment)];
            for (int c : e.cubes) {
                double side = cross(s.b - s.a, (*w_)[c].cube.center - anchor);
                if (side * e.anchor.face.side < 0) e.anchor.face.side = 0;
            }
        }
        g.element_ids.push_back(e.id);
        elements_.push_back(std::move(e));
    }
    return anchors_.emplace(k, std::move(g)).first->second;
}

std::vector<int> AlphaBoundary::scale_set(Point anchor, double delta) const {
    std::vector<int> out;
    for (int id : w_->cubes_in_box(anchor - Point{delta, delta}, anchor + Point{delta, delta})) {
        const Cube& c = (*w_)[id].cube;
        if (c.diam() <= delta * (1 + 1e-12) && point_cube_dist(anchor, c) <= delta * (1 + 1e-12)) out.push_back(id);
    }
    return out;
}

std::vector<std::vector<int>> AlphaBoundary::components(const std::vector<int>& cubes) const {
    std::vector<std::vector<int>> out;
    std::vector<char> done(cubes.size(), 0);
    for (std::size_t s = 0; s < cubes.size(); ++s) {
        if (done[s]) continue;
        std::vector<int> comp, stack{static_cast<int>(s)};
        done[s] = 1;
        while (!stack.empty()) {
            int idx = stack.back();
            stack.pop_back();
            comp.push_back(cubes[static_cast<std::size_t>(idx)]);
            for (int nb : w_->neighbors(cubes[static_cast<std::size_t>(idx)])) {
                auto it = std::lower_bound(cubes.begin(), cubes.end(), nb);
                if (it == cubes.end() || *it != nb) continue;
                auto pos = static_cast<std::size_t>(it - cubes.begin());
                if (done[pos]) continue;
                done[pos] = 1;
                stack.push_back(static_cast<int>(pos));
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

double AlphaBoundary::cluster_cost(ChainSearch& search, const std::vector<int>& from, const std::vector<int>& to,
                                   double bound) const {
    if (intersects_sorted(from, to)) return 0.0;
    std::vector<std::pair<int, double>> sources;
    for (int c : from) sources.push_back({c, 0.0});
    double max_w = 0.0;
    for (int c : to) max_w = std::max(max_w, search.weight(c));
    search.run(sources, bound + max_w);
    double best = kInfinity;
    for (int c : to) best = std::min(best, search.dist(c) - search.weight(c));
    return best;
}

AlphaBoundary::AnchorGroups AlphaBoundary::compute_groups(Point anchor, ChainSearch& search) const {
    AnchorGroups g;
    g.anchor.p = anchor;
    double delta = finest_scale();
    auto all = components(scale_set(anchor, delta));
    std::vector<std::vector<int>> comps;
    for (auto& comp : all) {
        if (sees_anchor(comp, anchor)) comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    UnionFind uf(comps.size());
    double bound = opt_.merge_tol * std::pow(delta, opt_.alpha);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        for (std::size_t j = i + 1; j < comps.size(); ++j) {
            if (uf.find(static_cast<int>(i)) == uf.find(static_cast<int>(j))) continue;
            if (cluster_cost(search, comps[i], comps[j], bound) < bound) uf.unite(static_cast<int>(i), static_cast<int>(j));
        }
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (uf.find(static_cast<int>(i)) != static_cast<int>(i)) continue;
        std::vector<int> merged;
        for (std::size_t j = 0; j < comps.size(); ++j) {
            if (uf.find(static_cast<int>(j)) == static_cast<int>(i)) merged.insert(merged.end(), comps[j].begin(), comps[j].end());
        }
        std::sort(merged.begin(), merged.end());
        double dist = kInfinity;
        for (int c : merged) dist = std::min(dist, base_dist_[static_cast<std::size_t>(c)]);
        g.groups.push_back(std::move(merged));
        g.group_distance.push_back(dist);
    }
    return g;
}

bool AlphaBoundary::sees_anchor(const std::vector<int>& comp, Point anchor) const {
    std::vector<std::pair<double, int>> near;
    for (int c : comp) {
        const Cube& q = (*w_)[c].cube;
        double ratio = point_cube_dist(anchor, q) / q.diam();
        if (ratio <= 8.0) near.push_back({ratio, c});
    }
    std::sort(near.begin(), near.end());
    for (auto [ratio, c] : near) {
        if (w_->domain().segment_in_domain(anchor, (*w_)[c].cube.center, true)) return true;
    }
    return false;
}

int AlphaBoundary::approach_cube(Point anchor, Point target) const {
    double len = sup_norm(target - anchor);
    double step = finest_scale() / 2;
    if (len <= step) return w_->locate(target);
    // Shallow approaches start in the unresolved strip; walk out to the first cube.
    for (double s = step; s < len; s *= 1.125) {
        int k = w_->locate(anchor + (s / len) * (target - anchor));
        if (k >= 0) return k;
    }
    return w_->locate(target);
}

int AlphaBoundary::approach_in_element(int id, int k) const {
    const BoundaryElement& e = element(id);
    if (k < 0) return -1;
    if (contains_sorted(e.cubes, k)) return 1;
    for (int j = static_cast<int>(scales_.size()) - 2; j >= 0; --j) {
        auto set = scale_set(e.anchor.p, scales_[static_cast<std::size_t>(j)]);
        std::sort(set.begin(), set.end());
        if (!contains_sorted(set, k)) continue;
        auto cluster = cluster_at_scale(id, j);
        for (const auto& comp : components(set)) {
            if (contains_sorted(comp, k)) return intersects_sorted(comp, cluster) ? 1 : 0;
        }
    }
    return -1;
}

const BoundaryElement& AlphaBoundary::element(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= elements_.size()) throw InputError("invalid element id");
    return elements_[static_cast<std::size_t>(id)];
}

std::vector<int> AlphaBoundary::inaccessible_samples() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].inaccessible) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> AlphaBoundary::elements_at(Point anchor) const {
    std::vector<int> out;
    if (const AnchorGroups* g = find_groups(anchor)) {
        for (int e : g->element_ids) {
            if (e >= 0) out.push_back(e);
        }
    }
    return out;
}

int AlphaBoundary::element_with_cube(Point anchor, int k) const {
    const AnchorGroups* g = find_groups(anchor);
    if (!g) return -1;
    for (std::size_t i = 0; i < g->groups.size(); ++i) {
        if (contains_sorted(g->groups[i], k)) return g->element_ids[i];
    }
    return -1;
}

int AlphaBoundary::omega_for_cube(int q) const {
    if (q < 0 || static_cast<std::size_t>(q) >= w_->size()) throw InputError("invalid cube id");
    int e = cube_omega_[static_cast<std::size_t>(q)];
    if (e < 0) throw NumericalError("approach of cube " + std::to_string(q) + " reaches no accessible element");
    return e;
}

bool AlphaBoundary::is_alpha_Q_visible(int id, const Cube& q) const {
    const BoundaryElement& e = element(id);
    if (!w_->domain().is_Q_visible(q, e.anchor)) return false;
    auto here = elements_at(e.anchor.p);
    if (here.size() == 1) return here[0] == id;
    int k = approach_cube(e.anchor.p, q.center);
    for (int o : here) {
        if (k >= 0 && contains_sorted(element(o).cubes, k)) return o == id;
    }
    int in = approach_in_element(id, k);
    if (in >= 0) return in == 1;
    // Unresolved grazing approach: decide by the side it comes from.
    return w_->domain().face_at(e.anchor.p, q.center) == e.anchor.face;
}

std::vector<int> AlphaBoundary::cluster_at_scale(int id, int k) const {
    const BoundaryElement& e = element(id);
    if (k < 0 || k >= static_cast<int>(scales_.size())) throw InputError("invalid scale index");
    if (k == static_cast<int>(scales_.size()) - 1) return e.cubes;
    std::vector<int> out;
    for (const auto& comp : components(scale_set(e.anchor.p, scales_[static_cast<std::size_t>(k)]))) {
        if (intersects_sorted(comp, e.cubes)) out.insert(out.end(), comp.begin(), comp.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> AlphaBoundary::basepoint_ladder(int id) const {
    std::vector<double> out;
    for (int k = 0; k < static_cast<int>(scales_.size()); ++k) {
        double best = kInfinity;
        for (int c : cluster_at_scale(id, k)) best = std::min(best, base_dist_[static_cast<std::size_t>(c)]);
        out.push_back(best);
    }
    return out;
}

ElementDistance AlphaBoundary::element_metric(const ElementOrPoint& a_in, const ElementOrPoint& b_in) const {
    ElementDistance out;
    const Domain& d = w_->domain();
    const double alpha = opt_.alpha;
    ElementOrPoint a = a_in, b = b_in;
    if (a.element < 0 && b.element >= 0) std::swap(a, b);
    if (a.element < 0) {
        MetricEstimate m = d_alpha(*w_, a.p, b.p, alpha);
        out.rho_c = m.upper;
        out.d_tilde_c = m.upper + std::pow(sup_norm(a.p - b.p), alpha);
        out.per_scale.assign(scales_.size(), out.rho_c);
        return out;
    }
    if (b.element >= 0 && b.element < a.element) std::swap(a, b);
    const BoundaryElement& ea = element(a.element);
    ChainSearch search(*w_, alpha);
    if (b.element >= 0) {
        const BoundaryElement& eb = element(b.element);
        if (ea.id == eb.id) {
            out.per_scale.assign(scales_.size(), 0.0);
            return out;
        }
        for (int k = 0; k < static_cast<int>(scales_.size()); ++k) {
            out.per_scale.push_back(cluster_cost(search, cluster_at_scale(ea.id, k), cluster_at_scale(eb.id, k), kInfinity));
        }
        out.rho_c = out.per_scale.back();
        out.d_tilde_c = out.rho_c + std::pow(sup_norm(ea.anchor.p - eb.anchor.p), alpha);
        return out;
    }
    // Element to interior point.
    Point x = b.p;
    if (!d.contains(x)) throw InputError("outside domain");
    int qx = w_->locate(x);
    if (qx < 0) throw ResolutionError("refine decomposition");
    for (int k = 0; k < static_cast<int>(scales_.size()); ++k) {
        auto cl = cluster_at_scale(ea.id, k);
        double c = contains_sorted(cl, qx) ? 0.0 : cluster_cost(search, {qx}, cl, kInfinity) + search.weight(qx);
        out.per_scale.push_back(c);
    }
    out.rho_c = out.per_scale.back();
    if (d.segment_in_domain(ea.anchor.p, x, true) && approach_in_element(ea.id, approach_cube(ea.anchor.p, x)) == 1) {
        try {
            out.rho_c = std::min(out.rho_c, subhyperbolic_length(d, {ea.anchor.p, x}, alpha));
        } catch (const NumericalError&) {
        }
    }
    out.d_tilde_c = out.rho_c + std::pow(sup_norm(ea.anchor.p - x), alpha);
    return out;
}

int project_beta_to_alpha(const AlphaBoundary& ab_alpha, const AlphaBoundary& ab_beta, int omega_beta) {
    if (&ab_alpha.decomposition() != &ab_beta.decomposition()) {
        throw InputError("alpha and beta boundaries must share a decomposition");
    }
    if (!(ab_beta.alpha() <= ab_alpha.alpha())) throw InputError("projection needs beta <= alpha");
    const BoundaryElement& e = ab_beta.element(omega_beta);
    int id = ab_alpha.element_with_cube(e.anchor.p, e.representative);
    if (id < 0) throw NumericalError("beta element " + std::to_string(omega_beta) + " has no alpha image");
    return id;
}

}  // namespace subhyp
