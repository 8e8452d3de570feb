#include "subhyp/whitney.h"

#include "subhyp/errors.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace subhyp {

namespace {

Cube dyadic_cube(const Domain& d, int level, long i, long j) {
    double side = std::ldexp(d.box_side(), -level);
    Point o = d.box_origin();
    return {Point{o.x + (i + 0.5) * side, o.y + (j + 0.5) * side}, side / 2};
}

WhitneyCube make_cube(const Domain& d, int level, long i, long j) {
    WhitneyCube c;
    c.level = level;
    c.i = i;
    c.j = j;
    c.cube = dyadic_cube(d, level, i, j);
    c.dist = std::max(0.0, d.boundary_distance(c.cube.center) - c.cube.radius);
    c.anchor = d.nearest_boundary_point(c.cube);
    return c;
}

}  // namespace

WhitneyDecomposition build_whitney(const Domain& d, int depth_limit) {
    if (depth_limit < 1 || depth_limit > 12) throw InputError("depth_limit must be in [1, 12]");
    WhitneyDecomposition w;
    w.domain_ = &d;
    w.depth_ = depth_limit;
    std::vector<std::array<long, 2>> active{{0, 0}};
    double covered = 0.0;
    for (int level = 0; level <= depth_limit && !active.empty(); ++level) {
        std::sort(active.begin(), active.end(),
                  [](const auto& a, const auto& b) { return a[1] < b[1] || (a[1] == b[1] && a[0] < b[0]); });
        std::vector<std::array<long, 2>> next;
        for (auto [i, j] : active) {
            Cube q = dyadic_cube(d, level, i, j);
            double dc = d.boundary_distance(q.center);
            double r = q.radius;
            bool inside = d.contains(q.center);
            if (inside && dc >= 3 * r && dc - r <= 8 * r) {
                w.cubes_.push_back(make_cube(d, level, i, j));
                covered += 4 * r * r;
                continue;
            }
            if (!inside && dc > r) continue;
            if (level < depth_limit) {
                for (long dj = 0; dj < 2; ++dj) {
                    for (long di = 0; di < 2; ++di) next.push_back({2 * i + di, 2 * j + dj});
                }
            }
        }
        active = std::move(next);
    }
    if (w.cubes_.empty()) throw ResolutionError("empty decomposition");
    w.deficit_ = std::max(0.0, d.area() - covered);
    w.index();
    return w;
}

WhitneyDecomposition WhitneyDecomposition::from_cells(const Domain& d, int depth_limit,
                                                      const std::vector<std::array<long, 3>>& cells) {
    WhitneyDecomposition w;
    w.domain_ = &d;
    w.depth_ = depth_limit;
    double covered = 0.0;
    for (const auto& c : cells) {
        if (c[0] < 0 || c[0] > depth_limit) throw InputError("cell level outside [0, depth_limit]");
        w.cubes_.push_back(make_cube(d, static_cast<int>(c[0]), c[1], c[2]));
        covered += w.cubes_.back().cube.diam() * w.cubes_.back().cube.diam();
    }
    w.deficit_ = std::max(0.0, d.area() - covered);
    w.index();
    return w;
}

double WhitneyDecomposition::finest_side() const { return std::ldexp(domain_->box_side(), -depth_); }

void WhitneyDecomposition::index() {
    fine_n_ = 1L << depth_;
    owner_.assign(static_cast<std::size_t>(fine_n_ * fine_n_), -1);
    for (std::size_t id = 0; id < cubes_.size(); ++id) {
        const auto& c = cubes_[id];
        long s = 1L << (depth_ - c.level);
        for (long y = c.j * s; y < (c.j + 1) * s; ++y) {
            for (long x = c.i * s; x < (c.i + 1) * s; ++x) {
                if (x < 0 || y < 0 || x >= fine_n_ || y >= fine_n_) continue;
                owner_[static_cast<std::size_t>(y * fine_n_ + x)] = static_cast<int>(id);
            }
        }
    }
    adjacency_.assign(cubes_.size(), {});
    for (std::size_t id = 0; id < cubes_.size(); ++id) {
        const auto& c = cubes_[id];
        long s = 1L << (depth_ - c.level);
        long x0 = c.i * s - 1, x1 = (c.i + 1) * s, y0 = c.j * s - 1, y1 = (c.j + 1) * s;
        auto visit = [&](long x, long y) {
            if (x < 0 || y < 0 || x >= fine_n_ || y >= fine_n_) return;
            int o = owner_[static_cast<std::size_t>(y * fine_n_ + x)];
            if (o >= 0 && o != static_cast<int>(id)) adjacency_[id].push_back(o);
        };
        for (long x = x0; x <= x1; ++x) {
            visit(x, y0);
            visit(x, y1);
        }
        for (long y = y0 + 1; y < y1; ++y) {
            visit(x0, y);
            visit(x1, y);
        }
        auto& a = adjacency_[id];
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    bucket_n_ = 1 << std::min(depth_, 6);
    buckets_.assign(static_cast<std::size_t>(bucket_n_ * bucket_n_), {});
    long per = fine_n_ / bucket_n_;
    for (std::size_t id = 0; id < cubes_.size(); ++id) {
        const auto& c = cubes_[id];
        long s = 1L << (depth_ - c.level);
        long bx0 = std::max(0L, c.i * s / per), bx1 = std::min<long>(bucket_n_ - 1, ((c.i + 1) * s - 1) / per);
        long by0 = std::max(0L, c.j * s / per), by1 = std::min<long>(bucket_n_ - 1, ((c.j + 1) * s - 1) / per);
        for (long by = by0; by <= by1; ++by) {
            for (long bx = bx0; bx <= bx1; ++bx) buckets_[static_cast<std::size_t>(by * bucket_n_ + bx)].push_back(static_cast<int>(id));
        }
    }
}

const std::vector<int>& WhitneyDecomposition::neighbors(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= cubes_.size()) throw InputError("invalid cube id");
    return adjacency_[static_cast<std::size_t>(id)];
}

int WhitneyDecomposition::locate(Point p) const {
    double h = finest_side();
    Point o = domain_->box_origin();
    double fx = std::floor((p.x - o.x) / h), fy = std::floor((p.y - o.y) / h);
    if (!(fx >= 0 && fy >= 0 && fx < fine_n_ && fy < fine_n_)) return -1;
    return owner_[static_cast<std::size_t>(static_cast<long>(fy) * fine_n_ + static_cast<long>(fx))];
}

std::vector<int> WhitneyDecomposition::cubes_in_box(Point lo, Point hi) const {
    double bs = domain_->box_side() / bucket_n_;
    Point o = domain_->box_origin();
    auto clampi = [&](double v) { return std::clamp(static_cast<long>(std::floor(v)), 0L, static_cast<long>(bucket_n_ - 1)); };
    long bx0 = clampi((lo.x - o.x) / bs), bx1 = clampi((hi.x - o.x) / bs);
    long by0 = clampi((lo.y - o.y) / bs), by1 = clampi((hi.y - o.y) / bs);
    std::vector<int> out;
    for (long by = by0; by <= by1; ++by) {
        for (long bx = bx0; bx <= bx1; ++bx) {
            for (int id : buckets_[static_cast<std::size_t>(by * bucket_n_ + bx)]) {
                const Cube& q = cubes_[static_cast<std::size_t>(id)].cube;
                if (q.center.x + q.radius < lo.x || q.center.x - q.radius > hi.x) continue;
                if (q.center.y + q.radius < lo.y || q.center.y - q.radius > hi.y) continue;
                out.push_back(id);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const std::vector<int>& neighbors(const WhitneyDecomposition& w, int q) { return w.neighbors(q); }

Point sample_covered(const WhitneyDecomposition& w, std::mt19937& rng) {
    const Domain& d = w.domain();
    std::uniform_real_distribution<double> ux(d.bbox_min().x, d.bbox_max().x), uy(d.bbox_min().y, d.bbox_max().y);
    for (int tries = 0; tries < 1000000; ++tries) {
        Point p{ux(rng), uy(rng)};
        if (d.contains(p) && w.locate(p) >= 0) return p;
    }
    throw ResolutionError("no covered sample point found");
}

BoundaryPoint anchor_point(const WhitneyDecomposition& w, int q) {
    if (q < 0 || static_cast<std::size_t>(q) >= w.size()) throw InputError("invalid cube id");
    return w[q].anchor;
}

WhitneyReport verify_whitney(const WhitneyDecomposition& w) {
    WhitneyReport rep;
    const Domain& d = w.domain();
    rep.cubes = w.size();
    rep.deficit_area = w.deficit_area();
    rep.min_ratio = 1e300;
    rep.max_ratio = 0.0;
    for (std::size_t id = 0; id < w.size(); ++id) {
        const Cube& q = w[static_cast<int>(id)].cube;
        double dist = d.boundary_distance(q.center) - q.radius;
        bool ok = d.contains(q.center) && q.diam() <= dist * (1 + 1e-12) && dist <= 4 * q.diam();
        if (!ok) ++rep.wcov_failures;
        const auto& nb = w.neighbors(static_cast<int>(id));
        rep.max_neighbors = std::max(rep.max_neighbors, static_cast<int>(nb.size()));
        for (int k : nb) {
            if (k < static_cast<int>(id)) continue;
            ++rep.pairs;
            double ratio = w[k].cube.diam() / q.diam();
            rep.min_ratio = std::min({rep.min_ratio, ratio, 1 / ratio});
            rep.max_ratio = std::max({rep.max_ratio, ratio, 1 / ratio});
            if (ratio < 0.25 || ratio > 4.0) ++rep.wadd1_failures;
        }
    }
    // Integer coordinates in units of 1/16 of a finest cell: Q spans [16 i s, 16 (i+1) s].
    const int depth = w.depth_limit();
    for (std::size_t id = 0; id < w.size(); ++id) {
        const auto& a = w[static_cast<int>(id)];
        const Cube& q = a.cube;
        auto cand = w.cubes_in_box(q.center - Point{3 * q.radius, 3 * q.radius},
                                   q.center + Point{3 * q.radius, 3 * q.radius});
        long sa = 1L << (depth - a.level);
        const auto& nb = w.neighbors(static_cast<int>(id));
        int star_count = 0;
        for (int k : cand) {
            if (k == static_cast<int>(id)) continue;
            const auto& b = w[k];
            if (std::abs(b.level - a.level) > 3) continue;
            long sb = 1L << (depth - b.level);
            long cax = 8 * (2 * a.i + 1) * sa, cay = 8 * (2 * a.j + 1) * sa;
            long cbx = 8 * (2 * b.i + 1) * sb, cby = 8 * (2 * b.j + 1) * sb;
            long dx = std::abs(cax - cbx), dy = std::abs(cay - cby);
            bool touch = dx <= 8 * (sa + sb) && dy <= 8 * (sa + sb);
            bool star = dx <= 9 * (sa + sb) && dy <= 9 * (sa + sb);
            star_count += star;
            bool listed = std::binary_search(nb.begin(), nb.end(), k);
            if (touch != star || touch != listed) ++rep.wadd3_failures;
        }
        rep.max_star_neighbors = std::max(rep.max_star_neighbors, star_count);
    }
    if (rep.pairs == 0) rep.min_ratio = rep.max_ratio = 1.0;
    return rep;
}

}  // namespace subhyp
