#include "grid_oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace subhyp::testing {

double grid_d_alpha(const Domain& d, Point x, Point y, double alpha, int n) {
    const double inf = std::numeric_limits<double>::infinity();
    if (x == y) return 0.0;
    const double h = d.box_side() / n;
    const Point o = d.box_origin();
    // Half-step lattice: index (2i+1, 2j+1) is node (i, j); midpoints sit in between.
    const long m = 2L * n + 1;
    std::vector<double> rho(static_cast<std::size_t>(m * m), std::nan(""));
    auto rho_at = [&](long a, long b) {
        double& r = rho[static_cast<std::size_t>(b * m + a)];
        if (std::isnan(r)) r = d.boundary_distance(o + Point{a * h / 2, b * h / 2});
        return r;
    };
    std::vector<signed char> inside(static_cast<std::size_t>(n) * n, -1);
    auto node_point = [&](long i, long j) { return o + Point{(i + 0.5) * h, (j + 0.5) * h}; };
    auto is_inside = [&](long i, long j) {
        signed char& s = inside[static_cast<std::size_t>(j * n + i)];
        if (s < 0) s = d.contains(node_point(i, j));
        return s == 1;
    };
    auto nearest = [&](Point p) {
        long i = std::lround((p.x - o.x) / h - 0.5), j = std::lround((p.y - o.y) / h - 0.5);
        i = std::clamp(i, 0L, static_cast<long>(n - 1));
        j = std::clamp(j, 0L, static_cast<long>(n - 1));
        return std::pair<long, long>{i, j};
    };
    // Straight-line cost from p to its lattice node, by midpoint rule on a few sub-steps.
    auto lead = [&](Point p, Point q) {
        if (!d.segment_in_domain(p, q)) return inf;
        double s = 0.0;
        const int k = 8;
        for (int t = 0; t < k; ++t) {
            Point mid = p + ((t + 0.5) / k) * (q - p);
            s += std::pow(d.boundary_distance(mid), alpha - 1) * sup_norm(q - p) / k;
        }
        return s;
    };
    auto [xi, xj] = nearest(x);
    auto [yi, yj] = nearest(y);
    if (!is_inside(xi, xj) || !is_inside(yi, yj)) return inf;
    double start = lead(x, node_point(xi, xj));
    double finish = lead(y, node_point(yi, yj));
    std::vector<double> dist(static_cast<std::size_t>(n) * n, inf);
    using Item = std::pair<double, long>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    long src = xj * n + xi, dst = yj * n + yi;
    dist[static_cast<std::size_t>(src)] = start;
    pq.push({start, src});
    while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv > dist[static_cast<std::size_t>(v)]) continue;
        if (v == dst) return dv + finish;
        long i = v % n, j = v / n;
        for (int di = -1; di <= 1; ++di) {
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                long ni = i + di, nj = j + dj;
                if (ni < 0 || nj < 0 || ni >= n || nj >= n || !is_inside(ni, nj)) continue;
                double r = rho_at(2 * i + 1 + di, 2 * j + 1 + dj);
                if (r <= h && !d.segment_in_domain(node_point(i, j), node_point(ni, nj))) continue;
                double nd = dv + std::pow(r, alpha - 1) * h;
                long u = nj * n + ni;
                if (nd < dist[static_cast<std::size_t>(u)]) {
                    dist[static_cast<std::size_t>(u)] = nd;
                    pq.push({nd, u});
                }
            }
        }
    }
    return inf;
}

}  // namespace subhyp::testing
