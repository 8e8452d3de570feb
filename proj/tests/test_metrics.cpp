#include "doctest.h"

#include "grid_oracle.h"
#include "subhyp/errors.h"
#include "subhyp/metrics.h"

#include <cmath>
#include <random>

using namespace subhyp;

namespace {

Point random_inside(const Domain& d, const WhitneyDecomposition& w, std::mt19937& rng) {
    std::uniform_real_distribution<double> ux(d.bbox_min().x, d.bbox_max().x), uy(d.bbox_min().y, d.bbox_max().y);
    for (;;) {
        Point p{ux(rng), uy(rng)};
        if (d.contains(p) && w.locate(p) >= 0) return p;
    }
}

bool cube_meets_segment(const Cube& c, Point a, Point b) {
    return sup_dist_point_segment(c.center, a, b) <= c.radius;
}

}  // namespace

TEST_CASE("alpha parameters") {
    CHECK(alpha_from_p(4.0) == doctest::Approx(2.0 / 3.0));
    CHECK(alpha_from_p(3.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(alpha_from_p(2.0), InputError);
    CHECK_THROWS_AS(check_alpha(0.0), InputError);
    CHECK_THROWS_AS(check_alpha(1.5), InputError);
    CHECK_NOTHROW(check_alpha(1.0));
}

TEST_CASE("half-plane closed form") {
    Domain big = Domain::polygon({{-10, 0}, {10, 0}, {10, 20}, {-10, 20}});
    // Integral of t^(-1/2) from 1 to 4.
    CHECK(subhyperbolic_length(big, {{0, 1}, {0, 4}}, 0.5) == doctest::Approx(2.0).epsilon(1e-7));
    // Down to the boundary: 2 * sqrt(1).
    CHECK(subhyperbolic_length(big, {{0, 1}, {0, 0}}, 0.5) == doctest::Approx(2.0).epsilon(1e-6));
    // Horizontal at height 2: constant rho.
    CHECK(subhyperbolic_length(big, {{-1, 2}, {1, 2}}, 0.5) == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("alpha = 1 gives sup-norm arclength") {
    Domain sq = gallery::unit_square();
    std::vector<Point> poly{{0.1, 0.1}, {0.6, 0.3}, {0.6, 0.9}, {0.2, 0.5}};
    CHECK(subhyperbolic_length(sq, poly, 1.0) == doctest::Approx(0.5 + 0.6 + 0.4).epsilon(1e-12));
    CHECK(subhyperbolic_length(sq, {{0.5, 0.5}, {0.5, 0.0}}, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("polylines leaving the domain are rejected") {
    Domain s = gallery::slit_square();
    CHECK_THROWS_AS(subhyperbolic_length(s, {{0, 0.5}, {0, -0.5}}, 0.5), InputError);
    CHECK_THROWS_AS(subhyperbolic_length(s, {{0, 0.5}, {2, 2}, {0.9, 0.9}}, 0.5), InputError);
    CHECK_NOTHROW(subhyperbolic_length(s, {{0, 0.5}, {0, 0}}, 0.5));
}

TEST_CASE("segment bound inside a boundary-free cube") {
    Domain sq = gallery::unit_square();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (double alpha : {1.0 / 3.0, 0.5, 1.0}) {
        for (int t = 0; t < 400; ++t) {
            Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
            double r = sup_norm(x - y);
            if (r == 0.0 || r > std::max(sq.boundary_distance(x), sq.boundary_distance(y))) continue;
            ++checked;
            CHECK(subhyperbolic_length(sq, {x, y}, alpha) <= (1 / alpha) * std::pow(r, alpha) * (1 + 1e-9));
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("identical points") {
    Domain sq = gallery::unit_square();
    auto w = build_whitney(sq, 7);
    MetricEstimate e = d_tilde(w, {0.3, 0.4}, {0.3, 0.4}, 0.5);
    CHECK(e.upper == 0.0);
    CHECK(e.chain_sum == 0.0);
    CHECK(e.certified_lower == 0.0);
    CHECK(best_chain(w, {0.3, 0.4}, {0.3, 0.4}, 0.5).size() == 1);
}

TEST_CASE("query errors") {
    Domain sq = gallery::unit_square();
    auto w = build_whitney(sq, 6);
    CHECK_THROWS_AS(d_alpha(w, {1.5, 0.5}, {0.5, 0.5}, 0.5), InputError);
    CHECK_THROWS_AS(d_alpha(w, {0.5, 1e-6}, {0.5, 0.5}, 0.5), ResolutionError);
    CHECK_THROWS_AS(d_alpha(w, {0.5, 0.5}, {0.4, 0.5}, 0.0), InputError);
}

TEST_CASE("unit square pair at alpha 1") {
    Domain sq = gallery::unit_square();
    auto w = build_whitney(sq, 8);
    MetricEstimate e = d_alpha(w, {0.3, 0.5}, {0.7, 0.5}, 1.0);
    CHECK(e.upper == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(e.upper <= 2 * 0.4);
    CHECK(e.upper >= 0.4 / 2);
}

TEST_CASE("slit square pair routes around the slit") {
    Domain s = gallery::slit_square();
    auto w = build_whitney(s, 8);
    Point x{0, 0.1}, y{0, -0.1};
    MetricEstimate e = d_tilde(w, x, y, 0.5);
    for (int q : e.chain) CHECK_FALSE(cube_meets_segment(w[q].cube, {-0.5, 0}, {0.5, 0}));
    CHECK(e.upper > 4 * std::sqrt(0.2));
    double oracle = testing::grid_d_alpha(s, x, y, 0.5, 512) + std::sqrt(0.2);
    CHECK(e.upper <= 2 * oracle);
    CHECK(e.upper >= oracle / 2);
}

TEST_CASE("chain and comparison bounds") {
    for (const char* name : {"unit_square", "slit_square", "annulus"}) {
        Domain d = gallery::by_name(name);
        auto w = build_whitney(d, 7);
        std::mt19937 rng(11);
        for (double alpha : {1.0 / 3.0, 0.5, 1.0}) {
            for (int t = 0; t < 40; ++t) {
                Point x = random_inside(d, w, rng), y = random_inside(d, w, rng);
                MetricEstimate e = d_tilde(w, x, y, alpha);
                double gap = std::pow(sup_norm(x - y), alpha);
                CHECK(e.certified_lower <= e.upper);
                CHECK(e.certified_lower == doctest::Approx(gap).epsilon(1e-15));
                CHECK(e.upper <= (1 + 2 / alpha) * e.chain_sum + gap + 1e-12);
                CHECK(e.upper >= std::pow(2.0, alpha - 1) * gap);
                for (std::size_t i = 1; i < e.chain.size(); ++i) {
                    auto nb = neighbors(w, e.chain[i - 1]);
                    CHECK(std::find(nb.begin(), nb.end(), e.chain[i]) != nb.end());
                }
                CHECK(e.chain.front() == w.locate(x));
                CHECK(e.chain.back() == w.locate(y));
            }
            // Near regime: a short hop relative to the boundary distance.
            for (int t = 0; t < 40; ++t) {
                Point x = random_inside(d, w, rng);
                double rx = d.boundary_distance(x);
                std::uniform_real_distribution<double> u(-0.45 * rx, 0.45 * rx);
                Point y = x + Point{u(rng), u(rng)};
                if (!d.contains(y) || w.locate(y) < 0) continue;
                double r = sup_norm(x - y);
                if (r == 0.0 || r >= std::min(rx, d.boundary_distance(y))) continue;
                CHECK(d_tilde(w, x, y, alpha).upper <= (1 + 1 / alpha) * std::pow(r, alpha) * (1 + 1e-9));
            }
        }
    }
}

TEST_CASE("symmetry and chain triangle inequality") {
    Domain d = gallery::slit_square();
    auto w = build_whitney(d, 7);
    std::mt19937 rng(5);
    for (int t = 0; t < 100; ++t) {
        Point x = random_inside(d, w, rng), y = random_inside(d, w, rng), z = random_inside(d, w, rng);
        MetricEstimate xy = d_tilde(w, x, y, 0.5), yx = d_tilde(w, y, x, 0.5);
        CHECK(xy.upper == doctest::Approx(yx.upper).epsilon(1e-12));
        CHECK(xy.chain_sum == doctest::Approx(yx.chain_sum).epsilon(1e-12));
        double slack = std::pow(w[w.locate(y)].cube.diam(), 0.5);
        double xz = d_alpha(w, x, z, 0.5).chain_sum, yz = d_alpha(w, y, z, 0.5).chain_sum;
        CHECK(xz <= xy.chain_sum + yz + slack + 1e-12);
    }
}

TEST_CASE("estimator-level monotonicity in alpha") {
    Domain d = gallery::annulus();
    auto w = build_whitney(d, 7);
    std::mt19937 rng(3);
    for (int t = 0; t < 50; ++t) {
        Point x = random_inside(d, w, rng), y = random_inside(d, w, rng);
        auto chain = best_chain(w, x, y, 0.5);
        for (auto [beta, alpha] : {std::pair{1.0 / 3.0, 0.5}, {0.5, 1.0}, {1.0 / 3.0, 1.0}}) {
            double sa = 0, sb = 0, dmax = 0;
            for (int q : chain) {
                double dq = w[q].cube.diam();
                sa += std::pow(dq, alpha);
                sb += std::pow(dq, beta);
                dmax = std::max(dmax, dq);
            }
            REQUIRE(dmax <= 1.0);
            CHECK(sa <= sb * std::pow(dmax, alpha - beta) * (1 + 1e-12));
        }
    }
}

TEST_CASE("refinement does not increase estimates") {
    Domain d = gallery::slit_square();
    auto w7 = build_whitney(d, 7);
    auto w8 = build_whitney(d, 8);
    std::mt19937 rng(17);
    for (int t = 0; t < 40; ++t) {
        Point x = random_inside(d, w7, rng), y = random_inside(d, w7, rng);
        CHECK(d_tilde(w8, x, y, 0.5).upper <= d_tilde(w7, x, y, 0.5).upper * 1.05);
    }
}

TEST_CASE("chain search cost equals chain sum") {
    Domain d = gallery::annulus();
    auto w = build_whitney(d, 7);
    ChainSearch search(w, 0.5);
    int a = w.locate({-0.7, -0.7}), b = w.locate({0.7, 0.7});
    search.run({{a, search.weight(a)}}, kInfinity, b);
    auto path = search.path_to(b);
    double sum = 0;
    for (int q : path) sum += search.weight(q);
    CHECK(search.dist(b) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(d_alpha(w, {-0.7, -0.7}, {0.7, 0.7}, 0.5).chain_sum == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("grid oracle agreement") {
    Domain d = gallery::annulus();
    auto w = build_whitney(d, 8);
    for (auto [x, y] : {std::pair<Point, Point>{{-0.7, -0.6}, {0.7, 0.6}}, {{-0.6, 0.0}, {0.6, 0.0}}}) {
        for (double alpha : {0.5, 1.0}) {
            double oracle = testing::grid_d_alpha(d, x, y, alpha, 512);
            double est = d_alpha(w, x, y, alpha).upper;
            CHECK(est <= 2 * oracle);
            CHECK(est >= oracle / 2);
        }
    }
}
