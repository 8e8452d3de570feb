#include "doctest.h"

#include "subhyp/errors.h"
#include "subhyp/geometry.h"

#include <random>

using namespace subhyp;

TEST_CASE("distance to boundary") {
    Domain sq = gallery::unit_square();
    CHECK(sq.dist_to_boundary({0.5, 0.5}) == doctest::Approx(0.5));
    CHECK(sq.dist_to_boundary({0.25, 0.5}) == doctest::Approx(0.25));
    Domain slit = gallery::slit_square();
    // Brute force over every boundary segment, sampled densely.
    Point x{0, 0.1};
    double brute = 1e300;
    for (const auto& s : slit.segments()) {
        for (int k = 0; k <= 20000; ++k) {
            Point p = s.a + (k / 20000.0) * (s.b - s.a);
            brute = std::min(brute, sup_norm(p - x));
        }
    }
    CHECK(slit.dist_to_boundary(x) == doctest::Approx(brute).epsilon(1e-9));
    CHECK(slit.dist_to_boundary(x) == doctest::Approx(0.1));
    CHECK_THROWS_AS(sq.dist_to_boundary({2, 2}), InputError);
}

TEST_CASE("distance decreases along a ray to the boundary") {
    Domain slit = gallery::slit_square();
    double prev = 1e300;
    for (int k = 0; k <= 40; ++k) {
        Point p{0.2, 0.4 * std::pow(0.8, k)};
        double r = slit.dist_to_boundary(p);
        CHECK(r > 0);
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("segment containment") {
    Domain sq = gallery::unit_square();
    Domain slit = gallery::slit_square();
    CHECK(sq.segment_in_domain({0.1, 0.1}, {0.9, 0.9}));
    CHECK_FALSE(slit.segment_in_domain({0, 0.1}, {0, -0.1}));
    CHECK(slit.segment_in_domain({0.5, 0}, {0.6, 0}, true));
    CHECK_FALSE(slit.segment_in_domain({0.5, 0}, {0.6, 0}, false));
    CHECK_FALSE(slit.segment_in_domain({0.4, 0}, {0.6, 0}, true));
}

TEST_CASE("segment containment agrees with dense sampling") {
    std::mt19937_64 rng(7);
    for (const auto& name : gallery::names()) {
        Domain d = gallery::by_name(name);
        std::uniform_real_distribution<double> ux(d.bbox_min().x, d.bbox_max().x);
        std::uniform_real_distribution<double> uy(d.bbox_min().y, d.bbox_max().y);
        int checked = 0;
        while (checked < 100) {
            Point a{ux(rng), uy(rng)};
            if (!d.contains(a)) continue;
            Point b = a + 0.3 * (Point{ux(rng), uy(rng)} - a);
            if (!d.contains(b)) continue;
            ++checked;
            bool sampled = true;
            for (int k = 0; k <= 10000 && sampled; ++k) sampled = d.contains(a + (k / 10000.0) * (b - a));
            bool exact = d.segment_in_domain(a, b);
            // Sampling can miss a thin slit crossing, never the converse.
            if (exact) CHECK(sampled);
            if (!sampled) CHECK_FALSE(exact);
            if (sampled && !exact) {
                bool crosses = false;
                for (const auto& s : d.segments()) crosses |= segments_intersect(a, b, s.a, s.b);
                CHECK(crosses);
            }
        }
    }
}

TEST_CASE("Q-visibility") {
    Domain sq = gallery::unit_square();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 500; ++k) {
        double r = 0.01 + 0.1 * u(rng);
        Point c{r + (1 - 2 * r) * u(rng), r + (1 - 2 * r) * u(rng)};
        double t = u(rng);
        Point x = std::array<Point, 4>{Point{t, 0}, Point{1, t}, Point{t, 1}, Point{0, t}}[k % 4];
        CHECK(sq.is_Q_visible(Cube{c, r * 0.999}, x));
    }
    Domain slit = gallery::slit_square();
    Cube q{{0, 0.3}, 0.05};
    CHECK(slit.is_Q_visible(q, BoundaryPoint{{0, 0}, {4, +1}}));
    CHECK_FALSE(slit.is_Q_visible(q, BoundaryPoint{{0, 0}, {4, -1}}));
    CHECK(slit.is_Q_visible(Cube{{0, -0.3}, 0.05}, BoundaryPoint{{0, 0}, {4, -1}}));
    CHECK_FALSE(slit.is_Q_visible(Cube{{0, -0.3}, 0.05}, Point{0, 0.5}));
}

TEST_CASE("nearest boundary point and faces") {
    Domain sq = gallery::unit_square();
    BoundaryPoint a = sq.nearest_boundary_point(Cube{{0.1, 0.5}, 0.02});
    CHECK(a.p.x == doctest::Approx(0.0));
    CHECK(a.p.y == doctest::Approx(0.5));
    Domain slit = gallery::slit_square();
    BoundaryPoint top = slit.nearest_boundary_point(Cube{{0, 0.2}, 0.05});
    CHECK(top.p.x == doctest::Approx(0.0));
    CHECK(top.p.y == doctest::Approx(0.0));
    CHECK(top.face.str() == "4+");
    BoundaryPoint bottom = slit.nearest_boundary_point(Cube{{0, -0.2}, 0.05});
    CHECK(bottom.face.str() == "4-");
    BoundaryPoint tip = slit.nearest_boundary_point(Cube{{0.7, 0}, 0.05});
    CHECK(tip.p.x == doctest::Approx(0.5));
    CHECK(tip.face.side == 0);
    // Equidistant cube: deterministic result.
    Cube eq{{0.5, 0.5}, 0.1};
    BoundaryPoint e1 = sq.nearest_boundary_point(eq), e2 = sq.nearest_boundary_point(eq);
    CHECK(e1.p == e2.p);
    CHECK(e1.face == e2.face);
}

TEST_CASE("gallery domains validate") {
    for (const auto& name : gallery::names()) {
        CAPTURE(name);
        Domain d = gallery::by_name(name);
        CHECK_NOTHROW(d.validate(256));
        CHECK(d.contains(d.basepoint()));
        CHECK(d.area() > 0);
    }
    CHECK_THROWS_AS(gallery::by_name("nope"), InputError);
    CHECK(gallery::by_name("comb:5").name() == "comb:5");
}

TEST_CASE("grid domains") {
    Domain g = Domain::grid(0.25, {"1111", "1001", "1111"});
    CHECK(g.area() == doctest::Approx(10 * 0.0625));
    CHECK(g.contains({0.125, 0.125}));
    CHECK_FALSE(g.contains({0.5, 0.375}));
    CHECK(g.dist_to_boundary({0.125, 0.375}) == doctest::Approx(0.125));
    CHECK_NOTHROW(g.validate(128));
    Domain split = Domain::grid(1.0, {"101"});
    CHECK_THROWS_AS(split.validate(64), InputError);
}
