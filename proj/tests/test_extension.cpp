#include "doctest.h"

#include "subhyp/errors.h"
#include "subhyp/extension.h"

#include <cmath>
#include <random>

using namespace subhyp;

namespace {

Point random_covered(const WhitneyDecomposition& w, std::mt19937& rng) {
    const Domain& d = w.domain();
    std::uniform_real_distribution<double> ux(d.bbox_min().x, d.bbox_max().x), uy(d.bbox_min().y, d.bbox_max().y);
    for (;;) {
        Point p{ux(rng), uy(rng)};
        if (d.contains(p) && w.locate(p) >= 0) return p;
    }
}

/// A point in the overlap band between cube q and one of its neighbours.
Point band_point(const WhitneyDecomposition& w, int q, std::mt19937& rng) {
    const Cube& c = w[q].cube;
    std::uniform_real_distribution<double> u(-1.0, 1.0), v(0.9, 0.995);
    double along = u(rng), across = v(rng);
    switch (rng() % 4) {
        case 0: return c.center + c.radius * Point{across, along};
        case 1: return c.center + c.radius * Point{-across, along};
        case 2: return c.center + c.radius * Point{along, across};
        default: return c.center + c.radius * Point{along, -across};
    }
}

BoundaryFunction slit_data() {
    BoundaryFunction f;
    f.add("slit+", "0.5 - 0.5*smoothstep(0.375, 0.25, abs(ax))");
    f.add("slit-", "0.5 + 0.5*smoothstep(0.375, 0.25, abs(ax))");
    f.add("any", "0.5");
    return f;
}

struct SquareFixture {
    Domain d = gallery::unit_square();
    WhitneyDecomposition w = build_whitney(d, 8);
    AlphaBoundary ab{w, {}};
};

const SquareFixture& square() {
    static SquareFixture f;
    return f;
}

}  // namespace

TEST_CASE("bump profile") {
    CHECK(bump(0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(bump(1.0) == 0.0);
    CHECK(bump(-1.2) == 0.0);
    for (double t : {-0.9, -0.3, 0.1, 0.7, 0.95}) {
        double h = 1e-6;
        double fd = (bump(t + h) - bump(t - h)) / (2 * h);
        CHECK(bump_derivative(t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("partition of unity sums to one") {
    for (const char* name : {"unit_square", "slit_square", "annulus", "outward_cusp:2"}) {
        Domain d = gallery::by_name(name);
        auto w = build_whitney(d, 7);
        std::mt19937 rng(1);
        for (int t = 0; t < 2000; ++t) {
            Point x = random_covered(w, rng);
            auto pu = partition_of_unity(w, x);
            double sum = 0;
            Point g;
            for (const auto& e : pu) {
                CHECK(e.value >= 0.0);
                CHECK(w[e.cube].cube.dilate(1.125).contains(x));
                sum += e.value;
                g = g + e.grad;
            }
            CHECK(std::abs(sum - 1) < 1e-9);
            CHECK(euclid_norm(g) * w[w.locate(x)].cube.diam() < 1e-9);
        }
    }
}

TEST_CASE("cube cores carry a single entry") {
    const auto& f = square();
    for (int q = 0; q < static_cast<int>(f.w.size()); q += 17) {
        auto pu = partition_of_unity(f.w, f.w[q].cube.center);
        REQUIRE(pu.size() == 1);
        CHECK(pu[0].cube == q);
        CHECK(pu[0].value == 1.0);
        CHECK(pu[0].grad.x == 0.0);
        CHECK(pu[0].grad.y == 0.0);
    }
    CHECK_THROWS_AS(partition_of_unity(f.w, {0.5, 1e-7}), ResolutionError);
}

TEST_CASE("partition gradients match finite differences") {
    Domain d = gallery::slit_square();
    auto w = build_whitney(d, 7);
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> uq(0, static_cast<int>(w.size()) - 1);
    int checked = 0;
    while (checked < 1000) {
        int q = uq(rng);
        Point x = band_point(w, q, rng);
        if (w.locate(x) < 0) continue;
        auto pu = partition_of_unity(w, x);
        if (pu.size() < 2) continue;
        double h = 1e-6 * w[q].cube.diam();
        auto px = partition_of_unity(w, x + Point{h, 0}), mx = partition_of_unity(w, x - Point{h, 0});
        auto py = partition_of_unity(w, x + Point{0, h}), my = partition_of_unity(w, x - Point{0, h});
        auto value = [](const std::vector<PUEntry>& v, int cube) {
            for (const auto& e : v) {
                if (e.cube == cube) return e.value;
            }
            return 0.0;
        };
        for (const auto& e : pu) {
            Point fd{(value(px, e.cube) - value(mx, e.cube)) / (2 * h), (value(py, e.cube) - value(my, e.cube)) / (2 * h)};
            double scale = std::max(euclid_norm(e.grad), 1.0 / w[e.cube].cube.diam());
            CHECK(euclid_norm(fd - e.grad) <= 1e-5 * scale);
        }
        ++checked;
    }
}

TEST_CASE("constant data") {
    const auto& f = square();
    auto ef = build_extension(BoundaryFunction::constant(5.0), f.w, f.ab);
    for (double c : ef.coefficients()) CHECK(c == 5.0);
    std::mt19937 rng(8);
    for (int t = 0; t < 500; ++t) {
        Point x = random_covered(f.w, rng);
        auto [v, g] = ef.value_and_gradient(x);
        CHECK(std::abs(v - 5.0) <= 1e-12);
        CHECK(euclid_norm(g) <= 1e-12);
    }
    for (int e = 0; e < static_cast<int>(f.ab.elements().size()); e += 23) {
        TraceResult tr = trace(ef, f.ab, e);
        CHECK(tr.value == 5.0);
        CHECK(tr.residual == 0.0);
    }
    CHECK(seminorm_quadrature(ef, 4) == 0.0);
    CHECK(seminorm_vbound(ef, 4) == 0.0);
}

TEST_CASE("sigma cut-off") {
    const auto& f = square();
    BoundaryFunction x1;
    x1.add("any", "ax");
    auto ef = build_extension(x1, f.w, f.ab, 0.01, 0.0);
    for (std::size_t q = 0; q < f.w.size(); ++q) {
        if (f.w.cubes()[q].cube.diam() > 0.01) {
            CHECK(ef.coefficients()[q] == 0.0);
        } else {
            CHECK(ef.coefficients()[q] == f.w.cubes()[q].anchor.p.x);
        }
    }
    CHECK_THROWS_AS(build_extension(x1, f.w, f.ab, 0.0), InputError);
}

TEST_CASE("linear data round trip") {
    const auto& f = square();
    BoundaryFunction x1;
    x1.add("any", "ax");
    auto ef = build_extension(x1, f.w, f.ab);
    for (std::size_t q = 0; q < f.w.size(); ++q) CHECK(ef.coefficients()[q] == f.w.cubes()[q].anchor.p.x);
    CHECK(std::abs(ef.evaluate({0.5, 0.01}) - 0.5) <= 0.1);
    double worst = 0;
    int n = static_cast<int>(f.ab.elements().size());
    for (int i = 0; i < 200; ++i) {
        int e = static_cast<int>(static_cast<long>(i) * n / 200);
        TraceResult tr = trace(ef, f.ab, e, 1.0);
        worst = std::max(worst, std::abs(tr.value - f.ab.element(e).anchor.p.x));
        CHECK(tr.params.size() >= 3);
    }
    CHECK(worst <= 0.05);
    double quad = seminorm_quadrature(ef, 4), vb = seminorm_vbound(ef, 4);
    CHECK(std::isfinite(quad));
    CHECK(quad > 0);
    CHECK(vb > 0);
}

TEST_CASE("linearity of the operator") {
    Domain d = gallery::slit_square();
    auto w = build_whitney(d, 7);
    AlphaBoundary ab(w, {});
    BoundaryFunction f = slit_data(), g;
    g.add("any", "sin(3*ax) + ay*ay");
    auto h = BoundaryFunction::combine(2.5, f, -0.75, g);
    auto ef = build_extension(f, w, ab), eg = build_extension(g, w, ab), eh = build_extension(h, w, ab);
    std::mt19937 rng(12);
    for (int t = 0; t < 1000; ++t) {
        Point x = random_covered(w, rng);
        CHECK(std::abs(eh.evaluate(x) - (2.5 * ef.evaluate(x) - 0.75 * eg.evaluate(x))) <= 1e-10);
    }
}

TEST_CASE("slit data separates the two sides") {
    Domain d = gallery::slit_square();
    auto w = build_whitney(d, 9);
    AlphaBoundary ab(w, {});
    auto ef = build_extension(slit_data(), w, ab);
    for (std::size_t q = 0; q < w.size(); ++q) {
        const Cube& c = w.cubes()[q].cube;
        if (std::abs(c.center.x) > 0.2 || std::abs(c.center.y) > 0.2) continue;
        CHECK(ef.coefficients()[q] == (c.center.y > 0 ? 0.0 : 1.0));
    }
    CHECK(std::abs(ef.evaluate({0, 0.05})) <= 0.05);
    CHECK(std::abs(ef.evaluate({0, -0.05}) - 1) <= 0.05);
    for (int side : {1, -1}) {
        for (int e : ab.elements_at({0, 0})) {
            if (ab.element(e).anchor.face.side != side) continue;
            TraceResult tr = trace(ef, ab, e, 1.0);
            CHECK(std::abs(tr.value - (side > 0 ? 0.0 : 1.0)) <= 0.05);
        }
    }
    CHECK(std::isfinite(seminorm_quadrature(ef, 4)));
    CHECK(std::isfinite(seminorm_vbound(ef, 4)));
}

TEST_CASE("locality and gradient bounds") {
    double prev_c = 0;
    for (int depth : {7, 8}) {
        Domain d = gallery::slit_square();
        auto w = build_whitney(d, depth);
        AlphaBoundary ab(w, {});
        auto ef = build_extension(slit_data(), w, ab);
        const auto& c = ef.coefficients();
        std::mt19937 rng(21);
        double grad_const = 0;
        for (int q = 0; q < static_cast<int>(w.size()); ++q) {
            double spread = 0;
            for (int k : neighbors(w, q)) spread = std::max(spread, std::abs(c[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(q)]));
            for (int t = 0; t < 8; ++t) {
                Point x = band_point(w, q, rng);
                if (w.locate(x) != q) continue;
                auto [v, g] = ef.value_and_gradient(x);
                CHECK(std::abs(v - c[static_cast<std::size_t>(q)]) <= 10 * spread + 1e-15);
                if (spread > 0) grad_const = std::max(grad_const, euclid_norm(g) * w[q].cube.diam() / spread);
                else CHECK(euclid_norm(g) <= 1e-12);
            }
        }
        CHECK(grad_const > 0);
        if (prev_c > 0) {
            CHECK(grad_const <= 2 * prev_c);
            CHECK(grad_const >= prev_c / 2);
        }
        prev_c = grad_const;
    }
}

TEST_CASE("rule gaps and selectors") {
    const auto& f = square();
    BoundaryFunction partial;
    partial.add("0", "ax");
    try {
        build_extension(partial, f.w, f.ab);
        FAIL("expected a rule gap");
    } catch (const DataRuleError& e) {
        CHECK(std::string(e.what()).find("no rule matches element") != std::string::npos);
    }
    BoundaryFunction bad;
    bad.add("any", "1/(ax - ax)");
    CHECK_THROWS_AS(build_extension(bad, f.w, f.ab), DataRuleError);
    CHECK_THROWS_AS(FaceSelector::parse("top"), InputError);
    CHECK_THROWS_AS(FaceSelector::parse("+"), InputError);
    CHECK(FaceSelector::parse("4-").text() == "4-");
    BoundaryFunction boxed;
    boxed.add("any", "1", std::array<Point, 2>{Point{0, 0}, Point{0.5, 1}});
    boxed.add("any", "2");
    for (const auto& e : f.ab.elements()) CHECK(boxed(f.ab, e.id) == (e.anchor.p.x <= 0.5 ? 1.0 : 2.0));
}

TEST_CASE("quadrature is stable under refinement of the rule") {
    Domain d = gallery::unit_square();
    auto w = build_whitney(d, 7);
    AlphaBoundary ab(w, {});
    BoundaryFunction x1;
    x1.add("any", "ax");
    auto ef = build_extension(x1, w, ab);
    double q1 = seminorm_quadrature(ef, 4, 1), q2 = seminorm_quadrature(ef, 4, 2);
    CHECK(q1 == doctest::Approx(q2).epsilon(0.1));
    CHECK_THROWS_AS(seminorm_quadrature(ef, 4, 0), InputError);
}
