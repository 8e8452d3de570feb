#include "doctest.h"

#include "grid_oracle.h"
#include "subhyp/alpha_boundary.h"
#include "subhyp/errors.h"

#include <cmath>
#include <random>

using namespace subhyp;

namespace {

struct SlitFixture {
    Domain d = gallery::slit_square();
    WhitneyDecomposition w = build_whitney(d, 8);
    AlphaBoundary ab{w, {}};
};

const SlitFixture& slit() {
    static SlitFixture f;
    return f;
}

int element_on_side(const AlphaBoundary& ab, Point anchor, int side) {
    for (int e : ab.elements_at(anchor)) {
        if (ab.element(e).anchor.face.side == side) return e;
    }
    return -1;
}

}  // namespace

TEST_CASE("insufficient depth") {
    Domain sq = gallery::unit_square();
    auto w = build_whitney(sq, 6);
    CHECK_THROWS_AS(AlphaBoundary(w, {0.5, 5}), ResolutionError);
    CHECK_NOTHROW(AlphaBoundary(w, {0.5, 4}));
    CHECK_THROWS_AS(AlphaBoundary(w, {0.0, 4}), InputError);
}

TEST_CASE("unit square has one element per sample") {
    Domain sq = gallery::unit_square();
    auto w = build_whitney(sq, 7);
    AlphaBoundary ab(w, {});
    for (const auto& s : ab.samples()) {
        CHECK(s.elements.size() == 1);
        CHECK_FALSE(s.inaccessible);
    }
    CHECK(ab.inaccessible_samples().empty());
    for (int q = 0; q < static_cast<int>(w.size()); ++q) {
        int e = ab.omega_for_cube(q);
        CHECK(ab.element(e).anchor.p == w[q].anchor.p);
        CHECK(ab.is_alpha_Q_visible(e, w[q].cube));
    }
    // Convex domain: every element is visible from every cube.
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> ue(0, static_cast<int>(ab.elements().size()) - 1);
    std::uniform_int_distribution<int> uq(0, static_cast<int>(w.size()) - 1);
    for (int t = 0; t < 200; ++t) CHECK(ab.is_alpha_Q_visible(ue(rng), w[uq(rng)].cube));
}

TEST_CASE("slit square agglutination counts") {
    const auto& f = slit();
    const AlphaBoundary& ab = f.ab;
    double band = 2 * ab.finest_scale();
    int interior = 0;
    for (const auto& s : ab.samples()) {
        CHECK_FALSE(s.inaccessible);
        bool on_slit = s.p.y == 0.0 && std::abs(s.p.x) <= 0.5;
        if (!on_slit) {
            CHECK(s.elements.size() == 1);
        } else if (std::abs(s.p.x) == 0.5) {
            CHECK(s.elements.size() == 1);
        } else if (0.5 - std::abs(s.p.x) > band) {
            ++interior;
            CHECK(s.elements.size() == 2);
        }
    }
    CHECK(interior > 20);
    auto mid = ab.elements_at({0, 0});
    REQUIRE(mid.size() == 2);
    CHECK(ab.element(mid[0]).anchor.face.side == -ab.element(mid[1]).anchor.face.side);
    CHECK(ab.elements_at({0.5, 0}).size() == 1);
    CHECK(ab.elements_at({-0.5, 0}).size() == 1);
}

TEST_CASE("multi-slit junction counts") {
    Domain d = gallery::multi_slit();
    auto w = build_whitney(d, 8);
    AlphaBoundary ab(w, {});
    for (auto [p, n] : gallery::multi_slit_junctions()) CHECK(ab.elements_at(p).size() == static_cast<std::size_t>(n));
}

TEST_CASE("canonical elements of slit cubes") {
    const auto& f = slit();
    const AlphaBoundary& ab = f.ab;
    int top = f.w.locate({0, 0.2}), bottom = f.w.locate({0, -0.2});
    REQUIRE(top >= 0);
    REQUIRE(bottom >= 0);
    int et = ab.omega_for_cube(top), eb = ab.omega_for_cube(bottom);
    CHECK(ab.element(et).anchor.face.side == 1);
    CHECK(ab.element(eb).anchor.face.side == -1);
    CHECK(ab.element(et).anchor.p == f.w[top].anchor.p);
    for (int q = 0; q < static_cast<int>(f.w.size()); ++q) {
        CHECK(ab.is_alpha_Q_visible(ab.omega_for_cube(q), f.w[q].cube));
    }
}

TEST_CASE("visibility across the slit") {
    const auto& f = slit();
    const AlphaBoundary& ab = f.ab;
    int top = element_on_side(ab, {0, 0}, 1);
    REQUIRE(top >= 0);
    Cube above{{0, 0.3}, 0.05}, below{{0, -0.3}, 0.05};
    CHECK(ab.is_alpha_Q_visible(top, above));
    CHECK_FALSE(ab.is_alpha_Q_visible(top, below));
    auto tip = ab.elements_at({0.5, 0});
    REQUIRE(tip.size() == 1);
    CHECK(ab.is_alpha_Q_visible(tip[0], Cube{{0.5, 0.2}, 0.05}));
    CHECK(ab.is_alpha_Q_visible(tip[0], Cube{{0.5, -0.2}, 0.05}));
}

TEST_CASE("touching pairs see each other's elements") {
    for (const char* name : {"slit_square", "annulus", "multi_slit"}) {
        Domain d = gallery::by_name(name);
        auto w = build_whitney(d, 8);
        AlphaBoundary ab(w, {});
        std::mt19937 rng(13);
        std::uniform_int_distribution<int> uq(0, static_cast<int>(w.size()) - 1);
        int checked = 0;
        while (checked < 300) {
            int q1 = uq(rng);
            auto nb = neighbors(w, q1);
            int q2 = nb[static_cast<std::size_t>(uq(rng)) % nb.size()];
            if (w[q2].cube.diam() < w[q1].cube.diam()) continue;
            ++checked;
            const Cube& c1 = w[q1].cube;
            for (int q : {q1, q2}) {
                int e = ab.omega_for_cube(q);
                CHECK(ab.is_alpha_Q_visible(e, c1));
                CHECK(c1.dilate(41).contains(ab.element(e).anchor.p));
            }
        }
    }
}

TEST_CASE("element metric") {
    const auto& f = slit();
    const AlphaBoundary& ab = f.ab;
    int top = element_on_side(ab, {0, 0}, 1), bottom = element_on_side(ab, {0, 0}, -1);
    REQUIRE(top >= 0);
    REQUIRE(bottom >= 0);
    auto same = ab.element_metric(ElementOrPoint::of(top), ElementOrPoint::of(top));
    CHECK(same.rho_c == 0.0);
    CHECK(same.d_tilde_c == 0.0);
    auto tb = ab.element_metric(ElementOrPoint::of(top), ElementOrPoint::of(bottom));
    auto bt = ab.element_metric(ElementOrPoint::of(bottom), ElementOrPoint::of(top));
    CHECK(tb.rho_c == bt.rho_c);
    CHECK(tb.d_tilde_c == tb.rho_c);
    CHECK(tb.per_scale.size() == ab.scales().size());
    // Oracle: mirrored points just above and below the slit centre.
    double oracle = testing::grid_d_alpha(f.d, {0, 0.01}, {0, -0.01}, 0.5, 512);
    CHECK(tb.rho_c >= std::sqrt(0.5) / 2);
    CHECK(tb.rho_c >= oracle / 2);
    CHECK(tb.rho_c <= 2 * oracle);
    // Exact anchor-gap decomposition.
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> ue(0, static_cast<int>(ab.elements().size()) - 1);
    for (int t = 0; t < 50; ++t) {
        int a = ue(rng), b = ue(rng);
        auto m = ab.element_metric(ElementOrPoint::of(a), ElementOrPoint::of(b));
        auto r = ab.element_metric(ElementOrPoint::of(b), ElementOrPoint::of(a));
        double gap = std::pow(sup_norm(ab.element(a).anchor.p - ab.element(b).anchor.p), ab.alpha());
        CHECK(m.d_tilde_c == doctest::Approx(m.rho_c + gap).epsilon(1e-12));
        CHECK(m.rho_c == doctest::Approx(r.rho_c).epsilon(1e-12));
    }
    auto pe = ab.element_metric(ElementOrPoint::at({0, 0.3}), ElementOrPoint::of(top));
    auto pe_bottom = ab.element_metric(ElementOrPoint::at({0, 0.3}), ElementOrPoint::of(bottom));
    CHECK(pe.rho_c < pe_bottom.rho_c);
}

TEST_CASE("elements are reachable from the basepoint") {
    const auto& f = slit();
    for (const auto& e : f.ab.elements()) {
        CHECK(std::isfinite(e.basepoint_distance));
        CHECK(e.basepoint_distance < kDivergenceGuard);
        CHECK(f.d.on_boundary(e.anchor.p));
        CHECK(std::is_sorted(e.cubes.begin(), e.cubes.end()));
        CHECK(e.representative == e.cubes.front());
        for (int q : e.cubes) CHECK(sup_norm(f.w[q].cube.center - e.anchor.p) <= f.ab.finest_scale() + f.w[q].cube.radius);
    }
}

TEST_CASE("beta to alpha projection") {
    const auto& f = slit();
    AlphaBoundary beta(f.w, {1.0 / 3.0});
    for (const auto& e : beta.elements()) {
        int a = project_beta_to_alpha(f.ab, beta, e.id);
        CHECK(f.ab.element(a).anchor.p == e.anchor.p);
        if (e.anchor.face.side != 0) CHECK(f.ab.element(a).anchor.face.side == e.anchor.face.side);
    }
    std::vector<bool> hit(f.ab.elements().size(), false);
    for (const auto& e : beta.elements()) hit[static_cast<std::size_t>(project_beta_to_alpha(f.ab, beta, e.id))] = true;
    for (const auto& e : f.ab.elements()) {
        if (!beta.elements_at(e.anchor.p).empty()) CHECK(hit[static_cast<std::size_t>(e.id)]);
    }
}

TEST_CASE("comb back wall distances grow with the teeth") {
    double prev = 0.0;
    for (int k = 2; k <= 4; ++k) {
        Domain d = gallery::comb_domain(k);
        auto w = build_whitney(d, 8);
        AlphaBoundary ab(w, {1.0, 5});
        auto back = ab.elements_at({1.0, 0.5});
        REQUIRE(back.size() == 1);
        double dist = ab.element(back[0]).basepoint_distance;
        CHECK(dist >= 1.5 * prev);
        prev = dist;
    }
}
