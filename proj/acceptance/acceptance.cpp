#include "grid_oracle.h"
#include "subhyp/criteria.h"
#include "subhyp/datasets.h"
#include "subhyp/errors.h"
#include "subhyp/verify.h"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace subhyp;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream log;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            log << "  failed: " << what << "\n";
        }
    }
};

using Criterion = std::function<void(Outcome&)>;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

/// a / b, with two exact zeros counting as 1.
double ratio_or_one(double a, double b) {
    if (a == 0.0 && b == 0.0) return 1.0;
    return a / b;
}

bool within_factor(double a, double b, double factor) {
    if (a == 0.0 && b == 0.0) return true;
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return false;
    return std::max(a / b, b / a) <= factor;
}

double l4_gradient(const ExtensionField& ef) { return std::pow(seminorm_quadrature(ef, 4), 0.25); }

// 1. Whitney cube and touching-pair bounds at depth 8, deficit shrinking with depth.
void whitney_validity(Outcome& out) {
    for (const auto& name : gallery::names()) {
        Domain d = gallery::by_name(name);
        auto w = build_whitney(d, 8);
        auto r = verify_whitney(w);
        out.log << "  " << name << ": " << r.cubes << " cubes, " << r.pairs << " pairs, ratios [" << fmt(r.min_ratio)
                << ", " << fmt(r.max_ratio) << "], Wcov " << r.wcov_failures << ", Wadd " << r.wadd1_failures;
        out.require(r.wcov_failures == 0, name + " cube distance bound");
        out.require(r.wadd1_failures == 0 && r.min_ratio >= 0.25 && r.max_ratio <= 4.0, name + " touching ratio");
        std::vector<double> deficit;
        for (int depth = 6; depth <= 9; ++depth) deficit.push_back(build_whitney(d, depth).deficit_area());
        out.log << ", deficit";
        for (double v : deficit) out.log << " " << fmt(v);
        out.log << "\n";
        for (std::size_t k = 1; k < deficit.size(); ++k) {
            bool shrinks = deficit[k] == 0.0 || deficit[k - 1] >= 1.9 * deficit[k];
            out.require(shrinks, name + " deficit shrink at depth " + std::to_string(5 + k + 1));
        }
    }
}

// 2. Partition of unity sums and analytic gradients.
void partition_of_unity_check(Outcome& out) {
    auto value = [](const std::vector<PUEntry>& v, int cube) {
        for (const auto& e : v) {
            if (e.cube == cube) return e.value;
        }
        return 0.0;
    };
    for (const auto& name : gallery::names()) {
        Domain d = gallery::by_name(name);
        auto w = build_whitney(d, 8);
        std::mt19937 rng(2);
        double worst_sum = 0.0;
        for (int t = 0; t < 10000; ++t) {
            double s = 0.0;
            for (const auto& e : partition_of_unity(w, sample_covered(w, rng))) s += e.value;
            worst_sum = std::max(worst_sum, std::abs(s - 1.0));
        }
        // Gradients are checked where at least two bumps overlap.
        double worst_grad = 0.0;
        int checked = 0;
        std::uniform_int_distribution<int> uq(0, static_cast<int>(w.size()) - 1);
        std::uniform_real_distribution<double> along(-1.0, 1.0), across(0.9, 0.995);
        while (checked < 1000) {
            const Cube& c = w[uq(rng)].cube;
            double a = along(rng), b = across(rng);
            Point off = rng() % 2 ? Point{b, a} : Point{a, b};
            if (rng() % 2) off = -1.0 * off;
            Point x = c.center + c.radius * off;
            if (!d.contains(x) || w.locate(x) < 0) continue;
            auto pu = partition_of_unity(w, x);
            if (pu.size() < 2) continue;
            double h = 1e-6 * c.diam();
            auto px = partition_of_unity(w, x + Point{h, 0}), mx = partition_of_unity(w, x - Point{h, 0});
            auto py = partition_of_unity(w, x + Point{0, h}), my = partition_of_unity(w, x - Point{0, h});
            for (const auto& e : pu) {
                Point fd{(value(px, e.cube) - value(mx, e.cube)) / (2 * h),
                         (value(py, e.cube) - value(my, e.cube)) / (2 * h)};
                double scale = std::max(euclid_norm(e.grad), 1.0 / w[e.cube].cube.diam());
                worst_grad = std::max(worst_grad, euclid_norm(fd - e.grad) / scale);
            }
            ++checked;
        }
        out.log << "  " << name << ": max |sum - 1| " << fmt(worst_sum) << ", max gradient relative error "
                << fmt(worst_grad) << "\n";
        out.require(worst_sum < 1e-9, name + " partition sum");
        out.require(worst_grad <= 1e-5, name + " partition gradient");
    }
}

// 3. Chain estimates of d_tilde against the 1024^2 lattice oracle.
void metric_oracle(Outcome& out) {
    using Pair = std::pair<Point, Point>;
    const std::vector<std::pair<std::string, std::vector<Pair>>> designated = {
        {"unit_square",
         {{{0.5, 0.5}, {0.1, 0.1}},
          {{0.05, 0.5}, {0.95, 0.5}},
          {{0.02, 0.02}, {0.98, 0.98}},
          {{0.3, 0.7}, {0.35, 0.72}},
          {{0.1, 0.9}, {0.9, 0.9}}}},
        {"slit_square",
         {{{0.0, 0.1}, {0.0, -0.1}},
          {{-0.8, 0.5}, {0.8, -0.5}},
          {{0.0, 0.5}, {0.0, -0.5}},
          {{0.45, 0.05}, {0.45, -0.05}},
          {{-0.9, -0.9}, {0.9, 0.9}}}},
        {"comb:3",
         {{{0.0625, 0.5}, {0.95, 0.5}},
          {{0.0625, 0.5}, {0.34375, 0.5}},
          {{0.0625, 0.1}, {0.0625, 0.9}},
          {{0.3, 0.5}, {0.7, 0.5}},
          {{0.0625, 0.5}, {0.95, 0.05}}}},
        {"multi_slit",
         {{{0.0, 0.0}, {-0.5, 0.8}},
          {{-0.9, 0.5}, {-0.1, 0.5}},
          {{0.35, 0.65}, {0.65, 0.35}},
          {{0.5, -0.45}, {0.5, -0.55}},
          {{-0.9, -0.9}, {0.9, 0.9}}}},
        {"annulus",
         {{{-0.7, -0.6}, {0.7, 0.6}},
          {{-0.6, 0.0}, {0.6, 0.0}},
          {{0.0, 0.7}, {0.0, -0.7}},
          {{0.5, 0.5}, {0.55, 0.45}},
          {{-0.95, 0.95}, {0.95, -0.95}}}},
        {"outward_cusp:2",
         {{{1.5, 0.0}, {0.5, 0.0}},
          {{1.5, 0.0}, {0.3, 0.0}},
          {{1.2, 0.4}, {1.2, -0.4}},
          {{0.8, 0.1}, {0.8, -0.1}},
          {{1.9, 0.45}, {0.6, 0.05}}}},
    };
    for (const auto& [name, pairs] : designated) {
        Domain d = gallery::by_name(name);
        auto w = build_whitney(d, 9);
        double lo = kInfinity, hi = 0.0;
        for (double alpha : {1.0 / 3.0, 0.5, 1.0}) {
            for (const auto& [x, y] : pairs) {
                double oracle = testing::grid_d_alpha(d, x, y, alpha, 1024) + std::pow(sup_norm(x - y), alpha);
                double est = d_tilde(w, x, y, alpha).upper;
                double r = est / oracle;
                lo = std::min(lo, r);
                hi = std::max(hi, r);
                out.require(std::isfinite(oracle) && r >= 0.5 && r <= 2.0,
                            name + " pair (" + fmt(x.x) + "," + fmt(x.y) + ")-(" + fmt(y.x) + "," + fmt(y.y) +
                                ") alpha " + fmt(alpha) + " ratio " + fmt(r));
            }
        }
        out.log << "  " << name << ": estimate / oracle in [" << fmt(lo) << ", " << fmt(hi) << "]\n";
    }
}

// 4. Bound-check harness on every gallery domain.
void bound_suite(Outcome& out) {
    for (const auto& name : gallery::names()) {
        Domain d = gallery::by_name(name);
        VerifyReport r = run_verify(d, name, {});
        out.log << "  " << name << ":";
        for (const auto& c : r.checks) out.log << " " << c.name << (c.pass ? "" : "(FAIL)");
        out.log << "\n";
        for (const char* required : {"Q-OM", "CH-A", "CMP", "OM-VIS", "LO-QA"}) {
            const VerifyCheck* c = r.find(required);
            out.require(c != nullptr, name + " missing " + required);
            if (c && c->name == "OM-VIS") out.require(c->samples >= 1000, name + " OM-VIS sample count");
        }
        for (const auto& c : r.checks) {
            out.require(c.pass, name + " " + c.name + " measured " + fmt(c.measured) + " bound " + fmt(c.bound) +
                                    (c.coarse ? " depth-1 " + fmt(*c.coarse) : ""));
        }
    }
}

// 5. Element counts on the slit square and at the multi-slit junctions.
void agglutination(Outcome& out) {
    Domain d = gallery::slit_square();
    auto w = build_whitney(d, 8);
    AlphaBoundary ab(w, {0.5});
    double band = 2 * ab.finest_scale();
    int interior = 0, tips = 0, outer = 0;
    for (const auto& s : ab.samples()) {
        bool on_slit = s.p.y == 0.0 && std::abs(s.p.x) <= 0.5;
        std::size_t n = s.elements.size();
        if (!on_slit) {
            ++outer;
            out.require(n == 1, "outer sample (" + fmt(s.p.x) + "," + fmt(s.p.y) + ") has " + std::to_string(n));
        } else if (std::abs(s.p.x) == 0.5) {
            ++tips;
            out.require(n == 1, "tip sample (" + fmt(s.p.x) + ",0) has " + std::to_string(n));
        } else if (0.5 - std::abs(s.p.x) > band) {
            ++interior;
            out.require(n == 2, "slit sample (" + fmt(s.p.x) + ",0) has " + std::to_string(n));
        }
    }
    out.require(interior > 20 && tips == 2 && outer > 100, "sample coverage");
    out.log << "  slit square: " << interior << " interior slit samples, " << tips << " tips, " << outer
            << " outer samples\n";

    Domain m = gallery::multi_slit();
    auto wm = build_whitney(m, 9);
    AlphaBoundary abm(wm, {0.5});
    for (auto [p, expected] : gallery::multi_slit_junctions()) {
        std::size_t n = abm.elements_at(p).size();
        out.log << "  multi_slit (" << fmt(p.x) << "," << fmt(p.y) << "): " << n << " elements, expected " << expected
                << "\n";
        out.require(n == static_cast<std::size_t>(expected), "junction count");
    }
}

// 6. Comb back wall: distance growth per tooth, then inaccessibility.
void inaccessibility(Outcome& out) {
    const Point back{1.0, 0.5};
    double prev = 0.0;
    for (int k = 2; k <= 6; ++k) {
        Domain d = gallery::comb_domain(k);
        auto w = build_whitney(d, 9);
        AlphaBoundary ab(w, {1.0, 5});
        auto at_back = ab.elements_at(back);
        double dist = kInfinity;
        if (!at_back.empty()) dist = ab.element(at_back[0]).basepoint_distance;
        const BoundarySample* sample = nullptr;
        for (const auto& s : ab.samples()) {
            if (s.p == back) sample = &s;
        }
        out.require(sample != nullptr, "comb:" + std::to_string(k) + " has no back-wall sample");
        out.log << "  comb:" << k << ": back-wall distance " << fmt(dist);
        if (prev > 0.0) out.log << " (x" << fmt(dist / prev) << ")";
        if (sample && sample->inaccessible) {
            out.log << ", inaccessible, ladder";
            for (double v : sample->ladder) out.log << " " << fmt(v);
        }
        out.log << "\n";
        if (prev > 0.0) out.require(dist >= 1.5 * prev, "growth at k = " + std::to_string(k));
        if (k == 6) {
            out.require(sample && sample->inaccessible, "k = 6 back wall not flagged inaccessible");
            out.require(sample && !sample->ladder.empty() && sample->ladder.back() > kDivergenceGuard,
                        "k = 6 finest-scale distance within the guard");
        }
        prev = dist;
    }
}

// 7. Round trip for x1, constants and linearity.
void round_trip(Outcome& out) {
    Domain d = gallery::unit_square();
    auto worst_error = [&](int depth) {
        auto w = build_whitney(d, depth);
        AlphaBoundary ab(w, {});
        auto ef = build_extension(datasets::by_name("x1", d), w, ab);
        double worst = 0.0;
        int n = static_cast<int>(ab.elements().size());
        for (int i = 0; i < 200; ++i) {
            int e = static_cast<int>(static_cast<long>(i) * n / 200);
            worst = std::max(worst, std::abs(trace(ef, ab, e, 1.0).value - ab.element(e).anchor.p.x));
        }
        return worst;
    };
    double e7 = worst_error(7), e8 = worst_error(8), e9 = worst_error(9);
    out.log << "  x1 max trace error: depth 7 " << fmt(e7) << ", depth 8 " << fmt(e8) << ", depth 9 " << fmt(e9)
            << " (contraction 7->9 x" << fmt(e7 / e9) << ")\n";
    out.require(e8 <= 0.05, "depth 8 round trip");
    out.require(e7 >= 1.3 * e9, "contraction from depth 7 to 9");

    Domain s = gallery::slit_square();
    auto w = build_whitney(s, 8);
    AlphaBoundary ab(w, {});
    auto ec = build_extension(BoundaryFunction::constant(2.5), w, ab);
    auto f = datasets::by_name("slit01", s), g = datasets::by_name("holder", s);
    auto h = BoundaryFunction::combine(2.5, f, -0.75, g);
    auto ef = build_extension(f, w, ab), eg = build_extension(g, w, ab), eh = build_extension(h, w, ab);
    std::mt19937 rng(7);
    double worst_const = 0.0, worst_lin = 0.0;
    for (int t = 0; t < 1000; ++t) {
        Point x = sample_covered(w, rng);
        auto [v, grad] = ec.value_and_gradient(x);
        worst_const = std::max({worst_const, std::abs(v - 2.5), euclid_norm(grad)});
        worst_lin = std::max(worst_lin, std::abs(eh.evaluate(x) - (2.5 * ef.evaluate(x) - 0.75 * eg.evaluate(x))));
    }
    for (int e = 0; e < static_cast<int>(ab.elements().size()); e += 7) {
        worst_const = std::max(worst_const, std::abs(trace(ec, ab, e).value - 2.5));
    }
    out.log << "  constant data error " << fmt(worst_const) << ", linearity error " << fmt(worst_lin) << "\n";
    out.require(worst_const <= 1e-12, "constant reproduction");
    out.require(worst_lin <= 1e-10, "linearity");
}

// 8. Slit 0/1 data: values on both sides and gradient norm stability.
void slit_extension(Outcome& out) {
    Domain d = gallery::slit_square();
    auto f = datasets::by_name("slit01", d);
    std::vector<double> norms;
    for (int depth : {7, 8, 9}) {
        auto w = build_whitney(d, depth);
        AlphaBoundary ab(w, {});
        auto ef = build_extension(f, w, ab);
        norms.push_back(l4_gradient(ef));
        if (depth == 9) {
            double above = ef.evaluate({0, 0.05}), below = ef.evaluate({0, -0.05});
            out.log << "  depth 9: F(0, 0.05) = " << fmt(above) << ", F(0, -0.05) = " << fmt(below) << "\n";
            out.require(std::abs(above) <= 0.05, "value above the slit");
            out.require(std::abs(below - 1.0) <= 0.05, "value below the slit");
        }
    }
    out.log << "  |grad F|_L4 at depths 7, 8, 9: " << fmt(norms[0]) << " " << fmt(norms[1]) << " " << fmt(norms[2])
            << "\n";
    for (std::size_t k = 1; k < norms.size(); ++k) {
        out.require(std::isfinite(norms[k]) && within_factor(norms[k], norms[k - 1], 2.0), "gradient norm stability");
    }
}

// 9. Coherence of gradient norm, lambda^(1/4) and sharp maximal norm; cusp divergence.
void coherence(Outcome& out) {
    const double p = 4.0, q = 3.0;
    for (const char* name : {"unit_square", "slit_square"}) {
        Domain d = gallery::by_name(name);
        const std::vector<std::string> data = {"constant", "x1", "slit01", "holder"};
        std::vector<std::array<double, 3>> prev(data.size());
        std::vector<double> cusp;
        for (int depth : {7, 8, 9}) {
            auto w = build_whitney(d, depth);
            AlphaBoundary aa(w, {alpha_from_p(p)}), ab(w, {alpha_from_p(q)});
            for (std::size_t i = 0; i < data.size(); ++i) {
                auto f = datasets::by_name(data[i], d);
                auto ef = build_extension(f, w, aa);
                double g = l4_gradient(ef);
                double l = std::pow(variational_lambda(f, aa, p).lambda_est, 1.0 / p);
                double s = sharp_maximal(f, aa, ab, q, p).lp_norm(w, p);
                std::array<double, 3> ratios{ratio_or_one(g, l), ratio_or_one(g, s), ratio_or_one(l, s)};
                out.log << "  " << name << " " << data[i] << " depth " << depth << ": grad " << fmt(g) << ", lambda^1/4 "
                        << fmt(l) << ", sharp " << fmt(s) << " | ratios " << fmt(ratios[0]) << " " << fmt(ratios[1])
                        << " " << fmt(ratios[2]) << "\n";
                for (int k = 0; k < 3; ++k) {
                    std::string what = std::string(name) + " " + data[i] + " depth " + std::to_string(depth);
                    out.require(ratios[k] >= 1e-2 && ratios[k] <= 1e2, what + " ratio range");
                    if (depth > 7) out.require(within_factor(ratios[k], prev[i][k], 2.0), what + " ratio change");
                }
                prev[i] = ratios;
            }
            cusp.push_back(variational_lambda(datasets::by_name("cusp", d), aa, p).lambda_est);
        }
        out.log << "  " << name << " cusp lambda: " << fmt(cusp[0]) << " " << fmt(cusp[1]) << " " << fmt(cusp[2])
                << "\n";
        for (std::size_t k = 1; k < cusp.size(); ++k) {
            out.require(cusp[k] >= 4.0 * cusp[k - 1], std::string(name) + " cusp lambda growth");
        }
    }
}

// 10. Hoelder ratio stability between depths 7 and 9.
void holder_verifier(Outcome& out) {
    const double p = 4.0;
    for (const auto& name : gallery::names()) {
        Domain d = gallery::by_name(name);
        auto extra = cross_slit_pairs(d);
        for (const char* data : {"x1", "slit01", "holder"}) {
            auto f = datasets::by_name(data, d);
            std::array<double, 2> m{};
            int slot = 0;
            for (int depth : {7, 9}) {
                auto w = build_whitney(d, depth);
                AlphaBoundary ab(w, {alpha_from_p(p)});
                auto ef = build_extension(f, w, ab);
                m[static_cast<std::size_t>(slot++)] = check_holder(ef, p, 1000, 3, extra).max_ratio;
            }
            out.log << "  " << name << " " << data << ": depth 7 " << fmt(m[0]) << ", depth 9 " << fmt(m[1])
                    << (extra.empty() ? "" : " (with " + std::to_string(extra.size()) + " cross-slit pairs)") << "\n";
            out.require(std::isfinite(m[0]) && std::isfinite(m[1]) && within_factor(m[0], m[1], 4.0),
                        name + " " + data + " ratio stability");
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<std::pair<std::string, Criterion>> criteria = {
        {"Whitney validity", whitney_validity},
        {"Partition of unity", partition_of_unity_check},
        {"Metric oracle agreement", metric_oracle},
        {"Bound-check suite", bound_suite},
        {"Agglutination exactness", agglutination},
        {"Inaccessibility", inaccessibility},
        {"Extension round trip", round_trip},
        {"Slit extension correctness", slit_extension},
        {"Criterion coherence", coherence},
        {"Hoelder verifier", holder_verifier},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome out;
        auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.log << "  exception: " << e.what() << "\n";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s", out.log.str().c_str());
        std::printf("%s %2d %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs);
        if (!out.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
