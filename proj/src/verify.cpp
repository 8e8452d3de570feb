#include "subhyp/verify.h"

#include "subhyp/datasets.h"
#include "subhyp/errors.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace subhyp {

namespace {

struct Level {
    WhitneyDecomposition w;
    AlphaBoundary ab;
    ExtensionField ef;

    Level(const Domain& d, int depth, double alpha, const std::string& data)
        : w(build_whitney(d, depth)), ab(w, {alpha}), ef(build_extension(datasets::by_name(data, d), w, ab)) {}
};

bool stable(double a, double b, double factor) {
    return std::isfinite(a) && std::isfinite(b) && a <= factor * b && b <= factor * a;
}

const double kAlphas[] = {1.0 / 3.0, 0.5, 1.0};

VerifyCheck check_segment_bound(const WhitneyDecomposition& w, int n, std::mt19937& rng) {
    const Domain& d = w.domain();
    VerifyCheck c{"Q-OM", true, 0.0, 1.0, 0, "segment length / ((1/alpha) |x-y|^alpha) where |x-y| <= rho(x)", {}};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double alpha : kAlphas) {
        for (int t = 0; t < n; ++t) {
            Point x = sample_covered(w, rng);
            double rx = d.boundary_distance(x);
            Point y = x + rx * Point{u(rng), u(rng)};
            double r = sup_norm(x - y);
            if (r == 0.0 || !d.contains(y)) continue;
            double ratio = subhyperbolic_length(d, {x, y}, alpha) / ((1 / alpha) * std::pow(r, alpha));
            c.measured = std::max(c.measured, ratio);
            ++c.samples;
        }
    }
    c.pass = c.measured <= c.bound * (1 + 1e-9);
    return c;
}

std::pair<VerifyCheck, VerifyCheck> check_chain_bounds(const WhitneyDecomposition& w, int n, std::mt19937& rng) {
    const Domain& d = w.domain();
    VerifyCheck chain{"CH-A", true, 0.0, 1.0, 0, "upper / ((1 + 2/alpha) chain_sum + |x-y|^alpha)", {}};
    VerifyCheck cmp{"CMP", true, 0.0, 1.0, 0, "near: upper / ((1 + 1/alpha) |x-y|^alpha); far: upper >= 2^(alpha-1) |x-y|^alpha", {}};
    int far_failures = 0;
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (double alpha : kAlphas) {
        for (int t = 0; t < n; ++t) {
            Point x = sample_covered(w, rng), y = sample_covered(w, rng);
            MetricEstimate e = d_tilde(w, x, y, alpha);
            double gap = std::pow(sup_norm(x - y), alpha);
            chain.measured = std::max(chain.measured, e.upper / ((1 + 2 / alpha) * e.chain_sum + gap));
            ++chain.samples;
            if (sup_norm(x - y) >= std::min(d.boundary_distance(x), d.boundary_distance(y))) {
                if (e.upper < std::pow(2.0, alpha - 1) * gap) ++far_failures;
                ++cmp.samples;
            }
            double rx = d.boundary_distance(x);
            Point z = x + rx * Point{u(rng), u(rng)};
            double r = sup_norm(x - z);
            if (r == 0.0 || !d.contains(z) || w.locate(z) < 0 || r >= std::min(rx, d.boundary_distance(z))) continue;
            cmp.measured = std::max(cmp.measured, d_tilde(w, x, z, alpha).upper / ((1 + 1 / alpha) * std::pow(r, alpha)));
            ++cmp.samples;
        }
    }
    chain.pass = chain.measured <= 1 + 1e-9;
    cmp.pass = cmp.measured <= 1 + 1e-9 && far_failures == 0;
    if (far_failures > 0) cmp.detail += "; far-regime failures " + std::to_string(far_failures);
    return {chain, cmp};
}

VerifyCheck check_partition(const WhitneyDecomposition& w, int n, std::mt19937& rng) {
    VerifyCheck c{"PU", true, 0.0, 1e-9, n, "max |sum phi_Q - 1|", {}};
    for (int t = 0; t < n; ++t) {
        double s = 0.0;
        for (const auto& e : partition_of_unity(w, sample_covered(w, rng))) s += e.value;
        c.measured = std::max(c.measured, std::abs(s - 1));
    }
    c.pass = c.measured < c.bound;
    return c;
}

struct LocalConstants {
    double gradient = 0.0;  // sup |grad F| diam K / max touching |c_Q - c_K|
    double locality = 0.0;  // |F(x) - c_K| / max touching |c_Q - c_K|
    int samples = 0;
};

/// Every cube with a nonzero touching spread, on a fixed lattice of its overlap band.
LocalConstants local_constants(const Level& lv) {
    const auto& w = lv.w;
    const auto& c = lv.ef.coefficients();
    LocalConstants out;
    for (int k = 0; k < static_cast<int>(w.size()); ++k) {
        double spread = 0.0;
        for (int j : neighbors(w, k)) {
            spread = std::max(spread, std::abs(c[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(k)]));
        }
        if (spread == 0.0) continue;
        const Cube& cube = w[k].cube;
        for (int i = 0; i < 16; ++i) {
            double along = (2 * i + 1) / 16.0 - 1;
            for (double across : {0.89, 0.92, 0.95, 0.98}) {
                for (Point dir : {Point{across, along}, Point{-across, along}, Point{along, across}, Point{along, -across}}) {
                    Point x = cube.center + cube.radius * dir;
                    if (w.locate(x) != k || !lv.ef.evaluable(x)) continue;
                    auto [v, g] = lv.ef.value_and_gradient(x);
                    out.gradient = std::max(out.gradient, euclid_norm(g) * cube.diam() / spread);
                    out.locality = std::max(out.locality, std::abs(v - c[static_cast<std::size_t>(k)]) / spread);
                    ++out.samples;
                }
            }
        }
    }
    return out;
}

/// max of d_tilde^c(y, omega_Q) / dist(y, boundary)^alpha over random y in random cubes.
double approach_constant(const Level& lv, int n, std::mt19937& rng, int& samples) {
    const auto& w = lv.w;
    const Domain& d = w.domain();
    std::uniform_int_distribution<int> pick(0, static_cast<int>(w.size()) - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < n; ++t) {
        int q = pick(rng);
        const Cube& c = w[q].cube;
        Point y = c.center + c.radius * Point{u(rng), u(rng)};
        if (!d.contains(y) || w.locate(y) != q) continue;
        auto m = lv.ab.element_metric(ElementOrPoint::at(y), ElementOrPoint::of(lv.ab.omega_for_cube(q)));
        worst = std::max(worst, m.d_tilde_c / std::pow(d.boundary_distance(y), lv.ab.alpha()));
        ++samples;
    }
    return worst;
}

VerifyCheck check_anchor_containment(const Level& lv, int n, std::mt19937& rng) {
    const auto& w = lv.w;
    VerifyCheck c{"OM-VIS", true, 0.0, 41.0, 0, "omega of Q and of a touching K >= Q visible from Q, anchors in 41Q", {}};
    std::uniform_int_distribution<int> pick(0, static_cast<int>(w.size()) - 1);
    int failures = 0;
    for (int guard = 0; c.samples < n && guard < 100 * n; ++guard) {
        int q1 = pick(rng);
        const auto& nb = neighbors(w, q1);
        int q2 = nb[static_cast<std::size_t>(pick(rng)) % nb.size()];
        if (w[q2].cube.diam() < w[q1].cube.diam()) continue;
        ++c.samples;
        const Cube& cube = w[q1].cube;
        for (int q : {q1, q2}) {
            int e = lv.ab.omega_for_cube(q);
            Point a = lv.ab.element(e).anchor.p;
            c.measured = std::max(c.measured, sup_norm(a - cube.center) / cube.radius);
            if (!lv.ab.is_alpha_Q_visible(e, cube) || !cube.dilate(41).contains(a)) ++failures;
        }
    }
    c.pass = failures == 0 && c.samples == n;
    if (failures > 0) c.detail += "; failures " + std::to_string(failures);
    return c;
}

}  // namespace

bool VerifyReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

const VerifyCheck* VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

VerifyReport run_verify(const Domain& d, const std::string& name, const VerifyOptions& opt) {
    if (opt.pairs < 1 || opt.samples < 1) throw InputError("verify needs positive sample counts");
    double alpha = alpha_from_p(opt.p);
    if (!(opt.q > 2 && opt.q < opt.p)) throw InputError("verify needs 2 < q < p");
    VerifyReport rep;
    rep.domain = name;
    rep.depth = opt.depth;
    std::mt19937 rng(opt.seed);

    Level fine(d, opt.depth, alpha, opt.data);
    Level coarse(d, opt.depth - 1, alpha, opt.data);
    const auto& w = fine.w;

    WhitneyReport wr = verify_whitney(w);
    rep.checks.push_back({"Wcov", wr.pass(), wr.max_ratio, 4.0, static_cast<int>(wr.cubes),
                          "max touching diameter ratio; Wcov/Wadd failures " + std::to_string(wr.wcov_failures + wr.wadd1_failures + wr.wadd3_failures), {}});
    rep.checks.push_back(check_segment_bound(w, opt.samples, rng));
    auto [chain, cmp] = check_chain_bounds(w, opt.samples / 4 + 1, rng);
    rep.checks.push_back(chain);
    rep.checks.push_back(cmp);
    rep.checks.push_back(check_partition(w, 10 * opt.samples, rng));

    LocalConstants lf = local_constants(fine);
    LocalConstants lc = local_constants(coarse);
    rep.checks.push_back({"E-GR", stable(lf.gradient, lc.gradient, 2.0), lf.gradient, 2.0, lf.samples + lc.samples,
                          "sup |grad F| diam K / max touching |c_Q - c_K|, stable within 2x", lc.gradient});
    double locality = std::max(lf.locality, lc.locality);
    rep.checks.push_back({"C-L", locality <= 10.0, locality, 10.0, lf.samples + lc.samples,
                          "|F(x) - c_K| / max touching |c_Q - c_K|", {}});

    int lo_samples = 0;
    double af = approach_constant(fine, opt.samples, rng, lo_samples);
    double ac = approach_constant(coarse, opt.samples, rng, lo_samples);
    rep.checks.push_back({"LO-QA", stable(af, ac, 2.0), af, 2.0, lo_samples,
                          "d_tilde^c(y, omega_Q) / dist(y, boundary)^alpha, stable within 2x", ac});

    auto extra = cross_slit_pairs(d);
    double hf = check_holder(fine.ef, opt.p, opt.samples, opt.seed, extra).max_ratio;
    double hc = check_holder(coarse.ef, opt.p, opt.samples, opt.seed, extra).max_ratio;
    rep.checks.push_back({"UC-DA", stable(hf, hc, 4.0) || (hf == 0.0 && hc == 0.0), hf, 4.0, 2 * opt.samples,
                          "|F(x) - F(y)| / d_tilde_upper^(1 - 1/p), stable within 4x", hc});

    auto sf = check_sobolev_poincare(fine.ef, opt.q, opt.samples / 4 + 1, opt.seed);
    auto sc = check_sobolev_poincare(coarse.ef, opt.q, opt.samples / 4 + 1, opt.seed);
    rep.checks.push_back({"SPE", stable(sf.max_ratio, sc.max_ratio, 4.0) || (sf.max_ratio == 0.0 && sc.max_ratio == 0.0),
                          sf.max_ratio, 4.0, sf.cubes + sc.cubes,
                          "|F(x) - F(y)| / (diam Q avg_Q |grad F|^q)^(1/q), stable within 4x", sc.max_ratio});

    rep.checks.push_back(check_anchor_containment(fine, opt.pairs, rng));
    return rep;
}

}  // namespace subhyp
