#include "subhyp/datasets.h"
#include "subhyp/errors.h"
#include "subhyp/io.h"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace subhyp;
using io::json;

namespace {

/// Reads a flat JSON object into CLI11 config items; nested objects address subcommands.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config: expected a JSON object");
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

    static void collect(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, v] : j.items()) {
            if (v.is_object()) {
                auto p = parents;
                p.push_back(key);
                collect(v, p, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (v.is_array()) {
                for (const auto& e : v) item.inputs.push_back(scalar(e));
            } else {
                item.inputs.push_back(scalar(v));
            }
            items.push_back(std::move(item));
        }
    }
};

struct RunConfig {
    std::string domain_path;
    std::string gallery = "unit_square";
    int depth = 8;
    std::optional<double> alpha;
    double p = 4.0;
    double q = 3.0;
    std::optional<double> eta;
    double epsilon = 0.1;
    double theta = 4.0;
    double sigma = kInfinity;
    std::string f_path;
    std::string data;
    std::string out = "subhyp_out";
    unsigned seed = 1;
    std::string format = "json";
    int n_scales = 5;
    double trace_tol = 1.0;

    // command-specific
    std::string pairs_path;
    int touching_pairs = 1000;
    int samples = 200;
    int grid = 128;
    int trace_elements = 200;
    bool all_clusters = false;

    void validate() const {
        if (depth < 1 || depth > 14) throw InputError("depth must lie in [1, 14]");
        if (!(p > 2)) throw InputError("p must exceed the dimension 2");
        if (alpha && !(*alpha > 0 && *alpha <= 1)) throw InputError("alpha must lie in (0, 1]");
        if (!(epsilon > 0)) throw InputError("epsilon must be positive");
        if (format != "json" && format != "csv") throw InputError("format must be json or csv");
    }

    double alpha_or_p() const { return alpha ? *alpha : alpha_from_p(p); }

    Domain domain() const {
        if (!domain_path.empty()) return io::load_domain(domain_path);
        Domain d = gallery::by_name(gallery);
        d.set_name(gallery);
        return d;
    }

    std::string domain_label() const { return domain_path.empty() ? gallery : domain_path; }

    BoundaryFunction boundary_function(const Domain& d) const {
        if (!f_path.empty() && !data.empty()) throw InputError("give either --f or --data, not both");
        if (!f_path.empty()) return io::load_boundary_function(f_path);
        if (!data.empty()) return datasets::by_name(data, d);
        throw InputError("boundary data required: --f rules.json or --data name");
    }

    AlphaBoundaryOptions boundary_options(double a) const {
        AlphaBoundaryOptions o;
        o.alpha = a;
        o.n_scales = n_scales;
        return o;
    }
};

class Output {
public:
    explicit Output(const std::string& dir) : dir_(dir) {}

    void write(const std::string& name, const std::string& text) {
        std::filesystem::create_directories(dir_);
        std::filesystem::path path = dir_ / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InputError("cannot write " + path.string());
        f << text;
        if (!f) throw InputError("cannot write " + path.string());
        std::printf("wrote %s\n", path.string().c_str());
    }

    void write(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

private:
    std::filesystem::path dir_;
};

int cmd_whitney(const RunConfig& cfg) {
    Domain d = cfg.domain();
    auto w = build_whitney(d, cfg.depth);
    WhitneyReport r = verify_whitney(w);
    Output out(cfg.out);
    out.write("cubes.json", io::cubes_json(w));
    out.write("adjacency.csv", io::adjacency_csv(w));
    out.write("whitney_verify.json", io::whitney_report_json(r));
    std::printf("%s depth %d: %zu cubes, %zu touching pairs, diameter ratios in [%g, %g], deficit area %g, verify %s\n",
                cfg.domain_label().c_str(), cfg.depth, r.cubes, r.pairs, r.min_ratio, r.max_ratio, r.deficit_area,
                r.pass() ? "PASS" : "FAIL");
    return r.pass() ? 0 : 1;
}

int cmd_metric(const RunConfig& cfg) {
    if (cfg.pairs_path.empty()) throw InputError("metric needs --pairs file.csv");
    Domain d = cfg.domain();
    auto queries = io::load_pairs_csv(cfg.pairs_path);
    for (auto& q : queries) check_alpha(q.alpha);
    auto w = build_whitney(d, cfg.depth);
    auto rows = io::estimate_pairs(w, queries);
    Output out(cfg.out);
    if (cfg.format == "csv") {
        out.write("metric.csv", io::pairs_csv(rows));
    } else {
        out.write("metric.json", io::pairs_json(rows));
    }
    int failed = static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.error.empty(); }));
    std::printf("%zu pairs, %d with row errors\n", rows.size(), failed);
    return 0;
}

int cmd_boundary(const RunConfig& cfg) {
    Domain d = cfg.domain();
    auto w = build_whitney(d, cfg.depth);
    AlphaBoundary ab(w, cfg.boundary_options(cfg.alpha_or_p()));
    Output out(cfg.out);
    out.write("boundary.json", io::boundary_json(ab, cfg.all_clusters));
    std::size_t multi = 0;
    for (const auto& s : ab.samples()) multi += s.elements.size() > 1;
    std::printf("alpha %g: %zu elements over %zu samples, %zu agglutinated samples, %zu inaccessible samples\n",
                ab.alpha(), ab.elements().size(), ab.samples().size(), multi, ab.inaccessible_samples().size());
    return 0;
}

int cmd_extend(const RunConfig& cfg) {
    Domain d = cfg.domain();
    auto w = build_whitney(d, cfg.depth);
    double a = cfg.alpha_or_p();
    AlphaBoundary ab(w, cfg.boundary_options(a));
    BoundaryFunction f = cfg.boundary_function(d);
    auto ef = build_extension(f, w, ab, cfg.sigma);
    double quad = seminorm_quadrature(ef, cfg.p);
    double vbound = seminorm_vbound(ef, cfg.p);

    // Trace round trip on evenly spaced elements.
    const auto& elements = ab.elements();
    int n = std::min<int>(cfg.trace_elements, static_cast<int>(elements.size()));
    double max_err = 0.0, max_res = 0.0;
    int traced = 0, failed = 0;
    for (int i = 0; i < n; ++i) {
        int e = static_cast<int>(static_cast<long>(i) * static_cast<long>(elements.size()) / n);
        try {
            auto t = trace(ef, ab, e, cfg.trace_tol);
            max_err = std::max(max_err, std::abs(t.value - f(ab, e)));
            max_res = std::max(max_res, t.residual);
            ++traced;
        } catch (const NumericalError&) {
            ++failed;
        }
    }
    json report = {{"domain", cfg.domain_label()},
                   {"depth", cfg.depth},
                   {"alpha", a},
                   {"p", cfg.p},
                   {"sigma", std::isfinite(cfg.sigma) ? json(cfg.sigma) : json("inf")},
                   {"cubes", w.size()},
                   {"seminorm_quadrature", quad},
                   {"gradient_lp", std::pow(quad, 1 / cfg.p)},
                   {"vbound", vbound},
                   {"trace_elements", traced},
                   {"trace_failures", failed},
                   {"trace_max_error", max_err},
                   {"trace_max_residual", max_res}};
    Output out(cfg.out);
    out.write("extend.json", report);
    out.write("field.csv", io::field_csv(ef, cfg.grid));
    std::printf("|grad F|_L%g = %g, vbound %g, trace error %g over %d elements (%d failed)\n", cfg.p,
                std::pow(quad, 1 / cfg.p), vbound, max_err, traced, failed);
    return 0;
}

int cmd_trace_norm(const RunConfig& cfg) {
    Domain d = cfg.domain();
    auto w = build_whitney(d, cfg.depth);
    AlphaBoundary ab(w, cfg.boundary_options(alpha_from_p(cfg.p)));
    AlphaBoundary ab_beta(w, cfg.boundary_options(alpha_from_p(cfg.q)));
    BoundaryFunction f = cfg.boundary_function(d);

    VariationalOptions vo;
    vo.eta = cfg.eta.value_or(41.0);
    auto lam = variational_lambda(f, ab, cfg.p, vo);
    CollarConfig cc{cfg.epsilon, cfg.theta, cfg.eta.value_or(22 * cfg.theta * cfg.theta)};
    auto w1p = trace_norm_W1p(f, ab, cc, cfg.p);
    auto sharp = sharp_maximal(f, ab, ab_beta, cfg.q, cfg.p);

    auto terms = lam.per_cube_terms;
    std::stable_sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.value > y.value; });
    json top = json::array();
    for (std::size_t i = 0; i < terms.size() && i < 10; ++i) {
        const auto& t = terms[i];
        top.push_back({{"cube", t.cube}, {"omega1", t.omega1}, {"omega2", t.omega2}, {"value", t.value}});
    }
    json report = {{"domain", cfg.domain_label()},
                   {"lambda", lam.lambda_est},
                   {"lambda_root_p", std::pow(lam.lambda_est, 1 / cfg.p)},
                   {"no_pairs", lam.no_pairs},
                   {"collar_lp", w1p.collar_lp},
                   {"collar_lambda", w1p.lambda.lambda_est},
                   {"trace_norm_w1p", w1p.value},
                   {"sharp_lp", sharp.lp_norm(w, cfg.p)},
                   {"eta", vo.eta},
                   {"collar_eta", cc.eta},
                   {"epsilon", cc.epsilon},
                   {"theta", cc.theta},
                   {"p", cfg.p},
                   {"q", cfg.q},
                   {"depth", cfg.depth},
                   {"per_cube_top", std::move(top)}};
    std::string csv = "cube,cx,cy,r,omega1,omega2,value\n";
    for (const auto& t : lam.per_cube_terms) {
        const Cube& c = w[t.cube].cube;
        csv += std::to_string(t.cube) + "," + io::num(c.center.x) + "," + io::num(c.center.y) + "," + io::num(c.radius) +
               "," + std::to_string(t.omega1) + "," + std::to_string(t.omega2) + "," + io::num(t.value) + "\n";
    }
    Output out(cfg.out);
    out.write("trace_norm.json", report);
    out.write("lambda_terms.csv", csv);
    std::printf("lambda %g (lambda^(1/p) %g), W1p trace norm %g, |f#|_Lp %g\n", lam.lambda_est,
                std::pow(lam.lambda_est, 1 / cfg.p), w1p.value, sharp.lp_norm(w, cfg.p));
    return 0;
}

int cmd_sharpmax(const RunConfig& cfg) {
    Domain d = cfg.domain();
    auto w = build_whitney(d, cfg.depth);
    AlphaBoundary ab(w, cfg.boundary_options(alpha_from_p(cfg.p)));
    AlphaBoundary ab_beta(w, cfg.boundary_options(alpha_from_p(cfg.q)));
    BoundaryFunction f = cfg.boundary_function(d);
    auto sharp = sharp_maximal(f, ab, ab_beta, cfg.q, cfg.p);
    int empty = static_cast<int>(std::count(sharp.empty.begin(), sharp.empty.end(), 1));
    json report = {{"domain", cfg.domain_label()},
                   {"depth", cfg.depth},
                   {"p", cfg.p},
                   {"q", cfg.q},
                   {"alpha", sharp.alpha},
                   {"beta", sharp.beta},
                   {"sharp_lp", sharp.lp_norm(w, cfg.p)},
                   {"sharp_lp_collar", sharp.lp_norm(w, cfg.p, cfg.epsilon)},
                   {"epsilon", cfg.epsilon},
                   {"empty_cubes", empty},
                   {"radii", sharp.radii}};
    std::string csv = "cube,cx,cy,r,value,empty\n";
    for (int q = 0; q < static_cast<int>(w.size()); ++q) {
        const Cube& c = w[q].cube;
        csv += std::to_string(q) + "," + io::num(c.center.x) + "," + io::num(c.center.y) + "," + io::num(c.radius) + "," +
               io::num(sharp.values[static_cast<std::size_t>(q)]) + "," +
               std::to_string(static_cast<int>(sharp.empty[static_cast<std::size_t>(q)])) + "\n";
    }
    Output out(cfg.out);
    out.write("sharpmax.json", report);
    out.write("sharp_field.csv", csv);
    std::printf("|f#|_L%g = %g (collar %g), %d empty cubes\n", cfg.p, sharp.lp_norm(w, cfg.p),
                sharp.lp_norm(w, cfg.p, cfg.epsilon), empty);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    Domain d = cfg.domain();
    VerifyOptions vo;
    vo.depth = cfg.depth;
    vo.p = cfg.p;
    vo.q = cfg.q;
    vo.pairs = cfg.touching_pairs;
    vo.samples = cfg.samples;
    vo.seed = cfg.seed;
    vo.data = cfg.data.empty() ? "x1" : cfg.data;
    auto rep = run_verify(d, cfg.domain_label(), vo);
    Output out(cfg.out);
    out.write("verify.json", io::verify_json(rep));
    for (const auto& c : rep.checks) {
        std::printf("%-7s %s measured %g bound %g", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.measured, c.bound);
        if (c.coarse) std::printf(" (depth-1 %g)", *c.coarse);
        std::printf("  %s\n", c.detail.c_str());
    }
    std::printf("verify %s\n", rep.pass() ? "PASS" : "FAIL");
    return rep.pass() ? 0 : 1;
}

int run(CLI::App& app, const RunConfig& cfg) {
    cfg.validate();
    if (app.got_subcommand("gallery-list")) {
        for (const auto& n : gallery::names()) std::printf("%s\n", n.c_str());
        return 0;
    }
    if (app.got_subcommand("whitney")) return cmd_whitney(cfg);
    if (app.got_subcommand("metric")) return cmd_metric(cfg);
    if (app.got_subcommand("boundary")) return cmd_boundary(cfg);
    if (app.got_subcommand("extend")) return cmd_extend(cfg);
    if (app.got_subcommand("trace-norm")) return cmd_trace_norm(cfg);
    if (app.got_subcommand("sharpmax")) return cmd_sharpmax(cfg);
    if (app.got_subcommand("verify")) return cmd_verify(cfg);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Whitney decompositions, subhyperbolic metrics and trace criteria on planar domains"};
    app.fallthrough();
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file of option defaults; flags override it");

    RunConfig cfg;
    app.add_option("--domain", cfg.domain_path, "Domain JSON file")->check(CLI::ExistingFile);
    app.add_option("--gallery", cfg.gallery, "Gallery domain name (see gallery-list)")->capture_default_str();
    app.add_option("--depth", cfg.depth, "Whitney depth limit")->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "Exponent alpha in (0, 1]; defaults to (p-2)/(p-1)");
    app.add_option("--p", cfg.p, "Sobolev exponent p > 2")->capture_default_str();
    app.add_option("--q", cfg.q, "Sharp-maximal exponent, 2 < q < p")->capture_default_str();
    app.add_option("--eta", cfg.eta, "Dilation eta (default 41; collar default 22 theta^2)");
    app.add_option("--epsilon", cfg.epsilon, "Collar width")->capture_default_str();
    app.add_option("--theta", cfg.theta, "Covering constant theta")->capture_default_str();
    app.add_option("--sigma", cfg.sigma, "Extension cut-off diameter (default: none)");
    app.add_option("--f", cfg.f_path, "Boundary function rules JSON")->check(CLI::ExistingFile);
    app.add_option("--data", cfg.data, "Named boundary data: constant[:c], x1, slit01, holder, cusp");
    app.add_option("--out", cfg.out, "Output directory; nothing is written elsewhere")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
    app.add_option("--format", cfg.format, "Tabular output format: json or csv")->capture_default_str();
    app.add_option("--scales", cfg.n_scales, "Number of agglutination scales")->capture_default_str();
    app.add_option("--trace-tol", cfg.trace_tol, "Relative trace residual tolerance")->capture_default_str();

    app.add_subcommand("whitney", "Whitney cubes, adjacency and their verification");
    auto* metric = app.add_subcommand("metric", "Batch d_tilde estimates for a CSV of pairs");
    metric->add_option("--pairs", cfg.pairs_path, "CSV rows x1,y1,x2,y2,alpha")->check(CLI::ExistingFile);
    auto* boundary = app.add_subcommand("boundary", "Alpha-boundary elements, agglutination counts, inaccessible samples");
    boundary->add_flag("--clusters", cfg.all_clusters, "Add per-scale cluster sizes for the elements seen at boundary samples");
    auto* extend = app.add_subcommand("extend", "Whitney extension field, seminorm and trace round trip");
    extend->add_option("--grid", cfg.grid, "Field sample grid size")->capture_default_str();
    extend->add_option("--trace-elements", cfg.trace_elements, "Elements in the trace round trip")->capture_default_str();
    app.add_subcommand("trace-norm", "Variational lambda, collar norm and sharp-maximal norm");
    app.add_subcommand("sharpmax", "Fractional sharp maximal field");
    auto* verify = app.add_subcommand("verify", "Bound-check suite");
    verify->add_option("--pairs", cfg.touching_pairs, "Touching Whitney pairs for the anchor check")->capture_default_str();
    verify->add_option("--samples", cfg.samples, "Random samples per check")->capture_default_str();
    app.add_subcommand("gallery-list", "List gallery domain names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    try {
        return run(app, cfg);
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const ResolutionError& e) {
        std::fprintf(stderr, "resolution error: %s\n", e.what());
        return 3;
    } catch (const DataRuleError& e) {
        std::fprintf(stderr, "data rule error: %s\n", e.what());
        return 4;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 5;
    }
}
