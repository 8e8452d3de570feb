#include "subhyp/io.h"

#include "subhyp/errors.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace subhyp::io {

namespace {

Point point_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InputError(std::string(what) + ": expected [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point> ring_from(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + ": expected a list of points");
    std::vector<Point> out;
    for (const auto& p : j) out.push_back(point_from(p, what));
    return out;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

json read_json_file(const std::string& path) {
    std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

Domain domain_from_json(const json& j) {
    if (!j.is_object()) throw InputError("domain: expected a JSON object");
    std::string type = j.value("type", "polygon");
    Domain d;
    try {
        if (type == "polygon") {
            if (!j.contains("outer")) throw InputError("domain: polygon needs \"outer\"");
            std::vector<std::vector<Point>> holes;
            for (const auto& h : j.value("holes", json::array())) holes.push_back(ring_from(h, "hole"));
            std::vector<std::array<Point, 2>> slits;
            for (const auto& s : j.value("slits", json::array())) {
                auto pts = ring_from(s, "slit");
                if (pts.size() != 2) throw InputError("slit: expected two endpoints");
                slits.push_back({pts[0], pts[1]});
            }
            d = Domain::polygon(ring_from(j["outer"], "outer"), holes, slits);
        } else if (type == "grid") {
            if (!j.contains("cell") || !j.contains("rows")) throw InputError("domain: grid needs \"cell\" and \"rows\"");
            Point origin = j.contains("origin") ? point_from(j["origin"], "origin") : Point{};
            d = Domain::grid(j["cell"].get<double>(), j["rows"].get<std::vector<std::string>>(), origin);
        } else {
            throw InputError("domain: unknown type '" + type + "'");
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("domain: ") + e.what());
    }
    Point deepest = d.validate();
    d.set_basepoint(j.contains("basepoint") ? point_from(j["basepoint"], "basepoint") : deepest);
    if (!d.contains(d.basepoint())) throw InputError("domain: basepoint outside the domain");
    d.set_name(j.value("name", "custom"));
    return d;
}

Domain load_domain(const std::string& path) { return domain_from_json(read_json_file(path)); }

BoundaryFunction boundary_function_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("boundary function: expected a non-empty list of rules");
    BoundaryFunction f;
    try {
        for (const auto& rule : j) {
            if (!rule.is_object() || !rule.contains("expr")) throw InputError("boundary function: rule needs \"expr\"");
            std::string face = "any";
            std::optional<std::array<Point, 2>> box;
            if (rule.contains("where")) {
                const auto& w = rule["where"];
                face = w.value("face", "any");
                if (w.contains("box")) {
                    const auto& b = w["box"];
                    if (b.is_array() && b.size() == 4) {
                        box = std::array<Point, 2>{Point{b[0].get<double>(), b[1].get<double>()},
                                                   Point{b[2].get<double>(), b[3].get<double>()}};
                    } else if (b.is_array() && b.size() == 2) {
                        box = std::array<Point, 2>{point_from(b[0], "box"), point_from(b[1], "box")};
                    } else {
                        throw InputError("boundary function: box is [x0, y0, x1, y1]");
                    }
                }
            }
            f.add(face, rule["expr"].get<std::string>(), box);
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("boundary function: ") + e.what());
    }
    return f;
}

BoundaryFunction load_boundary_function(const std::string& path) {
    return boundary_function_from_json(read_json_file(path));
}

json cubes_json(const WhitneyDecomposition& w) {
    json out = json::array();
    for (const auto& c : w.cubes()) {
        out.push_back({{"level", c.level},
                       {"i", c.i},
                       {"j", c.j},
                       {"cx", c.cube.center.x},
                       {"cy", c.cube.center.y},
                       {"r", c.cube.radius},
                       {"anchor", point_json(c.anchor.p)},
                       {"face", c.anchor.face.str()}});
    }
    return out;
}

json whitney_report_json(const WhitneyReport& r) {
    return {{"pass", r.pass()},
            {"cubes", r.cubes},
            {"pairs", r.pairs},
            {"wcov_failures", r.wcov_failures},
            {"wadd1_failures", r.wadd1_failures},
            {"wadd3_failures", r.wadd3_failures},
            {"max_neighbors", r.max_neighbors},
            {"max_star_neighbors", r.max_star_neighbors},
            {"min_ratio", r.min_ratio},
            {"max_ratio", r.max_ratio},
            {"deficit_area", r.deficit_area}};
}

std::string adjacency_csv(const WhitneyDecomposition& w) {
    std::string out = "a,b\n";
    for (int q = 0; q < static_cast<int>(w.size()); ++q) {
        for (int k : w.neighbors(q)) {
            if (q < k) out += std::to_string(q) + "," + std::to_string(k) + "\n";
        }
    }
    return out;
}

std::vector<PairQuery> parse_pairs_csv(const std::string& text) {
    std::vector<PairQuery> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        std::vector<double> v;
        std::istringstream cells(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric && out.empty() && line_no == 1) continue;  // header
        if (!numeric || (v.size() != 4 && v.size() != 5)) {
            throw InputError("pairs line " + std::to_string(line_no) + ": expected x1,y1,x2,y2[,alpha]");
        }
        out.push_back({{v[0], v[1]}, {v[2], v[3]}, v.size() == 5 ? v[4] : 0.5});
    }
    return out;
}

std::vector<PairQuery> load_pairs_csv(const std::string& path) { return parse_pairs_csv(read_text(path)); }

std::vector<PairResult> estimate_pairs(const WhitneyDecomposition& w, const std::vector<PairQuery>& pairs) {
    const Domain& d = w.domain();
    std::vector<PairResult> out;
    for (const auto& q : pairs) {
        PairResult r{q, {}, ""};
        if (!d.contains(q.x) || !d.contains(q.y)) {
            r.error = "outside";
        } else {
            try {
                r.estimate = d_tilde(w, q.x, q.y, q.alpha);
            } catch (const ResolutionError&) {
                r.error = "uncovered";
            } catch (const NumericalError&) {
                r.error = "divergent";
            } catch (const InputError&) {
                r.error = "input";
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string pairs_csv(const std::vector<PairResult>& rows) {
    std::string out = "x1,y1,x2,y2,alpha,upper,chain_sum,certified_lower,chain_len,error\n";
    for (const auto& r : rows) {
        const auto& q = r.query;
        out += num(q.x.x) + "," + num(q.x.y) + "," + num(q.y.x) + "," + num(q.y.y) + "," + num(q.alpha) + ",";
        if (r.error.empty()) {
            out += num(r.estimate.upper) + "," + num(r.estimate.chain_sum) + "," + num(r.estimate.certified_lower) + "," +
                   std::to_string(r.estimate.chain.size()) + ",\n";
        } else {
            out += ",,,," + r.error + "\n";
        }
    }
    return out;
}

json pairs_json(const std::vector<PairResult>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json row = {{"x", point_json(r.query.x)}, {"y", point_json(r.query.y)}, {"alpha", r.query.alpha}};
        if (r.error.empty()) {
            row["upper"] = r.estimate.upper;
            row["chain_sum"] = r.estimate.chain_sum;
            row["certified_lower"] = r.estimate.certified_lower;
            row["chain_len"] = r.estimate.chain.size();
        } else {
            row["error"] = r.error;
        }
        out.push_back(std::move(row));
    }
    return out;
}

json boundary_json(const AlphaBoundary& ab, bool with_clusters) {
    std::vector<char> sampled(ab.elements().size(), 0);
    for (const auto& s : ab.samples()) {
        if (!with_clusters) break;
        for (int e : s.elements) sampled[static_cast<std::size_t>(e)] = 1;
    }
    json elements = json::array();
    int n_scales = static_cast<int>(ab.scales().size());
    for (const auto& e : ab.elements()) {
        json row = {{"id", e.id},
                    {"anchor", point_json(e.anchor.p)},
                    {"face", e.anchor.face.str()},
                    {"representative", e.representative},
                    {"basepoint_distance", e.basepoint_distance}};
        if (sampled[static_cast<std::size_t>(e.id)]) {
            json sizes = json::array();
            for (int k = 0; k < n_scales; ++k) sizes.push_back(ab.cluster_at_scale(e.id, k).size());
            row["scales"] = ab.scales();
            row["cluster_sizes"] = std::move(sizes);
        }
        elements.push_back(std::move(row));
    }
    json samples = json::array();
    json inaccessible = json::array();
    for (const auto& s : ab.samples()) {
        samples.push_back({{"p", point_json(s.p)}, {"count", s.elements.size()}, {"elements", s.elements}});
        if (s.inaccessible) inaccessible.push_back({{"p", point_json(s.p)}, {"ladder", s.ladder}});
    }
    return {{"alpha", ab.alpha()},
            {"scales", ab.scales()},
            {"elements", std::move(elements)},
            {"samples", std::move(samples)},
            {"inaccessible", std::move(inaccessible)}};
}

std::string field_csv(const ExtensionField& ef, int n) {
    if (n < 1) throw InputError("field grid needs at least one cell");
    const Domain& d = ef.decomposition().domain();
    Point lo = d.bbox_min(), hi = d.bbox_max();
    std::string out = "x,y,F,dF1,dF2\n";
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Point x{lo.x + (i + 0.5) * (hi.x - lo.x) / n, lo.y + (j + 0.5) * (hi.y - lo.y) / n};
            if (!d.contains(x) || !ef.evaluable(x)) continue;
            auto [v, g] = ef.value_and_gradient(x);
            out += num(x.x) + "," + num(x.y) + "," + num(v) + "," + num(g.x) + "," + num(g.y) + "\n";
        }
    }
    return out;
}

json verify_json(const VerifyReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json row = {{"name", c.name},
                    {"pass", c.pass},
                    {"measured", c.measured},
                    {"bound", c.bound},
                    {"samples", c.samples},
                    {"detail", c.detail}};
        if (c.coarse) row["coarse"] = *c.coarse;
        checks.push_back(std::move(row));
    }
    return {{"domain", r.domain}, {"depth", r.depth}, {"pass", r.pass()}, {"checks", std::move(checks)}};
}

}  // namespace subhyp::io
