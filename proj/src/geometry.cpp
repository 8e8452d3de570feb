#include "subhyp/geometry.h"

#include "subhyp/errors.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace subhyp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_at(Point p, Point a, Point d, double t) {
    return std::max(std::abs(a.x + t * d.x - p.x), std::abs(a.y + t * d.y - p.y));
}

double polygon_area(const std::vector<Point>& ring) {
    double s = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        s += cross(ring[i], ring[(i + 1) % ring.size()]);
    }
    return std::abs(s) / 2.0;
}

bool point_in_ring(Point p, const std::vector<Point>& ring) {
    bool in = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        Point a = ring[i], b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) in = !in;
        }
    }
    return in;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

/// Parameter range [t0,t1] of p + t(q-p) inside the CCW convex polygon, slightly inflated.
bool clip_to_convex(const std::vector<Point>& hull, Point p, Point q, double inflate,
                    double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    Point d = q - p;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        Point a = hull[i], b = hull[(i + 1) % hull.size()];
        Point e = b - a;
        double len = euclid_norm(e);
        // Outward normal of a CCW polygon edge is (e.y, -e.x).
        Point n{e.y / len, -e.x / len};
        double num = dot(n, p - a) - inflate;
        double den = dot(n, d);
        if (std::abs(den) < 1e-300) {
            if (num > 0) return false;
            continue;
        }
        double t = -num / den;
        if (den > 0) {
            t1 = std::min(t1, t);
        } else {
            t0 = std::max(t0, t);
        }
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

std::array<Point, 4> Cube::corners() const {
    return {Point{center.x - radius, center.y - radius}, Point{center.x + radius, center.y - radius},
            Point{center.x + radius, center.y + radius}, Point{center.x - radius, center.y + radius}};
}

std::string FaceTag::str() const {
    std::string s = std::to_string(segment);
    if (side > 0) s += "+";
    if (side < 0) s += "-";
    return s;
}

double sup_dist_point_segment(Point p, Point a, Point b, double* t_out) {
    Point d = b - a;
    double u0 = a.x - p.x, v0 = a.y - p.y;
    double cand[6];
    int n = 0;
    cand[n++] = 0.0;
    cand[n++] = 1.0;
    if (d.x != 0.0) cand[n++] = -u0 / d.x;
    if (d.y != 0.0) cand[n++] = -v0 / d.y;
    if (d.x != d.y) cand[n++] = (v0 - u0) / (d.x - d.y);
    if (d.x != -d.y) cand[n++] = -(u0 + v0) / (d.x + d.y);
    double best = kInf, best_t = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = std::clamp(cand[i], 0.0, 1.0);
        double v = sup_at(p, a, d, t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    if (t_out) *t_out = best_t;
    return best;
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    auto orient = [](Point a, Point b, Point c) {
        double v = cross(b - a, c - a);
        return (v > 0) - (v < 0);
    };
    auto on_seg = [](Point a, Point b, Point c) {
        return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
               std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
    };
    int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_seg(p1, p2, q1)) return true;
    if (o2 == 0 && on_seg(p1, p2, q2)) return true;
    if (o3 == 0 && on_seg(q1, q2, p1)) return true;
    if (o4 == 0 && on_seg(q1, q2, p2)) return true;
    return false;
}

Domain Domain::polygon(std::vector<Point> outer, std::vector<std::vector<Point>> holes,
                       std::vector<std::array<Point, 2>> slits) {
    if (outer.size() < 3) throw InputError("polygon needs at least 3 outer vertices");
    Domain d;
    d.kind_ = DomainKind::polygon;
    auto add_ring = [&](const std::vector<Point>& ring, SegmentKind kind) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            Point a = ring[i], b = ring[(i + 1) % ring.size()];
            if (a == b) continue;
            d.segments_.push_back({a, b, kind});
        }
    };
    add_ring(outer, SegmentKind::outer);
    for (const auto& h : holes) {
        if (h.size() < 3) throw InputError("hole needs at least 3 vertices");
        add_ring(h, SegmentKind::hole);
    }
    for (const auto& s : slits) {
        if (s[0] == s[1]) throw InputError("degenerate slit");
        d.segments_.push_back({s[0], s[1], SegmentKind::slit});
    }
    d.area_ = polygon_area(outer);
    for (const auto& h : holes) d.area_ -= polygon_area(h);
    d.outer_ = std::move(outer);
    d.holes_ = std::move(holes);
    d.finalize();
    return d;
}

Domain Domain::grid(double cell, const std::vector<std::string>& rows, Point origin) {
    if (!(cell > 0.0)) throw InputError("grid cell size must be positive");
    if (rows.empty()) throw InputError("grid has no rows");
    Domain d;
    d.kind_ = DomainKind::occupancy_grid;
    d.cell_ = cell;
    d.grid_origin_ = origin;
    d.grid_rows_ = static_cast<int>(rows.size());
    d.grid_cols_ = static_cast<int>(rows.front().size());
    d.occupied_.assign(static_cast<std::size_t>(d.grid_rows_) * d.grid_cols_, 0);
    int count = 0;
    for (int r = 0; r < d.grid_rows_; ++r) {
        const std::string& row = rows[d.grid_rows_ - 1 - r];
        if (static_cast<int>(row.size()) != d.grid_cols_) throw InputError("grid rows differ in length");
        for (int c = 0; c < d.grid_cols_; ++c) {
            if (row[c] != '0' && row[c] != '1') throw InputError("grid rows must be bitstrings");
            bool occ = row[c] == '1';
            d.occupied_[static_cast<std::size_t>(r) * d.grid_cols_ + c] = occ;
            count += occ;
        }
    }
    if (count == 0) throw InputError("grid has no occupied cells");
    auto occ = [&](int r, int c) {
        if (r < 0 || c < 0 || r >= d.grid_rows_ || c >= d.grid_cols_) return false;
        return d.occupied_[static_cast<std::size_t>(r) * d.grid_cols_ + c] != 0;
    };
    // Horizontal boundary runs on line y = r, vertical runs on line x = c.
    for (int r = 0; r <= d.grid_rows_; ++r) {
        int start = -1;
        for (int c = 0; c <= d.grid_cols_; ++c) {
            bool edge = c < d.grid_cols_ && occ(r - 1, c) != occ(r, c);
            if (edge && start < 0) start = c;
            if (!edge && start >= 0) {
                d.segments_.push_back({origin + Point{start * cell, r * cell},
                                       origin + Point{c * cell, r * cell}, SegmentKind::outer});
                start = -1;
            }
        }
    }
    for (int c = 0; c <= d.grid_cols_; ++c) {
        int start = -1;
        for (int r = 0; r <= d.grid_rows_; ++r) {
            bool edge = r < d.grid_rows_ && occ(r, c - 1) != occ(r, c);
            if (edge && start < 0) start = r;
            if (!edge && start >= 0) {
                d.segments_.push_back({origin + Point{c * cell, start * cell},
                                       origin + Point{c * cell, r * cell}, SegmentKind::outer});
                start = -1;
            }
        }
    }
    d.area_ = count * cell * cell;
    d.finalize();
    return d;
}

void Domain::finalize() {
    bbox_min_ = {kInf, kInf};
    bbox_max_ = {-kInf, -kInf};
    for (const auto& s : segments_) {
        for (Point p : {s.a, s.b}) {
            bbox_min_ = {std::min(bbox_min_.x, p.x), std::min(bbox_min_.y, p.y)};
            bbox_max_ = {std::max(bbox_max_.x, p.x), std::max(bbox_max_.y, p.y)};
        }
    }
    Point ext = bbox_max_ - bbox_min_;
    box_side_ = std::max(ext.x, ext.y);
    box_origin_ = bbox_min_ - Point{(box_side_ - ext.x) / 2, (box_side_ - ext.y) / 2};
    eps_ = 1e-12 * euclid_norm(ext);
    basepoint_ = 0.5 * (bbox_min_ + bbox_max_);
}

double Domain::boundary_distance(Point p) const {
    double best = kInf;
    for (const auto& s : segments_) best = std::min(best, sup_dist_point_segment(p, s.a, s.b));
    return best;
}

bool Domain::contains(Point p) const {
    if (kind_ == DomainKind::occupancy_grid) {
        double fx = (p.x - grid_origin_.x) / cell_, fy = (p.y - grid_origin_.y) / cell_;
        if (!(fx >= 0 && fy >= 0)) return false;
        int c = static_cast<int>(fx), r = static_cast<int>(fy);
        if (c >= grid_cols_ || r >= grid_rows_) return false;
        if (!occupied_[static_cast<std::size_t>(r) * grid_cols_ + c]) return false;
        return boundary_distance(p) > eps_;
    }
    if (!point_in_ring(p, outer_)) return false;
    for (const auto& h : holes_) {
        if (point_in_ring(p, h)) return false;
    }
    return boundary_distance(p) > eps_;
}

double Domain::dist_to_boundary(Point p) const {
    double d = boundary_distance(p);
    if (d <= eps_) return 0.0;
    if (!contains(p)) throw InputError("outside domain");
    return d;
}

bool Domain::segment_in_domain(Point a, Point b, bool exclude_a) const {
    if (!contains(b)) return false;
    if (!exclude_a && !contains(a)) return false;
    Point d = b - a;
    double dd = dot(d, d);
    if (dd == 0.0) return true;
    double len = std::sqrt(dd);
    double t_tol = exclude_a ? 4 * eps_ / len : -1.0;
    const double tau = 1e-12;
    for (const auto& s : segments_) {
        Point e = s.b - s.a;
        Point w = s.a - a;
        double denom = cross(d, e);
        double scale = len * euclid_norm(e);
        if (std::abs(denom) > 1e-14 * scale) {
            double t = cross(w, e) / denom;
            double u = cross(w, d) / denom;
            if (u >= -tau && u <= 1 + tau && t >= -tau && t <= 1 + tau && t > t_tol) return false;
        } else if (std::abs(cross(w, d)) <= 1e-14 * len * std::max(euclid_norm(w), len)) {
            double t0 = dot(s.a - a, d) / dd, t1 = dot(s.b - a, d) / dd;
            double lo = std::max(std::min(t0, t1), 0.0), hi = std::min(std::max(t0, t1), 1.0);
            if (lo <= hi && hi > t_tol) return false;
        }
    }
    return true;
}

bool Domain::is_Q_visible(const Cube& q, Point x) const {
    auto cs = q.corners();
    std::vector<Point> pts(cs.begin(), cs.end());
    pts.push_back(x);
    std::vector<Point> hull = convex_hull(pts);
    double inflate = 1e-14 * box_side_;
    double tol = 1e-9 * box_side_;
    for (const auto& s : segments_) {
        double t0, t1;
        if (!clip_to_convex(hull, s.a, s.b, inflate, t0, t1)) continue;
        Point p0 = s.a + t0 * (s.b - s.a), p1 = s.a + t1 * (s.b - s.a);
        if (euclid_norm(p0 - x) > tol || euclid_norm(p1 - x) > tol) return false;
    }
    return true;
}

bool Domain::is_Q_visible(const Cube& q, const BoundaryPoint& x) const {
    if (x.face.side != 0 && x.face.segment >= 0) {
        const auto& s = segments_[x.face.segment];
        for (Point c : q.corners()) {
            if (x.face.side * cross(s.b - s.a, c - x.p) <= 0) return false;
        }
    }
    return is_Q_visible(q, x.p);
}

FaceTag Domain::face_at(Point a, Point from) const {
    FaceTag tag;
    double tol = std::max(eps_, 1e-12 * box_side_);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (sup_dist_point_segment(a, s.a, s.b) > tol) continue;
        tag.segment = static_cast<int>(i);
        if (s.kind == SegmentKind::slit && sup_norm(a - s.a) > tol && sup_norm(a - s.b) > tol) {
            double c = cross(s.b - s.a, from - s.a);
            tag.side = (c > 0) - (c < 0);
        }
        break;
    }
    return tag;
}

BoundaryPoint Domain::nearest_boundary_point(const Cube& q) const {
    Point c = q.center;
    std::vector<double> dist(segments_.size());
    double best = kInf;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        dist[i] = sup_dist_point_segment(c, segments_[i].a, segments_[i].b);
        best = std::min(best, dist[i]);
    }
    double tol = 1e-12 * box_side_;
    bool found = false;
    Point best_p;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (dist[i] > best + tol) continue;
        const auto& s = segments_[i];
        Point d = s.b - s.a;
        double m = best + tol;
        double lo = 0.0, hi = 1.0;
        auto restrict = [&](double u0, double du) {
            if (du == 0.0) return;
            double t0 = (-m - u0) / du, t1 = (m - u0) / du;
            lo = std::max(lo, std::min(t0, t1));
            hi = std::min(hi, std::max(t0, t1));
        };
        restrict(s.a.x - c.x, d.x);
        restrict(s.a.y - c.y, d.y);
        if (lo > hi) {
            double t;
            sup_dist_point_segment(c, s.a, s.b, &t);
            lo = hi = t;
        }
        double te = std::clamp(dot(c - s.a, d) / dot(d, d), lo, hi);
        Point p = s.a + te * d;
        if (te == 1.0) p = s.b;
        if (te == 0.0) p = s.a;
        if (!found || euclid_norm(p - c) < euclid_norm(best_p - c) - tol) {
            best_p = p;
            found = true;
        }
    }
    return {best_p, face_at(best_p, c)};
}

Point Domain::validate(int resolution) const {
    const int n = resolution;
    double h = box_side_ / n;
    std::vector<int> label(static_cast<std::size_t>(n) * n, -1);
    std::vector<double> rho(label.size(), 0.0);
    auto center = [&](int i, int j) {
        return box_origin_ + Point{(i + 0.5) * h, (j + 0.5) * h};
    };
    std::size_t inside = 0;
    std::size_t deepest = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Point p = center(i, j);
            if (contains(p)) {
                label[static_cast<std::size_t>(j) * n + i] = 0;
                std::size_t idx = static_cast<std::size_t>(j) * n + i;
                rho[idx] = boundary_distance(p);
                if (inside == 0 || rho[idx] > rho[deepest]) deepest = idx;
                ++inside;
            }
        }
    }
    if (inside == 0) throw InputError("domain is empty at validation resolution");
    int components = 0;
    std::vector<int> stack;
    for (std::size_t start = 0; start < label.size(); ++start) {
        if (label[start] != 0) continue;
        ++components;
        label[start] = components;
        stack.push_back(static_cast<int>(start));
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            int ci = cur % n, cj = cur / n;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int ni = ci + di[k], nj = cj + dj[k];
                if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
                std::size_t nb = static_cast<std::size_t>(nj) * n + ni;
                if (label[nb] != 0) continue;
                if (std::min(rho[cur], rho[nb]) <= h &&
                    !segment_in_domain(center(ci, cj), center(ni, nj))) {
                    continue;
                }
                label[nb] = components;
                stack.push_back(static_cast<int>(nb));
            }
        }
    }
    if (components > 1) throw InputError("domain is not connected");
    return center(static_cast<int>(deepest % n), static_cast<int>(deepest / n));
}

namespace gallery {

namespace {

Domain named(Domain d, std::string name, Point basepoint) {
    d.set_name(std::move(name));
    d.set_basepoint(basepoint);
    return d;
}

std::vector<std::array<Point, 2>> star(Point z, int arms, double len, double start_deg) {
    std::vector<std::array<Point, 2>> out;
    for (int i = 0; i < arms; ++i) {
        double a = (start_deg + 360.0 * i / arms) * M_PI / 180.0;
        out.push_back({z, z + Point{len * std::cos(a), len * std::sin(a)}});
    }
    return out;
}

}  // namespace

Domain unit_square() {
    return named(Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), "unit_square", {0.5, 0.5});
}

Domain slit_square() {
    return named(Domain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, {}, {{Point{-0.5, 0}, Point{0.5, 0}}}),
                 "slit_square", {0, 0.5});
}

Domain comb_domain(int k) {
    if (k < 1 || k > 7) throw InputError("comb_domain needs 1 <= k <= 7");
    const double x0 = 0.125, gap = 1.0 / 16;
    std::vector<double> walls{x0};
    for (int j = 1; j <= k; ++j) {
        int count = 1 << (j - 1);
        double width = std::ldexp(1.0, -2 - j);
        for (int i = 1; i <= count; ++i) walls.push_back(x0 + (j - 1) * 0.125 + i * width);
    }
    std::vector<std::array<Point, 2>> slits;
    for (std::size_t m = 0; m < walls.size(); ++m) {
        double x = walls[m];
        if (m % 2 == 0) {
            slits.push_back({Point{x, gap}, Point{x, 1.0}});
        } else {
            slits.push_back({Point{x, 0.0}, Point{x, 1.0 - gap}});
        }
    }
    return named(Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}, slits),
                 "comb:" + std::to_string(k), {0.0625, 0.5});
}

Domain multi_slit() {
    std::vector<std::array<Point, 2>> slits;
    for (auto s : star({-0.5, 0.5}, 6, 0.45, 15.0)) slits.push_back(s);
    for (auto s : star({0.5, 0.5}, 4, 0.45, 0.0)) slits.push_back(s);
    for (auto s : star({-0.5, -0.5}, 3, 0.45, 90.0)) slits.push_back(s);
    slits.push_back({Point{0.05, -0.5}, Point{0.95, -0.5}});
    return named(Domain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, {}, slits), "multi_slit",
                 {0.0, 0.0});
}

std::vector<std::pair<Point, int>> multi_slit_junctions() {
    return {{{-0.5, 0.5}, 6}, {{0.5, 0.5}, 4}, {{-0.5, -0.5}, 3}, {{0.5, -0.5}, 2}};
}

Domain annulus() {
    return named(Domain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}},
                                 {{{-0.375, -0.375}, {0.375, -0.375}, {0.375, 0.375}, {-0.375, 0.375}}}),
                 "annulus", {0.0, 0.7});
}

Domain outward_cusp(double e) {
    if (!(e > 1.0)) throw InputError("outward_cusp exponent must exceed 1");
    const int n = 40;
    std::vector<Point> lower, upper;
    for (int i = 1; i <= n; ++i) {
        double x = static_cast<double>(i) / n;
        lower.push_back({x, -0.5 * std::pow(x, e)});
    }
    std::vector<Point> outer{{0, 0}};
    outer.insert(outer.end(), lower.begin(), lower.end());
    outer.push_back({2, -0.5});
    outer.push_back({2, 0.5});
    for (auto it = lower.rbegin(); it != lower.rend(); ++it) outer.push_back({it->x, -it->y});
    char buf[32];
    std::snprintf(buf, sizeof buf, "outward_cusp:%g", e);
    return named(Domain::polygon(outer), buf, {1.5, 0.0});
}

std::vector<std::string> names() {
    return {"unit_square", "slit_square", "comb:3", "multi_slit", "annulus", "outward_cusp:2"};
}

Domain by_name(const std::string& name) {
    auto colon = name.find(':');
    std::string base = name.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    auto number = [&](double dflt) {
        if (arg.empty()) return dflt;
        char* end = nullptr;
        double v = std::strtod(arg.c_str(), &end);
        if (end == arg.c_str() || *end != '\0') throw InputError("bad gallery parameter in '" + name + "'");
        return v;
    };
    if (base == "unit_square" && arg.empty()) return unit_square();
    if (base == "slit_square" && arg.empty()) return slit_square();
    if (base == "multi_slit" && arg.empty()) return multi_slit();
    if (base == "annulus" && arg.empty()) return annulus();
    if (base == "comb" || base == "comb_domain") {
        double k = number(3);
        if (k != std::floor(k)) throw InputError("comb teeth must be an integer");
        return comb_domain(static_cast<int>(k));
    }
    if (base == "outward_cusp" || base == "cusp") return outward_cusp(number(2.0));
    throw InputError("unknown gallery domain '" + name + "'");
}

}  // namespace gallery

}  // namespace subhyp
