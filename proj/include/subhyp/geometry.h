#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace subhyp {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
inline double sup_norm(Point a) { return std::max(std::abs(a.x), std::abs(a.y)); }
inline double euclid_norm(Point a) { return std::hypot(a.x, a.y); }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline bool lex_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

/// Sup-norm ball Q(center, radius); diam = 2 * radius.
struct Cube {
    Point center;
    double radius = 0.0;

    double diam() const { return 2.0 * radius; }
    Cube dilate(double lambda) const { return {center, lambda * radius}; }
    bool contains(Point p) const { return sup_norm(p - center) <= radius; }
    std::array<Point, 4> corners() const;
};

/// Identifies a boundary segment and, for slits, the side a point is approached from.
/// side is +1 (left of a->b), -1 (right), or 0 (one-sided edge or slit endpoint).
struct FaceTag {
    int segment = -1;
    int side = 0;

    std::string str() const;
    bool operator==(const FaceTag& o) const { return segment == o.segment && side == o.side; }
};

enum class SegmentKind { outer, hole, slit };

struct BoundarySegment {
    Point a;
    Point b;
    SegmentKind kind = SegmentKind::outer;
};

struct BoundaryPoint {
    Point p;
    FaceTag face;
};

/// Minimum over t in [0,1] of ||p - (a + t(b-a))||_inf; writes the minimizing t.
double sup_dist_point_segment(Point p, Point a, Point b, double* t_out = nullptr);

/// Closed-segment intersection test; collinear overlaps count.
bool segments_intersect(Point p1, Point p2, Point q1, Point q2);

enum class DomainKind { polygon, occupancy_grid };

/// Planar open region: polygon with holes and slits, or a union of grid cells.
/// All distances are sup-norm. Immutable after construction.
class Domain {
public:
    static Domain polygon(std::vector<Point> outer,
                          std::vector<std::vector<Point>> holes = {},
                          std::vector<std::array<Point, 2>> slits = {});
    /// rows[0] is the top row; '1' marks an occupied cell of side `cell`.
    static Domain grid(double cell, const std::vector<std::string>& rows, Point origin = {});

    DomainKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }
    const std::vector<BoundarySegment>& segments() const { return segments_; }

    /// Lower-left corner and side of the square dyadic root box.
    Point box_origin() const { return box_origin_; }
    double box_side() const { return box_side_; }
    Point bbox_min() const { return bbox_min_; }
    Point bbox_max() const { return bbox_max_; }
    double tolerance_eps() const { return eps_; }

    double area() const { return area_; }
    Point basepoint() const { return basepoint_; }
    void set_basepoint(Point p) { basepoint_ = p; }

    /// Membership in the open set.
    bool contains(Point p) const;
    /// Min over boundary segments of the sup-norm distance, no membership check.
    double boundary_distance(Point p) const;
    /// Sup-norm distance to the boundary; throws InputError outside the closure.
    double dist_to_boundary(Point p) const;
    bool on_boundary(Point p) const { return boundary_distance(p) <= eps_; }

    /// (a,b] in the domain when exclude_a, else [a,b].
    bool segment_in_domain(Point a, Point b, bool exclude_a = false) const;
    /// Conv(q + {x}) minus {x} inside the domain. A slit face restricts x to one side.
    bool is_Q_visible(const Cube& q, Point x) const;
    bool is_Q_visible(const Cube& q, const BoundaryPoint& x) const;

    /// Nearest boundary point to a cube: sup-norm minimizers, Euclidean-closest to
    /// the center within a face, lowest face index, then lexicographic.
    BoundaryPoint nearest_boundary_point(const Cube& q) const;
    /// Face tag of boundary point a when approached from `from`.
    FaceTag face_at(Point a, Point from) const;

    /// Flood fill on a fine grid; throws InputError if the region is disconnected or empty.
    /// Returns the sample point farthest from the boundary.
    Point validate(int resolution = 512) const;

private:
    void finalize();

    DomainKind kind_ = DomainKind::polygon;
    std::string name_ = "custom";
    std::vector<BoundarySegment> segments_;
    std::vector<Point> outer_;
    std::vector<std::vector<Point>> holes_;
    double cell_ = 0.0;
    Point grid_origin_;
    int grid_cols_ = 0;
    int grid_rows_ = 0;
    std::vector<unsigned char> occupied_;  // row-major, row 0 at the bottom

    Point bbox_min_, bbox_max_, box_origin_;
    double box_side_ = 0.0;
    double eps_ = 0.0;
    double area_ = 0.0;
    Point basepoint_;
};

namespace gallery {

Domain unit_square();
/// (-1,1)^2 minus the slit [(-1/2,0),(1/2,0)].
Domain slit_square();
/// Chambers separated by slit walls; tooth j holds 2^(j-1) corridors of width 2^(-2-j).
Domain comb_domain(int k_teeth);
/// Slit stars meeting at (-1/2,1/2) x6, (1/2,1/2) x4, (-1/2,-1/2) x3 and a plain slit at (1/2,-1/2).
Domain multi_slit();
/// (-1,1)^2 minus the closed square [-3/8,3/8]^2.
Domain annulus();
/// Square body with a spike {0 < x < 1, |y| < x^e / 2} pointing outward.
Domain outward_cusp(double exponent = 2.0);

/// Names accepted by by_name: unit_square, slit_square, comb[:k], multi_slit, annulus,
/// outward_cusp[:e].
std::vector<std::string> names();
Domain by_name(const std::string& name);

/// The designated samples of multi_slit and their hand-counted element numbers.
std::vector<std::pair<Point, int>> multi_slit_junctions();

}  // namespace gallery

}  // namespace subhyp
