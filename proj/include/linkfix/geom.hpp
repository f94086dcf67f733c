#ifndef LINKFIX_GEOM_HPP
#define LINKFIX_GEOM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "linkfix/errors.hpp"
#include "linkfix/util.hpp"

namespace linkfix {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Left-hand (counterclockwise) normal.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2 operator+(Vec2 v) const { return {x + v.x, y + v.y}; }
    Point2 operator-(Vec2 v) const { return {x - v.x, y - v.y}; }
    Vec2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }

    bool operator==(const Point2&) const = default;
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

inline bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }
inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

inline Point2 lerp(Point2 a, Point2 b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

/// Oriented segment from a to b. Zero length is not a valid segment.
struct Segment {
    Point2 a;
    Point2 b;

    Vec2 dir() const { return b - a; }
    double length() const { return dir().norm(); }
};

inline double point_segment_distance(Point2 p, const Segment& s) {
    Vec2 d = s.dir();
    double len2 = d.norm2();
    if (len2 == 0.0) return distance(p, s.a);
    double t = dot(p - s.a, d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, lerp(s.a, s.b, t));
}

struct BoundingBox {
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void expand(Point2 p) {
        xmin = std::min(xmin, p.x);
        ymin = std::min(ymin, p.y);
        xmax = std::max(xmax, p.x);
        ymax = std::max(ymax, p.y);
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diagonal() const { return std::hypot(width(), height()); }
    Point2 center() const { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }
};

inline BoundingBox bounding_box(const std::vector<Point2>& pts) {
    BoundingBox box;
    for (Point2 p : pts) box.expand(p);
    return box;
}

/// Closed polygonal chain: the last vertex connects back to the first.
/// Orientation is the traversal order. Two vertices are allowed only as a
/// transient state; the arrangement layer rejects such chains.
struct ClosedChain {
    std::vector<Point2> vertices;

    ClosedChain() = default;
    explicit ClosedChain(std::vector<Point2> vs) : vertices(std::move(vs)) {
        if (vertices.size() < 2)
            throw DomainError("closed chain needs at least 2 vertices");
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (!finite(vertices[i]))
                throw DomainError("closed chain vertex is not finite");
            if (vertices[i] == vertices[(i + 1) % vertices.size()])
                throw DomainError("closed chain has coincident consecutive vertices");
        }
    }

    std::size_t size() const { return vertices.size(); }

    Segment edge(std::size_t i) const {
        return {vertices[i], vertices[(i + 1) % vertices.size()]};
    }

    /// Bounding-box diagonal; used as the scale for relative tolerances.
    double diameter() const { return bounding_box(vertices).diagonal(); }

    ClosedChain reversed() const {
        std::vector<Point2> vs(vertices.rbegin(), vertices.rend());
        return ClosedChain(std::move(vs));
    }

    std::uint64_t hash() const {
        std::uint64_t h = kFnvOffset;
        for (Point2 p : vertices) {
            h = hash_combine(h, p.x);
            h = hash_combine(h, p.y);
        }
        return h;
    }
};

inline double min_distance_to_chain(Point2 p, const ClosedChain& chain) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < chain.size(); ++i)
        best = std::min(best, point_segment_distance(p, chain.edge(i)));
    return best;
}

inline double signed_area(const std::vector<Point2>& poly) {
    double sum = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Point2 a = poly[i];
        Point2 b = poly[(i + 1) % poly.size()];
        sum += a.x * b.y - b.x * a.y;
    }
    return sum / 2.0;
}

// ---------------------------------------------------------------------------
// Exact orientation predicate.
//
// Error-bound filter first, exact expansion arithmetic as fallback, after
// "Adaptive Precision Floating-Point Arithmetic and Fast Robust Geometric
// Predicates" (J. R. Shewchuk, Discrete Comput. Geom. 18, 1997). Expansions
// are arrays of doubles sorted by increasing magnitude whose components sum
// to the represented value without overlap.
// ---------------------------------------------------------------------------

namespace detail {

struct Exp2 {
    double lo;
    double hi;
};

inline Exp2 two_sum(double a, double b) {
    double x = a + b;
    double bv = x - a;
    double av = x - bv;
    double br = b - bv;
    double ar = a - av;
    return {ar + br, x};
}

inline Exp2 two_diff(double a, double b) {
    double x = a - b;
    double bv = a - x;
    double av = x + bv;
    double br = bv - b;
    double ar = a - av;
    return {ar + br, x};
}

inline Exp2 two_product(double a, double b) {
    double x = a * b;
    return {std::fma(a, b, -x), x};
}

/// Merge two expansions (ascending magnitude) into h, dropping zeros.
/// Returns the number of components written; h must hold en + fn doubles.
inline int expansion_sum_zeroelim(const double* e, int en, const double* f, int fn,
                                  double* h) {
    int ei = 0, fi = 0, hn = 0;
    double q;
    auto e_smaller = [&]() {
        // pick the component with smaller magnitude next
        return (fi >= fn) || (ei < en && std::abs(e[ei]) <= std::abs(f[fi]));
    };
    if (e_smaller()) q = e[ei++]; else q = f[fi++];
    while (ei < en || fi < fn) {
        double next = e_smaller() ? e[ei++] : f[fi++];
        Exp2 s = two_sum(q, next);
        if (s.lo != 0.0) h[hn++] = s.lo;
        q = s.hi;
    }
    if (q != 0.0 || hn == 0) h[hn++] = q;
    return hn;
}

/// Product of two 2-component expansions; writes at most 8 components.
inline int expansion_product(Exp2 a, Exp2 b, double* h) {
    Exp2 p1 = two_product(a.lo, b.lo);
    Exp2 p2 = two_product(a.lo, b.hi);
    Exp2 p3 = two_product(a.hi, b.lo);
    Exp2 p4 = two_product(a.hi, b.hi);
    double e1[2] = {p1.lo, p1.hi};
    double e2[2] = {p2.lo, p2.hi};
    double e3[2] = {p3.lo, p3.hi};
    double e4[2] = {p4.lo, p4.hi};
    double s12[4], s34[4];
    int n12 = expansion_sum_zeroelim(e1, 2, e2, 2, s12);
    int n34 = expansion_sum_zeroelim(e3, 2, e4, 2, s34);
    return expansion_sum_zeroelim(s12, n12, s34, n34, h);
}

inline int orient_exact(Point2 a, Point2 b, Point2 c) {
    Exp2 acx = two_diff(a.x, c.x);
    Exp2 bcy = two_diff(b.y, c.y);
    Exp2 acy = two_diff(a.y, c.y);
    Exp2 bcx = two_diff(b.x, c.x);
    double p[8], q[8], d[16];
    int pn = expansion_product(acx, bcy, p);
    int qn = expansion_product(acy, bcx, q);
    for (int i = 0; i < qn; ++i) q[i] = -q[i];
    int dn = expansion_sum_zeroelim(p, pn, q, qn, d);
    return sign_of(d[dn - 1]);
}

// (3 + 16 eps) * eps with eps = 2^-53: filter bound for the fast path.
constexpr double kOrientErrBound = 3.3306690738754716e-16;

} // namespace detail

/// Sign of twice the signed area of triangle (a, b, c): +1 counterclockwise,
/// -1 clockwise, 0 exactly collinear. The fast floating-point evaluation is
/// kept whenever its error bound certifies the sign; otherwise the sign is
/// decided in exact arithmetic. Never wrong.
inline int orient(Point2 a, Point2 b, Point2 c) {
    double detl = (a.x - c.x) * (b.y - c.y);
    double detr = (a.y - c.y) * (b.x - c.x);
    double det = detl - detr;
    if (detl > 0.0) {
        if (detr <= 0.0) return 1;
    } else if (detl < 0.0) {
        if (detr >= 0.0) return -1;
    } else {
        return sign_of(-detr);
    }
    double magnitude = std::abs(detl) + std::abs(detr);
    if (std::abs(det) >= detail::kOrientErrBound * magnitude) return sign_of(det);
    return detail::orient_exact(a, b, c);
}

// ---------------------------------------------------------------------------
// Segment intersection
// ---------------------------------------------------------------------------

enum class IntersectKind { none, point, overlap };

struct SegmentIntersection {
    IntersectKind kind = IntersectKind::none;
    Point2 p;                    // point case
    double t1 = 0.0, t2 = 0.0;   // parameters on s1 / s2 for the point case
    Segment overlap_part{};      // overlap case, oriented along s1

    static SegmentIntersection none() { return {}; }
    static SegmentIntersection at(Point2 p, double t1, double t2) {
        SegmentIntersection r;
        r.kind = IntersectKind::point;
        r.p = p;
        r.t1 = t1;
        r.t2 = t2;
        return r;
    }
    static SegmentIntersection over(Segment s) {
        SegmentIntersection r;
        r.kind = IntersectKind::overlap;
        r.overlap_part = s;
        return r;
    }
};

namespace detail {

/// Parameter of collinear point q on segment [a, b], measured on the
/// dominant axis so the division is well conditioned.
inline double collinear_param(Point2 a, Point2 b, Point2 q) {
    if (q == a) return 0.0;
    if (q == b) return 1.0;
    if (std::abs(b.x - a.x) >= std::abs(b.y - a.y))
        return (q.x - a.x) / (b.x - a.x);
    return (q.y - a.y) / (b.y - a.y);
}

} // namespace detail

/// Exhaustive classification of how two segments meet. Branch decisions
/// (crossing / touching / collinear) are made with the exact orient
/// predicate; coordinates of interior crossing points are computed in
/// floating point.
inline SegmentIntersection seg_intersect(const Segment& s1, const Segment& s2) {
    if (s1.a == s1.b || s2.a == s2.b)
        throw DomainError("seg_intersect: zero-length segment");

    int o1 = orient(s1.a, s1.b, s2.a);
    int o2 = orient(s1.a, s1.b, s2.b);
    int o3 = orient(s2.a, s2.b, s1.a);
    int o4 = orient(s2.a, s2.b, s1.b);

    if (o1 == 0 && o2 == 0) {
        // collinear: intersect parameter intervals on s1
        double ta = detail::collinear_param(s1.a, s1.b, s2.a);
        double tb = detail::collinear_param(s1.a, s1.b, s2.b);
        double lo = std::min(ta, tb), hi = std::max(ta, tb);
        double beg = std::max(0.0, lo), end = std::min(1.0, hi);
        if (beg > end) return SegmentIntersection::none();
        auto point_at = [&](double t) -> Point2 {
            if (t == 0.0) return s1.a;
            if (t == 1.0) return s1.b;
            if (t == ta) return s2.a;
            if (t == tb) return s2.b;
            return lerp(s1.a, s1.b, t);
        };
        if (beg == end) {
            Point2 p = point_at(beg);
            return SegmentIntersection::at(p, beg, detail::collinear_param(s2.a, s2.b, p));
        }
        return SegmentIntersection::over({point_at(beg), point_at(end)});
    }

    // endpoint-on-segment contacts: with exactly one zero sign, the only
    // candidate shared point is the vertex sitting on the other line
    if (o1 == 0) {
        double t = detail::collinear_param(s1.a, s1.b, s2.a);
        if (t >= 0.0 && t <= 1.0) return SegmentIntersection::at(s2.a, t, 0.0);
        return SegmentIntersection::none();
    }
    if (o2 == 0) {
        double t = detail::collinear_param(s1.a, s1.b, s2.b);
        if (t >= 0.0 && t <= 1.0) return SegmentIntersection::at(s2.b, t, 1.0);
        return SegmentIntersection::none();
    }
    if (o3 == 0) {
        double u = detail::collinear_param(s2.a, s2.b, s1.a);
        if (u >= 0.0 && u <= 1.0) return SegmentIntersection::at(s1.a, 0.0, u);
        return SegmentIntersection::none();
    }
    if (o4 == 0) {
        double u = detail::collinear_param(s2.a, s2.b, s1.b);
        if (u >= 0.0 && u <= 1.0) return SegmentIntersection::at(s1.b, 1.0, u);
        return SegmentIntersection::none();
    }

    if (o1 != o2 && o3 != o4) {
        Vec2 d1 = s1.dir(), d2 = s2.dir();
        double denom = cross(d1, d2);
        Vec2 w = s2.a - s1.a;
        double t1 = cross(w, d2) / denom;
        double t2 = cross(w, d1) / denom;
        t1 = std::clamp(t1, 0.0, 1.0);
        t2 = std::clamp(t2, 0.0, 1.0);
        return SegmentIntersection::at(lerp(s1.a, s1.b, t1), t1, t2);
    }
    return SegmentIntersection::none();
}

// ---------------------------------------------------------------------------
// Angles and winding numbers
// ---------------------------------------------------------------------------

/// Unoriented angle between two nonzero vectors, in [0, pi].
inline double angle_between(Vec2 u, Vec2 v) {
    double nu = u.norm(), nv = v.norm();
    if (nu == 0.0 || nv == 0.0)
        throw DomainError("angle_between: zero vector");
    double c = dot(u, v) / (nu * nv);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Signed angle from u to v, in (-pi, pi].
inline double signed_angle(Vec2 u, Vec2 v) {
    return std::atan2(cross(u, v), dot(u, v));
}

/// Signed count of chain crossings of the ray from p in direction `ray`.
/// Equals the winding number of the chain around p when the ray is generic.
/// Throws NonGenericRayError when the ray passes too close to a vertex or is
/// near-parallel to a segment it crosses; callers retry with another ray.
inline int winding_ray(const ClosedChain& chain, Point2 p, Vec2 ray) {
    double diam = chain.diameter();
    if (diam == 0.0) throw DomainError("winding_ray: degenerate chain");
    double eps_on = 1e-12 * diam;
    double eps_ray = 1e-9 * diam;
    double rnorm = ray.norm();
    if (rnorm == 0.0) throw DomainError("winding_ray: zero ray direction");

    if (min_distance_to_chain(p, chain) <= eps_on)
        throw DomainError("winding_ray: point lies on the chain");

    for (Point2 v : chain.vertices) {
        Vec2 w = v - p;
        if (dot(w, ray) > 0.0 && std::abs(cross(ray, w)) / rnorm < eps_ray)
            throw NonGenericRayError("ray passes near a chain vertex");
    }

    int total = 0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        Segment s = chain.edge(i);
        double ca = cross(ray, s.a - p);
        double cb = cross(ray, s.b - p);
        if ((ca > 0.0 && cb < 0.0) || (ca < 0.0 && cb > 0.0)) {
            Vec2 e = s.dir();
            double denom = cross(ray, e);
            if (std::abs(denom) < 1e-9 * rnorm * e.norm())
                throw NonGenericRayError("ray nearly parallel to a crossed segment");
            double sray = cross(s.a - p, e) / denom;
            if (sray > 0.0) total += sign_of(denom);
        }
    }
    return total;
}

/// Winding number via ray crossing with deterministic retry over a
/// pseudo-random angle sequence seeded from (chain, p).
inline int winding_via_ray(const ClosedChain& chain, Point2 p, int max_attempts = 64) {
    std::uint64_t seed = chain.hash();
    seed = hash_combine(seed, p.x);
    seed = hash_combine(seed, p.y);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        double angle = 2.0 * 3.14159265358979323846 * uniform01(seed);
        try {
            return winding_ray(chain, p, {std::cos(angle), std::sin(angle)});
        } catch (const NonGenericRayError&) {
            // try the next angle in the sequence
        }
    }
    throw NonGenericRayError("no generic ray found after retries");
}

/// Winding number via accumulated turn of the vertex directions around p.
/// Requires clearance from the chain (default 1e-9 x chain diameter) and a
/// near-integer total; both violations signal the chain passing too close.
inline int winding_anglesum(const ClosedChain& chain, Point2 p, double eps_clear = -1.0) {
    double diam = chain.diameter();
    if (diam == 0.0) throw DomainError("winding_anglesum: degenerate chain");
    if (eps_clear < 0.0) eps_clear = 1e-9 * diam;
    if (min_distance_to_chain(p, chain) < eps_clear)
        throw ClearanceError("winding_anglesum: point too close to chain");

    double total = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        Vec2 u = chain.vertices[i] - p;
        Vec2 v = chain.vertices[(i + 1) % chain.size()] - p;
        total += signed_angle(u, v);
    }
    double w = total / (2.0 * 3.14159265358979323846);
    double rounded = std::round(w);
    if (std::abs(w - rounded) > 1e-6)
        throw ClearanceError("winding_anglesum: non-integer accumulation");
    return static_cast<int>(rounded);
}

} // namespace linkfix

#endif
