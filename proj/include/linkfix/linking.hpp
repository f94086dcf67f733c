#ifndef LINKFIX_LINKING_HPP
#define LINKFIX_LINKING_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "linkfix/arrangement.hpp"
#include "linkfix/dynmap.hpp"
#include "linkfix/geom.hpp"

namespace linkfix {

/// Polyline arc from x to f(x); the loop builder concatenates its n images
/// under the map iterates into a closed curve.
struct ArcChain {
    std::vector<Point2> vertices;

    static ArcChain straight(Point2 a, Point2 b) { return make({a, b}); }

    static ArcChain make(std::vector<Point2> vs) {
        if (vs.size() < 2) throw DomainError("arc needs at least 2 vertices");
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
            if (!finite(vs[i])) throw DomainError("arc vertex not finite");
            if (vs[i] == vs[i + 1]) throw DomainError("arc has coincident consecutive vertices");
        }
        return ArcChain{std::move(vs)};
    }

    Point2 front() const { return vertices.front(); }
    Point2 back() const { return vertices.back(); }
};

/// Polygonal approximation of the closed curve that concatenates the arc
/// with its images under f, f^2, ..., f^{n-1}. Every consecutive gap is
/// certified smaller than a quarter of the local clearance from the marked
/// point, so the approximation winds around that point exactly like the
/// true curve.
struct LoopChain {
    ClosedChain chain;
    double max_gap = 0.0;
    double min_clearance = 0.0;
    std::size_t refined_points = 0;
};

struct LoopOptions {
    double eps_clear_rel = 1e-6;   // x orbit diameter: minimum clearance from x0
    std::size_t max_points = 2000000;
};

/// Integer winding of a closed loop around x0 together with its residue
/// mod n, normalized into {0, ..., n-1}.
struct LinkingResult {
    int omega = 0;
    int n = 0;
    int lk = 0;
    std::string source;  // "gamma" or "straight_arc"
};

enum class LoopRoute { straight_arc, gamma };

namespace detail {

/// Arc-length parameterization of a polyline.
struct ArcParam {
    std::vector<Point2> pts;
    std::vector<double> cum;  // cumulative length, cum[0] = 0

    explicit ArcParam(const std::vector<Point2>& vs) : pts(vs), cum(vs.size(), 0.0) {
        for (std::size_t i = 1; i < vs.size(); ++i)
            cum[i] = cum[i - 1] + distance(vs[i - 1], vs[i]);
    }

    double length() const { return cum.back(); }

    Point2 at(double t) const {
        if (t <= 0.0) return pts.front();
        if (t >= cum.back()) return pts.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), t);
        std::size_t i = static_cast<std::size_t>(it - cum.begin());
        double seg = cum[i] - cum[i - 1];
        double u = seg > 0.0 ? (t - cum[i - 1]) / seg : 0.0;
        return lerp(pts[i - 1], pts[i], u);
    }
};

} // namespace detail

/// Approximates the closed curve c . f(c) . ... . f^{n-1}(c) by adaptive
/// refinement. A parameter piece of the k-th image arc is accepted once its
/// certified diameter (piece length times an analytic bound on Lip(f)^k)
/// drops below a quarter of its endpoints' distance from x0; pieces far
/// from x0 stay coarse, pieces near it refine until certified. Endpoints of
/// consecutive image arcs are pinned to the orbit points exactly.
inline LoopChain build_loop(const MapSpec& map, const PeriodicOrbit& orbit,
                            const ArcChain& arc, Point2 x0, const LoopOptions& opt = {}) {
    const int n = orbit.period();
    const double diam = orbit.diameter();
    const double eps_clear = opt.eps_clear_rel * diam;
    const double endpoint_tol = 1e-9 * diam;

    if (distance(arc.front(), orbit.points[0]) > endpoint_tol ||
        distance(arc.back(), orbit.points[1]) > endpoint_tol)
        throw DomainError("arc must join the first two orbit points");

    const detail::ArcParam param(arc.vertices);
    const double arc_len = param.length();
    if (!(arc_len > 0.0)) throw DomainError("arc has zero length");

    // analytic stretch bound for each iterate
    const double lip_f = map.map_lip_bound();
    std::vector<double> stretch(n, 1.0);
    for (int m = 1; m < n; ++m) stretch[m] = stretch[m - 1] * lip_f;

    // iterate cache: parameter -> [c(t), f(c(t)), ..., f^m(c(t))]
    std::map<double, std::vector<Point2>> cache;
    auto image_at = [&](double t, int m) -> Point2 {
        auto& chain_pts = cache[t];
        if (chain_pts.empty()) chain_pts.push_back(param.at(t));
        while (static_cast<int>(chain_pts.size()) <= m)
            chain_pts.push_back(map.eval(chain_pts.back()));
        return chain_pts[static_cast<std::size_t>(m)];
    };

    auto clearance_of = [&](Point2 p) { return distance(p, x0); };

    LoopChain loop;
    loop.min_clearance = std::numeric_limits<double>::infinity();
    std::vector<Point2> vertices;

    for (int m = 0; m < n; ++m) {
        // accepted breakpoints for this image arc, seeded with the arc's own
        // vertices; intervals pop left to right so `accepted` stays sorted
        std::vector<double> breaks = param.cum;
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

        std::vector<double> accepted{breaks.front()};
        std::vector<std::pair<double, double>> stack;
        for (std::size_t i = breaks.size() - 1; i >= 1; --i)
            stack.push_back({breaks[i - 1], breaks[i]});

        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            Point2 pa = image_at(a, m);
            Point2 pb = image_at(b, m);
            double ra = clearance_of(pa), rb = clearance_of(pb);
            if (ra < eps_clear || rb < eps_clear)
                throw ClearanceError("arc image passes too close to the marked fixed point");
            double certified = stretch[m] * (b - a);
            if (certified <= std::min(ra, rb) / 4.0) {
                accepted.push_back(b);
                loop.max_gap = std::max(loop.max_gap, distance(pa, pb));
                continue;
            }
            if (cache.size() > opt.max_points)
                throw ClearanceError("loop refinement exceeded the point budget");
            double mid = (a + b) / 2.0;
            if (!(mid > a && mid < b))
                throw ClearanceError("loop refinement cannot achieve clearance from x0");
            stack.push_back({mid, b});
            stack.push_back({a, mid});
        }

        // emit this arc's vertices, endpoints pinned to the orbit points
        std::vector<Point2> piece;
        piece.push_back(orbit.points[static_cast<std::size_t>(m)]);
        for (std::size_t i = 1; i + 1 < accepted.size(); ++i)
            piece.push_back(image_at(accepted[i], m));
        piece.push_back(orbit.points[static_cast<std::size_t>((m + 1) % n)]);

        for (Point2 p : piece) loop.min_clearance = std::min(loop.min_clearance, clearance_of(p));
        std::size_t start = vertices.empty() ? 0 : 1;  // junction vertex already present
        for (std::size_t i = start; i < piece.size(); ++i) {
            if (!vertices.empty() && vertices.back() == piece[i]) continue;
            vertices.push_back(piece[i]);
        }
    }

    if (vertices.size() > 1 && vertices.back() == vertices.front()) vertices.pop_back();
    loop.refined_points = cache.size();
    loop.chain = ClosedChain(vertices);
    return loop;
}

namespace detail {

/// Douglas-Peucker simplification of an open polyline, keeping every point
/// within eps of the output.
inline void dp_simplify_rec(const std::vector<Point2>& pts, std::size_t lo, std::size_t hi,
                            double eps, std::vector<char>& keep) {
    if (hi <= lo + 1) return;
    Segment s{pts[lo], pts[hi]};
    double worst = -1.0;
    std::size_t wi = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        double d = pts[lo] == pts[hi] ? distance(pts[i], pts[lo])
                                      : point_segment_distance(pts[i], s);
        if (d > worst) {
            worst = d;
            wi = i;
        }
    }
    if (worst <= eps) return;
    keep[wi] = 1;
    dp_simplify_rec(pts, lo, wi, eps, keep);
    dp_simplify_rec(pts, wi, hi, eps, keep);
}

inline std::vector<Point2> decimate_loop(const std::vector<Point2>& pts, double eps) {
    if (pts.size() <= 4) return pts;
    // split the closed chain at vertex 0 and its farthest vertex
    std::size_t far = 1;
    double best = -1.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double d = distance(pts[0], pts[i]);
        if (d > best) {
            best = d;
            far = i;
        }
    }
    std::vector<char> keep(pts.size(), 0);
    keep[0] = keep[far] = 1;
    dp_simplify_rec(pts, 0, far, eps, keep);
    std::vector<Point2> closed = pts;
    closed.push_back(pts[0]);
    std::vector<char> keep2(closed.size(), 0);
    dp_simplify_rec(closed, far, closed.size() - 1, eps, keep2);
    std::vector<Point2> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (keep[i] || keep2[i]) out.push_back(pts[i]);
    if (out.size() < 3) return pts;
    return out;
}

} // namespace detail

/// Winding of a refined loop around x0: angle accumulation as the primary
/// route, generic-ray crossing on a decimated copy as the independent
/// cross-check. The decimation tolerance stays below half the loop's
/// clearance so it cannot change the winding.
inline int loop_winding(const LoopChain& loop, Point2 x0) {
    int w = winding_anglesum(loop.chain, x0, loop.min_clearance / 2.0);
    std::vector<Point2> dec = detail::decimate_loop(loop.chain.vertices, loop.min_clearance / 4.0);
    int w_ray = winding_via_ray(ClosedChain(dec), x0);
    if (w_ray != w)
        throw InternalError("loop winding cross-check failed (angle sum vs ray crossing)");
    return w;
}

inline int normalize_mod(int omega, int n) { return ((omega % n) + n) % n; }

/// Linking number of a fixed point with the periodic orbit, computed either
/// through the orbit polygon or through the iterated straight arc.
inline LinkingResult linking_number(Point2 x0, const PeriodicOrbit& orbit, const MapSpec& map,
                                    LoopRoute route, const LoopOptions& opt = {}) {
    const int n = orbit.period();
    if (map.displacement(x0).norm() > orbit.eps_orbit * 100.0 + 1e-12 * orbit.diameter())
        throw DomainError("linking_number: x0 is not a fixed point of the map");

    LinkingResult res;
    res.n = n;
    if (route == LoopRoute::gamma) {
        OrbitPolygon gamma = OrbitPolygon::from_points(orbit.points);
        ClosedChain chain = gamma.chain();
        double eps = opt.eps_clear_rel * orbit.diameter();
        if (min_distance_to_chain(x0, chain) < eps)
            throw ClearanceError("linking_number: x0 lies on or near the orbit polygon");
        res.omega = winding_anglesum(chain, x0, eps);
        int w_ray = winding_via_ray(chain, x0);
        if (w_ray != res.omega)
            throw InternalError("orbit polygon winding cross-check failed");
        res.source = "gamma";
    } else {
        ArcChain c = ArcChain::straight(orbit.points[0], orbit.points[1]);
        LoopChain loop = build_loop(map, orbit, c, x0, opt);
        res.omega = loop_winding(loop, x0);
        res.source = "straight_arc";
    }
    res.lk = normalize_mod(res.omega, n);
    return res;
}

struct ArcIndependenceReport {
    int omega1 = 0;
    int omega2 = 0;
    int connecting_winding = 0;  // winding of reversed(c1) . c2 around x0
    bool difference_in_nZ = false;
    bool difference_matches = false;
    bool pass = false;
};

/// Checks that two arcs joining x and f(x) produce loop windings that
/// differ by a multiple of n, and that the difference equals n times the
/// winding of the closed curve reversed(c1) . c2 around x0.
inline ArcIndependenceReport arc_independence_check(const MapSpec& map,
                                                    const PeriodicOrbit& orbit,
                                                    const ArcChain& c1, const ArcChain& c2,
                                                    Point2 x0, const LoopOptions& opt = {}) {
    const int n = orbit.period();
    LoopChain l1 = build_loop(map, orbit, c1, x0, opt);
    LoopChain l2 = build_loop(map, orbit, c2, x0, opt);

    ArcIndependenceReport rep;
    rep.omega1 = loop_winding(l1, x0);
    rep.omega2 = loop_winding(l2, x0);

    // closed curve reversed(c1) . c2, duplicate junction vertices dropped
    std::vector<Point2> conn(c1.vertices.rbegin(), c1.vertices.rend());
    for (std::size_t i = 0; i < c2.vertices.size(); ++i) {
        if (!conn.empty() && conn.back() == c2.vertices[i]) continue;
        conn.push_back(c2.vertices[i]);
    }
    while (conn.size() > 1 && conn.back() == conn.front()) conn.pop_back();
    int w;
    if (conn.size() < 3) {
        w = 0;  // c2 retraces c1 exactly
    } else {
        double eps = opt.eps_clear_rel * orbit.diameter();
        w = winding_anglesum(ClosedChain(conn), x0, eps);
    }
    rep.connecting_winding = w;
    rep.difference_in_nZ = (rep.omega2 - rep.omega1) % n == 0;
    rep.difference_matches = rep.omega2 - rep.omega1 == n * w;
    rep.pass = rep.difference_in_nZ && rep.difference_matches;
    return rep;
}

} // namespace linkfix

#endif
