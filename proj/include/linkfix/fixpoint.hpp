#ifndef LINKFIX_FIXPOINT_HPP
#define LINKFIX_FIXPOINT_HPP

#include <array>
#include <cmath>
#include <vector>

#include "linkfix/arrangement.hpp"
#include "linkfix/index.hpp"

namespace linkfix {

/// Isolated fixed point: the center of the final bisection box, with the
/// displacement magnitude there, the box half-diagonal, and the topological
/// degree of the displacement field on the enclosing contour.
struct FixedPointResult {
    Point2 location;
    double residual = 0.0;
    double box_radius = 0.0;
    int degree = 0;
    bool multiple_zero_regions = false;  // another sub-box also had nonzero degree
    int subdivisions = 0;
};

struct SubdivisionRecord {
    int parent_degree = 0;
    std::array<int, 4> child_degrees{0, 0, 0, 0};
};

inline double residual(const MapSpec& map, Point2 p) {
    return map.displacement(p).norm();
}

/// Winding of the displacement field along an arbitrary closed loop: the
/// topological degree of f - Id on the enclosed region. Nonzero degree
/// certifies a fixed point inside.
inline int displacement_winding(const MapSpec& map, const std::vector<Point2>& loop,
                                const LipschitzCertificate& cert,
                                const WindingWalkOptions& opt = {}) {
    return num_index(map, loop, cert, opt);
}

inline int displacement_winding(const MapSpec& map, const ClosedChain& loop,
                                const LipschitzCertificate& cert,
                                const WindingWalkOptions& opt = {}) {
    return num_index(map, loop.vertices, cert, opt);
}

namespace detail {

struct ClipRect {
    double xlo, ylo, xhi, yhi;

    Point2 center() const { return {(xlo + xhi) / 2, (ylo + yhi) / 2}; }
    double diagonal() const { return std::hypot(xhi - xlo, yhi - ylo); }
    double area() const { return (xhi - xlo) * (yhi - ylo); }
    std::vector<Point2> corners() const {
        return {{xlo, ylo}, {xhi, ylo}, {xhi, yhi}, {xlo, yhi}};
    }
};

/// Sutherland-Hodgman clip of a polygon against one half-plane
/// keep(p) >= 0, with line(p) = 0 on the boundary.
template <class KeepFn>
inline std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, KeepFn line) {
    std::vector<Point2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        Point2 a = poly[i];
        Point2 b = poly[(i + 1) % m];
        double fa = line(a), fb = line(b);
        bool ina = fa >= 0.0, inb = fb >= 0.0;
        if (ina) out.push_back(a);
        if (ina != inb) {
            double t = fa / (fa - fb);
            out.push_back(lerp(a, b, t));
        }
    }
    return out;
}

inline std::vector<Point2> clip_to_rect(const std::vector<Point2>& poly, const ClipRect& r) {
    std::vector<Point2> p = poly;
    p = clip_halfplane(p, [&](Point2 q) { return q.x - r.xlo; });
    p = clip_halfplane(p, [&](Point2 q) { return r.xhi - q.x; });
    p = clip_halfplane(p, [&](Point2 q) { return q.y - r.ylo; });
    p = clip_halfplane(p, [&](Point2 q) { return r.yhi - q.y; });
    // drop coincident consecutive vertices introduced by clipping
    std::vector<Point2> clean;
    double eps = 1e-14 * r.diagonal();
    for (Point2 q : p) {
        if (clean.empty() || distance(clean.back(), q) > eps) clean.push_back(q);
    }
    while (clean.size() > 1 && distance(clean.front(), clean.back()) <= eps) clean.pop_back();
    if (clean.size() < 3) clean.clear();
    return clean;
}

} // namespace detail

/// Isolates a fixed point inside a positive-index face by recursive
/// topological-degree bisection. The first contour is the face boundary;
/// the bounding box is split in four through its (jittered, when needed)
/// center, contours of children are the region clipped to each quadrant
/// until a box fully interior to the face is reached, then pure boxes.
/// Degrees of the four children must sum to the parent degree at every
/// subdivision; descent follows the child of largest |degree|.
inline FixedPointResult locate_fixed_point(const MapSpec& map, const Arrangement& arr,
                                           int fid, const LipschitzCertificate& cert,
                                           double tol,
                                           std::vector<SubdivisionRecord>* trace = nullptr,
                                           const WindingWalkOptions& walk_opt = {}) {
    if (!(tol > 0.0)) throw DomainError("locate_fixed_point: tol must be positive");
    const Face& face = arr.faces[fid];
    if (!face.bounded) throw DomainError("locate_fixed_point: face is unbounded");

    std::vector<Point2> region = arr.face_polygon(fid);
    BoundingBox bb = bounding_box(region);
    detail::ClipRect box{bb.xmin, bb.ymin, bb.xmax, bb.ymax};
    bool pure = false;

    int degree = displacement_winding(map, region, cert, walk_opt);
    if (degree == 0)
        throw DomainError("locate_fixed_point: face boundary has degree 0");

    FixedPointResult result;
    result.degree = degree;

    while (box.diagonal() >= tol) {
        bool subdivided = false;
        std::uint64_t jitter_state = kFnvOffset;
        jitter_state = hash_combine(jitter_state, box.xlo);
        jitter_state = hash_combine(jitter_state, box.ylo);
        jitter_state = hash_combine(jitter_state, box.xhi);
        jitter_state = hash_combine(jitter_state, box.yhi);

        for (int attempt = 0; attempt < 8 && !subdivided; ++attempt) {
            Point2 split = box.center();
            if (attempt > 0) {
                double u = uniform01(jitter_state) - 0.5;
                double v = uniform01(jitter_state) - 0.5;
                split.x += 0.4 * u * (box.xhi - box.xlo);
                split.y += 0.4 * v * (box.yhi - box.ylo);
            }
            std::array<detail::ClipRect, 4> quads{{
                {box.xlo, box.ylo, split.x, split.y},
                {split.x, box.ylo, box.xhi, split.y},
                {box.xlo, split.y, split.x, box.yhi},
                {split.x, split.y, box.xhi, box.yhi},
            }};

            std::array<std::vector<Point2>, 4> contours;
            std::array<int, 4> degrees{0, 0, 0, 0};
            std::array<bool, 4> child_pure{pure, pure, pure, pure};
            bool clearance_hit = false;
            for (int q = 0; q < 4 && !clearance_hit; ++q) {
                if (pure) {
                    contours[q] = quads[q].corners();
                } else {
                    contours[q] = detail::clip_to_rect(region, quads[q]);
                    if (!contours[q].empty() &&
                        std::abs(signed_area(contours[q]) - quads[q].area()) <=
                            1e-9 * quads[q].area()) {
                        child_pure[q] = true;
                        contours[q] = quads[q].corners();
                    }
                }
                if (contours[q].empty()) continue;
                try {
                    degrees[q] = displacement_winding(map, contours[q], cert, walk_opt);
                } catch (const ClearanceError&) {
                    clearance_hit = true;  // zero on a split line: jitter and retry
                }
            }
            if (clearance_hit) continue;

            int sum = degrees[0] + degrees[1] + degrees[2] + degrees[3];
            if (sum != degree)
                throw InternalError("subdivision degrees do not sum to the parent degree");
            if (trace) trace->push_back({degree, degrees});

            int pick = -1, best = 0;
            int nonzero = 0;
            for (int q = 0; q < 4; ++q) {
                if (degrees[q] == 0) continue;
                ++nonzero;
                if (std::abs(degrees[q]) > best) {
                    best = std::abs(degrees[q]);
                    pick = q;
                }
            }
            if (pick < 0) throw InternalError("no child with nonzero degree");
            if (nonzero > 1) result.multiple_zero_regions = true;

            box = quads[pick];
            region = contours[pick];
            pure = child_pure[pick];
            degree = degrees[pick];
            ++result.subdivisions;
            subdivided = true;
        }
        if (!subdivided)
            throw ClearanceError(
                "could not separate the fixed point from the subdivision contour");
    }

    result.location = box.center();
    result.residual = residual(map, result.location);
    result.box_radius = box.diagonal() / 2.0;
    result.degree = degree;
    return result;
}

} // namespace linkfix

#endif
