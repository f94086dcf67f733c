#ifndef LINKFIX_ARRANGEMENT_HPP
#define LINKFIX_ARRANGEMENT_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "linkfix/dynmap.hpp"
#include "linkfix/geom.hpp"

namespace linkfix {

/// The closed polygonal curve through the orbit points in dynamical order.
/// Segment i joins points[i] to points[i+1 mod n] and carries the
/// orientation induced by the orbit.
struct OrbitPolygon {
    std::vector<Point2> points;

    static OrbitPolygon from_points(std::vector<Point2> pts) {
        if (pts.size() < 2) throw DomainError("orbit polygon needs >= 2 points");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!finite(pts[i])) throw DomainError("orbit polygon point not finite");
            if (pts[i] == pts[(i + 1) % pts.size()])
                throw DomainError("orbit polygon has coincident consecutive points");
        }
        return OrbitPolygon{std::move(pts)};
    }

    int size() const { return static_cast<int>(points.size()); }

    Segment segment(int i) const {
        return {points[i], points[(i + 1) % points.size()]};
    }

    ClosedChain chain() const { return ClosedChain(points); }

    double diameter() const { return bounding_box(points).diagonal(); }
};

inline OrbitPolygon build_gamma(const PeriodicOrbit& orbit) {
    return OrbitPolygon::from_points(orbit.points);
}

struct HalfEdge {
    int origin = -1;      // vertex id
    int twin = -1;
    int next = -1;        // next half-edge around the face on the left
    int face = -1;
    int gamma_seg = -1;   // index of the orbit-polygon segment this lies on
    bool along_gamma = false;  // direction agrees with the segment's orientation
};

struct Face {
    int id = -1;
    bool bounded = false;
    std::vector<int> cycle;   // half-edge ids in walk order (interior on the left)
    double area = 0.0;        // signed; positive for bounded faces
    int omega = 0;            // winding of the orbit polygon over this face
    bool omega_set = false;
    Point2 sample;            // interior witness (bounded faces only)
    bool has_sample = false;
};

/// Planar subdivision induced by the orbit polygon. Vertices are the orbit
/// points plus pairwise segment intersections (snap-rounded); faces are the
/// connected components of the complement, one of them unbounded.
struct Arrangement {
    std::vector<Point2> vertices;
    std::vector<HalfEdge> half;
    std::vector<Face> faces;
    int unbounded_face = -1;
    int gamma_size = 0;
    double eps_snap = 0.0;

    int target(int h) const { return half[half[h].twin].origin; }

    std::vector<Point2> face_polygon(int fid) const {
        std::vector<Point2> poly;
        poly.reserve(faces[fid].cycle.size());
        for (int h : faces[fid].cycle) poly.push_back(vertices[half[h].origin]);
        return poly;
    }

    std::vector<int> bounded_faces() const {
        std::vector<int> ids;
        for (const Face& f : faces)
            if (f.bounded) ids.push_back(f.id);
        return ids;
    }

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return static_cast<int>(half.size() / 2); }
    int face_count() const { return static_cast<int>(faces.size()); }
};

namespace detail {

/// Strict counterclockwise ordering of outgoing directions around `origin`,
/// starting at the positive x axis. Sign decisions are exact.
inline bool ccw_direction_less(const std::vector<Point2>& vertices, int origin,
                               int target_a, int target_b) {
    Point2 o = vertices[origin];
    Point2 a = vertices[target_a];
    Point2 b = vertices[target_b];
    auto lower_half = [&](Point2 t) {
        double dy = t.y - o.y;
        double dx = t.x - o.x;
        return dy < 0.0 || (dy == 0.0 && dx < 0.0);
    };
    bool la = lower_half(a), lb = lower_half(b);
    if (la != lb) return lb;  // upper half (angle in [0, pi)) comes first
    int s = orient(o, a, b);
    if (s == 0)
        throw DegeneracyError("coincident edge directions at a vertex (overlapping segments)");
    return s > 0;
}

} // namespace detail

/// Builds the planar subdivision of the orbit polygon: inserts all pairwise
/// segment intersections as vertices (merging points within eps_snap =
/// 1e-9 x diameter), links half-edges by angular order, and extracts faces.
/// Throws DegeneracyError for collinear overlaps between distinct segments,
/// for chains whose subdivision yields no bounded face, and for snap-level
/// coincidences that cannot be represented.
inline Arrangement build_arrangement(const OrbitPolygon& gamma) {
    const int n = gamma.size();
    if (n < 2) throw DomainError("orbit polygon too small");
    const double diam = gamma.diameter();
    if (!(diam > 0.0)) throw DomainError("orbit polygon has zero diameter");
    const double eps_snap = 1e-9 * diam;

    Arrangement arr;
    arr.gamma_size = n;
    arr.eps_snap = eps_snap;

    // vertex pool, orbit points first (kept exact)
    arr.vertices = gamma.points;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (distance(arr.vertices[i], arr.vertices[j]) <= eps_snap)
                throw DegeneracyError("two orbit points coincide at snap resolution");

    auto snap_vertex = [&](Point2 p) -> int {
        for (std::size_t v = 0; v < arr.vertices.size(); ++v)
            if (distance(arr.vertices[v], p) <= eps_snap) return static_cast<int>(v);
        arr.vertices.push_back(p);
        return static_cast<int>(arr.vertices.size() - 1);
    };

    // events[i]: (parameter, vertex) splits of segment i
    std::vector<std::vector<std::pair<double, int>>> events(n);
    for (int i = 0; i < n; ++i) {
        events[i].push_back({0.0, i});
        events[i].push_back({1.0, (i + 1) % n});
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            SegmentIntersection x = seg_intersect(gamma.segment(i), gamma.segment(j));
            if (x.kind == IntersectKind::none) continue;
            if (x.kind == IntersectKind::overlap) {
                std::ostringstream os;
                os << "orbit segments " << i << " and " << j
                   << " overlap along a line; perturb the orbit";
                throw DegeneracyError(os.str());
            }
            int vid = snap_vertex(x.p);
            events[i].push_back({x.t1, vid});
            events[j].push_back({x.t2, vid});
        }
    }

    // sub-edges per segment, in parameter order
    struct SubEdge {
        int va, vb, seg;
    };
    std::vector<SubEdge> sub;
    std::map<std::pair<int, int>, int> edge_seg;  // undirected key -> source segment
    for (int i = 0; i < n; ++i) {
        auto& ev = events[i];
        std::sort(ev.begin(), ev.end());
        for (std::size_t a = 0, b = 1; b < ev.size(); ++b) {
            if (ev[b].second == ev[a].second) continue;  // snapped to same vertex
            std::pair<int, int> key{std::min(ev[a].second, ev[b].second),
                                    std::max(ev[a].second, ev[b].second)};
            auto [it, inserted] = edge_seg.emplace(key, i);
            if (!inserted) {
                std::ostringstream os;
                os << "orbit segments " << it->second << " and " << i
                   << " coincide after snapping; perturb the orbit";
                throw DegeneracyError(os.str());
            }
            sub.push_back({ev[a].second, ev[b].second, i});
            a = b;
        }
    }

    // half-edges: even id along the segment orientation, odd id its twin
    arr.half.reserve(sub.size() * 2);
    for (const SubEdge& e : sub) {
        int h0 = static_cast<int>(arr.half.size());
        arr.half.push_back({e.va, h0 + 1, -1, -1, e.seg, true});
        arr.half.push_back({e.vb, h0, -1, -1, e.seg, false});
    }

    // angular order of outgoing half-edges around every vertex
    std::vector<std::vector<int>> outgoing(arr.vertices.size());
    for (std::size_t h = 0; h < arr.half.size(); ++h)
        outgoing[arr.half[h].origin].push_back(static_cast<int>(h));
    for (std::size_t v = 0; v < arr.vertices.size(); ++v) {
        auto& out = outgoing[v];
        std::sort(out.begin(), out.end(), [&](int ha, int hb) {
            return detail::ccw_direction_less(arr.vertices, static_cast<int>(v),
                                              arr.target(ha), arr.target(hb));
        });
        // next(h) for h ending at v: one step clockwise from twin(h)
        const int m = static_cast<int>(out.size());
        for (int idx = 0; idx < m; ++idx) {
            int h_out = out[idx];
            int h_in = arr.half[h_out].twin;
            arr.half[h_in].next = out[(idx + m - 1) % m];
        }
    }

    // face cycles
    std::vector<char> visited(arr.half.size(), 0);
    for (std::size_t h0 = 0; h0 < arr.half.size(); ++h0) {
        if (visited[h0]) continue;
        Face face;
        face.id = static_cast<int>(arr.faces.size());
        int h = static_cast<int>(h0);
        std::size_t guard = 0;
        do {
            if (visited[h]) throw InternalError("face walk entered a visited half-edge");
            visited[h] = 1;
            arr.half[h].face = face.id;
            face.cycle.push_back(h);
            h = arr.half[h].next;
            if (++guard > arr.half.size())
                throw InternalError("face walk did not close");
        } while (h != static_cast<int>(h0));
        std::vector<Point2> poly;
        poly.reserve(face.cycle.size());
        for (int he : face.cycle) poly.push_back(arr.vertices[arr.half[he].origin]);
        face.area = signed_area(poly);
        face.bounded = face.area > 0.0;
        arr.faces.push_back(std::move(face));
    }

    int unbounded_count = 0;
    for (const Face& f : arr.faces) {
        if (!f.bounded) {
            ++unbounded_count;
            arr.unbounded_face = f.id;
        }
    }
    if (unbounded_count != 1)
        throw DegeneracyError("subdivision does not have exactly one unbounded face");
    if (arr.faces.size() < 2)
        throw DegeneracyError("orbit polygon bounds no face");

    long long euler = static_cast<long long>(arr.vertex_count()) - arr.edge_count() +
                      arr.face_count();
    if (euler != 2)
        throw DegeneracyError("inconsistent subdivision topology (V - E + F != 2)");

    return arr;
}

/// Deterministic interior witness with clearance from the face boundary.
/// Tries inward offsets of boundary-edge midpoints at clearance 1e-6 x face
/// diameter, shrinking the clearance tenfold up to three times.
inline Point2 sample_interior(const Arrangement& arr, int fid) {
    const Face& face = arr.faces[fid];
    if (!face.bounded) throw DomainError("sample_interior: face is unbounded");
    std::vector<Point2> poly = arr.face_polygon(fid);
    ClosedChain boundary(poly);
    double clearance = 1e-6 * boundary.diameter();

    for (int shrink = 0; shrink <= 3; ++shrink) {
        for (std::size_t e = 0; e < poly.size(); ++e) {
            Point2 u = poly[e];
            Point2 w = poly[(e + 1) % poly.size()];
            Vec2 d = w - u;
            double len = d.norm();
            if (len == 0.0) continue;
            Point2 mid = lerp(u, w, 0.5);
            Point2 cand = mid + perp(d) * (clearance / len);
            try {
                if (winding_anglesum(boundary, cand, clearance / 2.0) == 1) return cand;
            } catch (const ClearanceError&) {
                // candidate too close to another boundary edge; try the next one
            }
        }
        clearance /= 10.0;
    }
    throw DegeneracyError("face too thin to place an interior sample point");
}

/// Assigns the winding number of the orbit polygon to every face, computed
/// two independent ways and cross-checked: by a generic ray from an interior
/// sample, and by propagation from the unbounded face (winding 0), adding +1
/// when crossing the polygon right-to-left relative to its orientation.
/// Also fills in each bounded face's interior sample.
inline void face_windings(Arrangement& arr, const OrbitPolygon& gamma) {
    ClosedChain chain = gamma.chain();

    // route (a): generic-ray winding at an interior sample of each bounded face
    std::vector<int> ray_value(arr.faces.size(), 0);
    for (Face& f : arr.faces) {
        if (!f.bounded) continue;
        f.sample = sample_interior(arr, f.id);
        f.has_sample = true;
        ray_value[f.id] = winding_via_ray(chain, f.sample);
    }

    // route (b): propagation across half-edges from the unbounded face
    std::vector<std::optional<int>> prop(arr.faces.size());
    prop[arr.unbounded_face] = 0;
    std::deque<int> queue{arr.unbounded_face};
    while (!queue.empty()) {
        int fid = queue.front();
        queue.pop_front();
        for (int h : arr.faces[fid].cycle) {
            const HalfEdge& he = arr.half[h];
            int nb = arr.half[he.twin].face;
            // fid lies left of h; the face left of the polygon direction has
            // winding one higher than the face on its right
            int value = *prop[fid] + (he.along_gamma ? -1 : +1);
            if (!prop[nb]) {
                prop[nb] = value;
                queue.push_back(nb);
            } else if (*prop[nb] != value) {
                throw InternalError("winding propagation is inconsistent across an edge");
            }
        }
    }

    for (Face& f : arr.faces) {
        if (!prop[f.id]) throw InternalError("face unreachable from the unbounded face");
        int w = *prop[f.id];
        if (f.bounded && w != ray_value[f.id]) {
            std::ostringstream os;
            os << "face " << f.id << ": ray winding " << ray_value[f.id]
               << " disagrees with propagated winding " << w;
            throw InternalError(os.str());
        }
        if (!f.bounded && w != 0)
            throw InternalError("unbounded face received nonzero winding");
        f.omega = w;
        f.omega_set = true;
    }
}

} // namespace linkfix

#endif
