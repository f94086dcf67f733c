#ifndef LINKFIX_INDEX_HPP
#define LINKFIX_INDEX_HPP

#include <cmath>
#include <sstream>
#include <vector>

#include "linkfix/arrangement.hpp"
#include "linkfix/dynmap.hpp"
#include "linkfix/geom.hpp"

namespace linkfix {

/// Index data of one bounded face: the orientation-change count 2p of its
/// boundary, the combinatorial index 1 - p, and the integral index obtained
/// from the displacement field's angle variation along the boundary.
struct FaceIndex {
    int face = -1;
    int orientation_changes = 0;  // 2p
    int comb_index = 0;           // 1 - p
    int num_index = 0;
    bool agreement = false;
};

/// Counts the boundary vertices of a bounded face at which the two adjacent
/// boundary edges carry opposite orbit-polygon directions. Always even.
inline int orientation_changes(const Arrangement& arr, int fid) {
    const Face& face = arr.faces[fid];
    if (!face.bounded) throw DomainError("orientation_changes: face is unbounded");
    int changes = 0;
    const std::size_t m = face.cycle.size();
    for (std::size_t i = 0; i < m; ++i) {
        bool a = arr.half[face.cycle[i]].along_gamma;
        bool b = arr.half[face.cycle[(i + 1) % m]].along_gamma;
        if (a != b) ++changes;
    }
    if (changes % 2 != 0)
        throw InternalError("odd orientation-change count on a closed boundary walk");
    return changes;
}

inline int comb_index(const Arrangement& arr, int fid) {
    return 1 - orientation_changes(arr, fid) / 2;
}

struct WindingWalkOptions {
    int min_steps_per_edge = 16;
    double refine = 1.0;          // >1 shrinks the certified step further
    double rounding_tol = 1e-3;   // max residue of total/2pi from an integer
    double zero_floor_rel = 1e-12;  // x contour diameter: below counts as a zero
};

namespace detail {

/// Total continuous rotation (radians) of the displacement field along a
/// closed polygonal contour. The step size along each edge is certified:
/// with the displacement k-Lipschitz and the local magnitude m, a step of
/// m/(2k) changes the displacement by at most m/2, so each turn increment
/// stays strictly below a quarter turn and none is missed. Throws
/// ClearanceError when the displacement comes too close to zero on the
/// contour.
inline double displacement_turn_total(const MapSpec& map, const std::vector<Point2>& contour,
                                      double k, const WindingWalkOptions& opt = {}) {
    const std::size_t m = contour.size();
    if (m < 3) throw DomainError("contour needs at least 3 vertices");
    double diam = bounding_box(contour).diagonal();
    if (!(diam > 0.0)) throw DomainError("degenerate contour");
    const double zero_floor = opt.zero_floor_rel * diam;

    double total = 0.0;
    std::size_t steps_taken = 0;
    Vec2 d_prev = map.displacement(contour[0]);
    if (d_prev.norm() <= zero_floor)
        throw ClearanceError("displacement vanishes on the contour");

    for (std::size_t e = 0; e < m; ++e) {
        Point2 u = contour[e];
        Point2 w = contour[(e + 1) % m];
        double len = distance(u, w);
        if (len == 0.0) continue;
        const double base_step = len / opt.min_steps_per_edge;
        double pos = 0.0;
        while (pos < len) {
            double mag = d_prev.norm();
            if (mag <= zero_floor)
                throw ClearanceError("displacement vanishes on the contour");
            double certified = k > 0.0 ? mag / (2.0 * k) : len;
            double step = std::min(base_step, certified / opt.refine);
            if (step < 1e-15 * len || ++steps_taken > 4000000)
                throw ClearanceError("certified step collapsed; displacement zero on contour");
            pos = pos + step >= len ? len : pos + step;
            Vec2 d_next = map.displacement(lerp(u, w, pos / len));
            double turn = signed_angle(d_prev, d_next);
            if (std::abs(turn) >= 1.5707963267948966)
                throw InternalError("turn step reached a quarter turn despite certification");
            total += turn;
            d_prev = d_next;
        }
    }
    return total;
}

} // namespace detail

/// Index of a bounded face as the winding of the displacement field along
/// the counterclockwise boundary contour. `k` must be a valid Lipschitz
/// bound on the displacement for the step certification to hold.
inline int num_index(const MapSpec& map, const std::vector<Point2>& boundary,
                     const LipschitzCertificate& cert, const WindingWalkOptions& opt = {}) {
    double total = detail::displacement_turn_total(map, boundary, cert.k, opt);
    double w = total / (2.0 * 3.14159265358979323846);
    double rounded = std::round(w);
    if (std::abs(w - rounded) > opt.rounding_tol)
        throw InternalError("displacement winding did not accumulate to an integer");
    return static_cast<int>(rounded);
}

/// Computes both index routes for every bounded face and checks they agree.
/// A disagreement falsifies the combinatorial index formula and aborts with
/// a diagnostic dump; it indicates a bug, never expected behaviour for
/// certified maps.
inline std::vector<FaceIndex> compute_face_indices(const MapSpec& map, const Arrangement& arr,
                                                   const LipschitzCertificate& cert,
                                                   const WindingWalkOptions& opt = {}) {
    std::vector<FaceIndex> out;
    for (int fid : arr.bounded_faces()) {
        FaceIndex fi;
        fi.face = fid;
        fi.orientation_changes = orientation_changes(arr, fid);
        fi.comb_index = 1 - fi.orientation_changes / 2;
        fi.num_index = num_index(map, arr.face_polygon(fid), cert, opt);
        fi.agreement = fi.comb_index == fi.num_index;
        if (!fi.agreement) {
            std::ostringstream os;
            os.precision(17);
            os << "face " << fid << ": combinatorial index " << fi.comb_index
               << " (orientation changes " << fi.orientation_changes
               << ") disagrees with integral index " << fi.num_index << "; boundary:";
            for (Point2 p : arr.face_polygon(fid)) os << " (" << p.x << "," << p.y << ")";
            throw FalsificationError(os.str());
        }
        out.push_back(fi);
    }
    return out;
}

/// The bounded face maximizing |winding| (ties broken by smallest face id).
/// For certified maps its index is guaranteed positive; a nonpositive index
/// is reported as a falsification.
inline int positive_index_face(const Arrangement& arr, const std::vector<FaceIndex>& indices) {
    int best = -1;
    int best_abs = -1;
    for (int fid : arr.bounded_faces()) {
        if (!arr.faces[fid].omega_set)
            throw DomainError("positive_index_face: face windings not computed");
        int a = std::abs(arr.faces[fid].omega);
        if (a > best_abs) {
            best_abs = a;
            best = fid;
        }
    }
    if (best < 0) throw DomainError("positive_index_face: no bounded face");
    if (best_abs == 0)
        throw FalsificationError("all bounded faces have winding 0");
    for (const FaceIndex& fi : indices) {
        if (fi.face == best) {
            if (fi.comb_index <= 0) {
                std::ostringstream os;
                os << "face " << best << " maximizes |winding| = " << best_abs
                   << " but has index " << fi.comb_index << " <= 0";
                throw FalsificationError(os.str());
            }
            return best;
        }
    }
    throw DomainError("positive_index_face: indices missing the maximal face");
}

} // namespace linkfix

#endif
