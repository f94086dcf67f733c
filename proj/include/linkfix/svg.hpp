#ifndef LINKFIX_SVG_HPP
#define LINKFIX_SVG_HPP

#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "linkfix/arrangement.hpp"
#include "linkfix/fixpoint.hpp"
#include "linkfix/pipeline.hpp"

namespace linkfix {

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

/// Fill colors keyed by winding value.
inline const char* omega_color(int omega) {
    static const char* positive[] = {"#cfe8ff", "#9fd0ff", "#6fb8ff", "#3fa0ff"};
    static const char* negative[] = {"#ffd9cf", "#ffb39f", "#ff8d6f", "#ff673f"};
    if (omega == 0) return "#eeeeee";
    if (omega > 0) return positive[std::min(omega - 1, 3)];
    return negative[std::min(-omega - 1, 3)];
}

} // namespace detail

/// Writes a static SVG 1.1 diagnostic: faces filled by winding value with
/// per-face labels, the oriented orbit polygon with mid-segment arrowheads,
/// orbit points, orientation-change vertices, and the fixed point marker.
/// The viewport is the polygon's bounding box padded by a tenth; output is
/// deterministic for a given input.
inline void render_svg(const Arrangement& arr, const OrbitPolygon& gamma,
                       const std::vector<FaceRow>& rows,
                       const std::optional<FixedPointResult>& fixed_point,
                       std::ostream& out) {
    using detail::fmt;

    BoundingBox bb = bounding_box(gamma.points);
    double pad = 0.1 * std::max(bb.width(), bb.height());
    double wx = bb.xmin - pad, wy = bb.ymin - pad;
    double ww = bb.width() + 2 * pad, wh = bb.height() + 2 * pad;
    const double size = 800.0;
    double scale = size / std::max(ww, wh);
    auto X = [&](double x) { return (x - wx) * scale; };
    auto Y = [&](double y) { return (wy + wh - y) * scale; };
    auto P = [&](Point2 p) { return fmt(X(p.x)) + "," + fmt(Y(p.y)); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << fmt(ww * scale) << "\" height=\"" << fmt(wh * scale) << "\" viewBox=\"0 0 "
        << fmt(ww * scale) << " " << fmt(wh * scale) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // bounded faces, filled by winding
    for (const FaceRow& r : rows) {
        out << "<polygon points=\"";
        bool first = true;
        for (Point2 p : arr.face_polygon(r.id)) {
            if (!first) out << " ";
            out << P(p);
            first = false;
        }
        out << "\" fill=\"" << detail::omega_color(r.omega)
            << "\" stroke=\"none\" fill-opacity=\"0.9\"/>\n";
    }

    // orbit polygon with direction arrows at segment midpoints
    for (int i = 0; i < gamma.size(); ++i) {
        Segment s = gamma.segment(i);
        out << "<line x1=\"" << fmt(X(s.a.x)) << "\" y1=\"" << fmt(Y(s.a.y)) << "\" x2=\""
            << fmt(X(s.b.x)) << "\" y2=\"" << fmt(Y(s.b.y))
            << "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
        Point2 mid = lerp(s.a, s.b, 0.5);
        Vec2 d = s.dir();
        double len = d.norm();
        if (len == 0.0) continue;
        Vec2 u = d / len;
        Vec2 nrm = perp(u);
        double a = 0.012 * std::max(ww, wh);
        Point2 tip = mid + u * a;
        Point2 lft = mid - u * a * 0.5 + nrm * a * 0.6;
        Point2 rgt = mid - u * a * 0.5 - nrm * a * 0.6;
        out << "<polygon points=\"" << P(tip) << " " << P(lft) << " " << P(rgt)
            << "\" fill=\"#333333\"/>\n";
    }

    // orientation-change vertices
    std::set<int> change_vertices;
    for (const Face& f : arr.faces) {
        if (!f.bounded) continue;
        const std::size_t m = f.cycle.size();
        for (std::size_t i = 0; i < m; ++i) {
            const HalfEdge& a = arr.half[f.cycle[i]];
            const HalfEdge& b = arr.half[f.cycle[(i + 1) % m]];
            if (a.along_gamma != b.along_gamma) change_vertices.insert(b.origin);
        }
    }
    for (int v : change_vertices) {
        Point2 p = arr.vertices[static_cast<std::size_t>(v)];
        out << "<circle cx=\"" << fmt(X(p.x)) << "\" cy=\"" << fmt(Y(p.y))
            << "\" r=\"6\" fill=\"none\" stroke=\"#cc8800\" stroke-width=\"1.5\"/>\n";
    }

    // orbit points
    for (std::size_t i = 0; i < gamma.points.size(); ++i) {
        Point2 p = gamma.points[i];
        out << "<circle cx=\"" << fmt(X(p.x)) << "\" cy=\"" << fmt(Y(p.y))
            << "\" r=\"3.5\" fill=\"#222222\"/>\n";
        out << "<text x=\"" << fmt(X(p.x) + 6) << "\" y=\"" << fmt(Y(p.y) - 6)
            << "\" font-size=\"11\" fill=\"#222222\">x" << i << "</text>\n";
    }

    // face labels at the interior samples
    for (const FaceRow& r : rows) {
        const Face& f = arr.faces[r.id];
        if (!f.has_sample) continue;
        out << "<text x=\"" << fmt(X(f.sample.x)) << "\" y=\"" << fmt(Y(f.sample.y))
            << "\" font-size=\"11\" fill=\"#111111\" text-anchor=\"middle\">w=" << r.omega
            << " ind=" << r.comb_index << "</text>\n";
    }

    // fixed point marker
    if (fixed_point) {
        double cx = X(fixed_point->location.x), cy = Y(fixed_point->location.y);
        out << "<line x1=\"" << fmt(cx - 7) << "\" y1=\"" << fmt(cy) << "\" x2=\""
            << fmt(cx + 7) << "\" y2=\"" << fmt(cy)
            << "\" stroke=\"#cc0000\" stroke-width=\"2\"/>\n";
        out << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(cy - 7) << "\" x2=\"" << fmt(cx)
            << "\" y2=\"" << fmt(cy + 7) << "\" stroke=\"#cc0000\" stroke-width=\"2\"/>\n";
        out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy)
            << "\" r=\"5\" fill=\"none\" stroke=\"#cc0000\" stroke-width=\"1.5\"/>\n";
    }

    out << "</svg>\n";
}

} // namespace linkfix

#endif
