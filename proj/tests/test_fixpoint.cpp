#include <doctest.h>

#include <cmath>

#include "linkfix/corpus.hpp"
#include "linkfix/fixpoint.hpp"
#include "linkfix/index.hpp"
#include "testutil.hpp"

using namespace linkfix;
using testutil::kPi;

namespace {

struct Built {
    OrbitPolygon gamma;
    Arrangement arr;
    std::vector<FaceIndex> indices;
    int chosen;
};

Built prepare(const TestCase& tc) {
    OrbitPolygon gamma = build_gamma(validate_orbit(tc.map, tc.orbit_points));
    Arrangement arr = build_arrangement(gamma);
    face_windings(arr, gamma);
    std::vector<FaceIndex> indices = compute_face_indices(tc.map, arr, tc.map.lip_bound());
    int chosen = positive_index_face(arr, indices);
    return {std::move(gamma), std::move(arr), std::move(indices), chosen};
}

std::vector<Point2> circle_loop(Point2 c, double r, int segments = 64) {
    std::vector<Point2> pts;
    for (int i = 0; i < segments; ++i) {
        double a = 2 * kPi * i / segments;
        pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return pts;
}

/// Zooming grid search minimizing the displacement magnitude over a box.
Point2 grid_search_min(const MapSpec& map, BoundingBox box, int levels, int res = 24) {
    Point2 best{box.center()};
    for (int level = 0; level < levels; ++level) {
        double best_val = std::numeric_limits<double>::infinity();
        Point2 best_pt = best;
        for (int i = 0; i <= res; ++i) {
            for (int j = 0; j <= res; ++j) {
                Point2 p{box.xmin + box.width() * i / res, box.ymin + box.height() * j / res};
                double v = map.displacement(p).norm();
                if (v < best_val) {
                    best_val = v;
                    best_pt = p;
                }
            }
        }
        best = best_pt;
        double w = box.width() / res * 2, h = box.height() / res * 2;
        box = BoundingBox();
        box.expand({best_pt.x - w, best_pt.y - h});
        box.expand({best_pt.x + w, best_pt.y + h});
    }
    return best;
}

} // namespace

TEST_CASE("residual") {
    MapSpec rot = MapSpec::rotation({0, 0}, 2 * kPi / 6);
    CHECK(residual(rot, {0, 0}) == 0.0);
    // chord length formula: |f(p) - p| = 2 sin(theta/2) |p|
    CHECK(residual(rot, {1, 0}) == doctest::Approx(2 * std::sin(kPi / 6)));
    CHECK(residual(rot, {1, 0}) == doctest::Approx(distance(rot.eval({1, 0}), {1, 0})));
    CHECK(residual(MapSpec::translation({0, 0}), {3, -4}) == 0.0);
}

TEST_CASE("displacement winding along explicit loops") {
    MapSpec rot = MapSpec::rotation({0, 0}, 2 * kPi / 6);
    LipschitzCertificate cert = rot.lip_bound();
    CHECK(displacement_winding(rot, circle_loop({0, 0}, 0.5), cert) == 1);

    MapSpec tr = MapSpec::translation({1, 1});
    CHECK(displacement_winding(tr, circle_loop({3, 2}, 1.0), tr.lip_bound()) == 0);

    // loop not enclosing the rotation center
    CHECK(displacement_winding(rot, circle_loop({2, 2}, 0.5), cert) == 0);
}

TEST_CASE("locate the fixed point of the hexagon rotation") {
    TestCase tc = rotation_case(1, 6);
    Built b = prepare(tc);
    std::vector<SubdivisionRecord> trace;
    FixedPointResult r = locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(),
                                            1e-8, &trace);
    CHECK(distance(r.location, {0, 0}) <= 1e-8);
    CHECK(r.residual <= 2e-8);
    CHECK(r.degree == 1);
    CHECK(r.box_radius <= 1e-8);
    for (const SubdivisionRecord& rec : trace) {
        int sum = rec.child_degrees[0] + rec.child_degrees[1] + rec.child_degrees[2] +
                  rec.child_degrees[3];
        CHECK(sum == rec.parent_degree);
    }
}

TEST_CASE("locate the fixed point of the 13/2 star rotation") {
    TestCase tc = rotation_case(2, 13);
    Built b = prepare(tc);
    FixedPointResult r = locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(), 1e-8);
    CHECK(distance(r.location, {0, 0}) <= 1e-8);
    CHECK(r.residual <= 2e-8);
}

TEST_CASE("perturbed rotation: fixed point agrees with a grid-search oracle") {
    TestCase tc = perturbed_rotation_case(1, 6, 913);
    double k = tc.map.lip_bound().k;
    REQUIRE(k <= 1.0);
    Built b = prepare(tc);
    double tol = 1e-6;
    FixedPointResult r = locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(), tol);
    CHECK(r.residual <= 2 * (1 + k) * tol);

    BoundingBox bb = bounding_box(b.arr.face_polygon(b.chosen));
    Point2 oracle = grid_search_min(tc.map, bb, 6);
    CHECK(distance(r.location, oracle) <= 10 * tol);
}

TEST_CASE("tightening tol tightens the residual on the rotation family") {
    // rotation slightly off-center so box centers never hit the zero exactly
    TestCase tc = rotation_case(1, 7, 1.0, {0.0131, -0.0072});
    Built b = prepare(tc);
    double r6 = locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(), 1e-6).residual;
    double r7 = locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(), 1e-7).residual;
    double r8 = locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(), 1e-8).residual;
    CHECK(r7 <= r6 / 5);
    CHECK(r8 <= r7 / 5);
}

TEST_CASE("degree additivity holds across corpus subdivisions") {
    for (const TestCase& tc : {rotation_case(1, 8), rotation_case(2, 15),
                               perturbed_rotation_case(1, 9, 55)}) {
        CAPTURE(tc.name);
        Built b = prepare(tc);
        std::vector<SubdivisionRecord> trace;
        FixedPointResult r =
            locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(), 1e-8, &trace);
        CHECK(r.degree != 0);
        CHECK(!trace.empty());
        for (const SubdivisionRecord& rec : trace) {
            int sum = rec.child_degrees[0] + rec.child_degrees[1] + rec.child_degrees[2] +
                      rec.child_degrees[3];
            CHECK(sum == rec.parent_degree);
        }
    }
}

TEST_CASE("locate_fixed_point rejects bad preconditions") {
    TestCase tc = rotation_case(1, 6);
    Built b = prepare(tc);
    CHECK_THROWS_AS(
        locate_fixed_point(tc.map, b.arr, b.chosen, tc.map.lip_bound(), -1.0),
        DomainError);
    CHECK_THROWS_AS(
        locate_fixed_point(tc.map, b.arr, b.arr.unbounded_face, tc.map.lip_bound(), 1e-8),
        DomainError);
    // a translation has no zero anywhere: the face boundary has degree 0
    MapSpec tr = MapSpec::translation({1, 0});
    CHECK_THROWS_AS(locate_fixed_point(tr, b.arr, b.chosen, tr.lip_bound(), 1e-8),
                    DomainError);
}

TEST_CASE("loops inside a single face that enclose nothing have degree zero") {
    TestCase tc = rotation_case(2, 13);
    PeriodicOrbit orbit = validate_orbit(tc.map, tc.orbit_points);
    OrbitPolygon gamma = build_gamma(orbit);
    Arrangement arr = build_arrangement(gamma);
    face_windings(arr, gamma);
    std::vector<FaceIndex> idx = compute_face_indices(tc.map, arr, tc.map.lip_bound());
    int chosen = positive_index_face(arr, idx);
    FixedPointResult fp = locate_fixed_point(tc.map, arr, chosen, tc.map.lip_bound(), 1e-9);

    for (int fid : arr.bounded_faces()) {
        const Face& f = arr.faces[fid];
        ClosedChain boundary(arr.face_polygon(fid));
        double r = 0.4 * min_distance_to_chain(f.sample, boundary);
        if (distance(f.sample, fp.location) <= r + 1e-6) continue;  // would enclose the zero
        CHECK(displacement_winding(tc.map, circle_loop(f.sample, r, 48),
                                   tc.map.lip_bound()) == 0);
    }
}

TEST_CASE("the final box bounds the residual") {
    TestCase tc = rotation_case(1, 9, 1.3, {0.21, -0.05});
    PeriodicOrbit orbit = validate_orbit(tc.map, tc.orbit_points);
    OrbitPolygon gamma = build_gamma(orbit);
    Arrangement arr = build_arrangement(gamma);
    face_windings(arr, gamma);
    std::vector<FaceIndex> idx = compute_face_indices(tc.map, arr, tc.map.lip_bound());
    int chosen = positive_index_face(arr, idx);
    double k = tc.map.lip_bound().k;
    for (double tol : {1e-5, 1e-7, 1e-9}) {
        FixedPointResult fp = locate_fixed_point(tc.map, arr, chosen, tc.map.lip_bound(), tol);
        CHECK(fp.residual <= 2 * (1 + k) * fp.box_radius);
        CHECK(fp.degree != 0);
    }
}

TEST_CASE("non-enclosing loop winding agrees with a dense sampling oracle") {
    MapSpec rot = MapSpec::rotation({0, 0}, 2 * kPi / 6);
    std::vector<Point2> loop = circle_loop({2, 2}, 0.5, 48);
    double total = 0.0;
    Vec2 prev = rot.displacement(loop[0]);
    for (std::size_t e = 0; e < loop.size(); ++e) {
        Point2 u = loop[e];
        Point2 w = loop[(e + 1) % loop.size()];
        for (int s = 1; s <= 2000; ++s) {
            Vec2 next = rot.displacement(lerp(u, w, s / 2000.0));
            total += signed_angle(prev, next);
            prev = next;
        }
    }
    int oracle = static_cast<int>(std::lround(total / (2 * kPi)));
    CHECK(oracle == 0);
    CHECK(displacement_winding(rot, loop, rot.lip_bound()) == oracle);
}
