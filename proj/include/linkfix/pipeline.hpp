#ifndef LINKFIX_PIPELINE_HPP
#define LINKFIX_PIPELINE_HPP

#include <chrono>
#include <deque>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkfix/corpus.hpp"
#include "linkfix/fixpoint.hpp"
#include "linkfix/index.hpp"
#include "linkfix/io.hpp"
#include "linkfix/linking.hpp"

namespace linkfix {

// Certificates within roundoff of 1 count as certified; the boundary case
// (rotation by a sixth of a turn) lands exactly there.
constexpr double kCertifiedMax = 1.0 + 1e-12;

struct FaceRow {
    int id = -1;
    int omega = 0;
    int orientation_changes = 0;
    int comb_index = 0;
    bool num_ok = false;
    int num_index = 0;
    bool agree = false;
    double area = 0.0;
};

struct Assertion {
    std::string name;
    bool pass = false;
    bool informational = false;  // does not affect the exit status
    std::string detail;
};

struct RunReport {
    std::string map_description;
    std::string map_family;
    LipschitzCertificate certificate;
    bool certified = false;

    int orbit_n = 0;
    double orbit_residual = 0.0;
    double orbit_diameter = 0.0;

    int vertices = 0, edges = 0, faces_total = 0, faces_bounded = 0;
    int unbounded_face = -1;
    std::vector<FaceRow> face_rows;
    int chosen_face = -1;

    std::optional<FixedPointResult> fixed_point;
    std::optional<LinkingResult> linking_gamma;
    std::optional<LinkingResult> linking_arc;

    std::optional<SegmentCheckReport> clearance_check;
    std::optional<SegmentCheckReport> angle_check;

    std::vector<Assertion> assertions;
    bool pass = false;
    double elapsed_ms = 0.0;

    void assert_that(const std::string& name, bool ok, bool informational,
                     const std::string& detail = "") {
        assertions.push_back({name, ok, informational, detail});
    }
};

/// Full pipeline: orbit polygon, subdivision, windings, both index routes,
/// fixed-point isolation in the maximal-winding face, linking number by
/// both loop constructions, and the segment checks. Guarantee-level
/// assertions are recorded in the report; with `allow_uncertified` they are
/// informational and never fail the run.
inline RunReport analyze(const MapSpec& map, const std::vector<Point2>& orbit_points,
                         const RunOptions& opt = {}) {
    auto t0 = std::chrono::steady_clock::now();

    RunReport rep;
    rep.map_description = map.describe();
    rep.map_family = map.family_name();
    rep.certificate = map.lip_bound();
    rep.certified = rep.certificate.k <= kCertifiedMax;

    if (!rep.certified && !opt.allow_uncertified) {
        std::ostringstream os;
        os << "map certificate k = " << rep.certificate.k
           << " exceeds 1; breakdown:";
        for (const auto& [label, k] : rep.certificate.parts) os << " " << label << "=" << k;
        os << " (pass --allow-uncertified to run without the guarantee)";
        throw CertificateError(os.str());
    }
    const bool info = !rep.certified;  // guarantee assertions become informational

    PeriodicOrbit orbit = validate_orbit(map, orbit_points,
                                         opt.eps_orbit ? *opt.eps_orbit : -1.0);
    rep.orbit_n = orbit.period();
    rep.orbit_residual = orbit.residual;
    rep.orbit_diameter = orbit.diameter();

    OrbitPolygon gamma = build_gamma(orbit);
    Arrangement arr = build_arrangement(gamma);
    face_windings(arr, gamma);
    rep.vertices = arr.vertex_count();
    rep.edges = arr.edge_count();
    rep.faces_total = arr.face_count();
    rep.faces_bounded = static_cast<int>(arr.bounded_faces().size());
    rep.unbounded_face = arr.unbounded_face;

    // per-face index rows, both routes
    bool all_agree = true;
    std::vector<FaceIndex> indices;
    for (int fid : arr.bounded_faces()) {
        FaceRow row;
        row.id = fid;
        row.omega = arr.faces[fid].omega;
        row.area = arr.faces[fid].area;
        row.orientation_changes = orientation_changes(arr, fid);
        row.comb_index = 1 - row.orientation_changes / 2;
        try {
            row.num_index = num_index(map, arr.face_polygon(fid), rep.certificate);
            row.num_ok = true;
        } catch (const Error& e) {
            row.num_ok = false;
        }
        row.agree = row.num_ok && row.num_index == row.comb_index;
        all_agree = all_agree && row.agree;
        rep.face_rows.push_back(row);

        FaceIndex fi;
        fi.face = fid;
        fi.orientation_changes = row.orientation_changes;
        fi.comb_index = row.comb_index;
        fi.num_index = row.num_index;
        fi.agreement = row.agree;
        indices.push_back(fi);
    }
    rep.assert_that("index agreement (combinatorial vs integral) on every bounded face",
                    all_agree, info);
    if (!all_agree && !info) {
        rep.pass = false;
        rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0).count();
        return rep;  // abort: downstream results would not be trustworthy
    }

    // maximal-winding face and its positive index
    try {
        rep.chosen_face = positive_index_face(arr, indices);
        rep.assert_that("maximal-winding face has positive index", true, info);
    } catch (const FalsificationError& e) {
        rep.assert_that("maximal-winding face has positive index", false, info, e.what());
        int best = -1, best_abs = -1;
        for (int fid : arr.bounded_faces()) {
            int a = std::abs(arr.faces[fid].omega);
            if (a > best_abs) {
                best_abs = a;
                best = fid;
            }
        }
        rep.chosen_face = info ? best : -1;
    }

    if (rep.chosen_face >= 0) {
        // fixed point in the chosen face
        try {
            FixedPointResult fp = locate_fixed_point(map, arr, rep.chosen_face,
                                                     rep.certificate, opt.tol);
            rep.fixed_point = fp;
            double bound = 2.0 * (1.0 + rep.certificate.k) * opt.tol;
            std::ostringstream os;
            os << "residual " << fp.residual << " vs bound " << bound;
            rep.assert_that("fixed-point residual within 2 (1 + k) tol", fp.residual <= bound,
                            info, os.str());
        } catch (const Error& e) {
            rep.assert_that("fixed point isolated in the chosen face", false, info, e.what());
        }
    }

    if (rep.fixed_point) {
        LoopOptions lopt;
        lopt.eps_clear_rel = opt.eps_clear_rel;
        try {
            rep.linking_gamma =
                linking_number(rep.fixed_point->location, orbit, map, LoopRoute::gamma, lopt);
            rep.linking_arc = linking_number(rep.fixed_point->location, orbit, map,
                                             LoopRoute::straight_arc, lopt);
            bool same = rep.linking_gamma->omega == rep.linking_arc->omega;
            rep.assert_that("loop routes agree (orbit polygon vs iterated arc)", same, info);
            rep.assert_that("winding within n - 1 in absolute value",
                            std::abs(rep.linking_gamma->omega) <= orbit.period() - 1, info);
            std::ostringstream os;
            os << "lk = " << rep.linking_gamma->lk;
            rep.assert_that("linking number is nonzero", rep.linking_gamma->lk != 0, info,
                            os.str());
        } catch (const Error& e) {
            rep.assert_that("linking number computed", false, info, e.what());
        }
    }

    // displacement checks along [x, f(x)] from the first orbit point
    rep.clearance_check = check_segment_clearance(map, orbit.points[0], 100, !rep.certified);
    rep.assert_that("segment [x, f(x)] is free of fixed points (certified lower bound)",
                    rep.clearance_check->pass, info, rep.clearance_check->detail);
    rep.angle_check = check_displacement_angle(map, orbit.points[0], 100, !rep.certified);
    rep.assert_that("displacement direction stays within a right angle on [x, f(x)]",
                    rep.angle_check->pass, info, rep.angle_check->detail);

    rep.pass = true;
    for (const Assertion& a : rep.assertions)
        if (!a.pass && !a.informational) rep.pass = false;

    rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline RunReport analyze(const Input& input) {
    return analyze(input.map, input.orbit_points, input.options);
}

// ---------------------------------------------------------------------------
// Randomized verification suites
// ---------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    int passed = 0;
    int failed = 0;
    bool skipped = false;
    bool informational = false;
    std::string note;
    std::vector<std::string> counterexamples;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int trials = 0;
    std::string source;
    std::deque<SuiteResult> suites;  // deque: stable references while appending
    bool pass = false;
    bool informational_failures = false;

    SuiteResult& suite(const std::string& name) {
        for (SuiteResult& s : suites)
            if (s.name == name) return s;
        suites.push_back(SuiteResult{name});
        return suites.back();
    }

    void finish() {
        pass = true;
        informational_failures = false;
        for (const SuiteResult& s : suites) {
            if (s.failed > 0 && !s.informational) pass = false;
            if (s.failed > 0 && s.informational) informational_failures = true;
        }
    }
};

namespace detail {

inline ArcChain random_arc(std::uint64_t& state, const PeriodicOrbit& orbit, Point2 x0) {
    BoundingBox bb = bounding_box(orbit.points);
    double pad = 0.3 * bb.diagonal();
    double clearance = 0.05 * orbit.diameter();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        int interior = 1 + static_cast<int>(splitmix64(state) % 3);
        std::vector<Point2> vs;
        vs.push_back(orbit.points[0]);
        bool ok = true;
        for (int i = 0; i < interior; ++i) {
            Point2 p{bb.xmin - pad + (bb.width() + 2 * pad) * uniform01(state),
                     bb.ymin - pad + (bb.height() + 2 * pad) * uniform01(state)};
            if (distance(p, x0) < clearance || distance(p, vs.back()) < 1e-6) ok = false;
            vs.push_back(p);
        }
        vs.push_back(orbit.points[1]);
        if (!ok) continue;
        // the straight closing pieces must also clear x0
        bool clear = true;
        for (std::size_t i = 0; i + 1 < vs.size(); ++i)
            if (point_segment_distance(x0, {vs[i], vs[i + 1]}) < clearance) clear = false;
        if (!clear) continue;
        return ArcChain::make(vs);
    }
    throw ClearanceError("could not sample an arc clear of the fixed point");
}

inline void run_segment_suites(VerifyReport& rep, const MapSpec& map,
                               const PeriodicOrbit& orbit, bool informational,
                               std::uint64_t& state, int trials) {
    SuiteResult& clr = rep.suite("segment-clearance");
    SuiteResult& ang = rep.suite("displacement-angle");
    clr.informational = ang.informational = informational;

    std::vector<Point2> points = orbit.points;
    BoundingBox bb = bounding_box(orbit.points);
    double pad = 0.2 * bb.diagonal();
    while (static_cast<int>(points.size()) < trials) {
        Point2 p{bb.xmin - pad + (bb.width() + 2 * pad) * uniform01(state),
                 bb.ymin - pad + (bb.height() + 2 * pad) * uniform01(state)};
        if (map.displacement(p).norm() < 1e-9 * orbit.diameter()) continue;
        points.push_back(p);
    }

    for (Point2 x : points) {
        SegmentCheckReport c = check_segment_clearance(map, x, 100, informational);
        if (c.pass) {
            ++clr.passed;
        } else {
            ++clr.failed;
            if (clr.counterexamples.size() < 3) clr.counterexamples.push_back(c.detail);
        }
        SegmentCheckReport a = check_displacement_angle(map, x, 100, informational);
        if (a.pass) {
            ++ang.passed;
        } else {
            ++ang.failed;
            if (ang.counterexamples.size() < 3) ang.counterexamples.push_back(a.detail);
        }
    }
}

} // namespace detail

/// Runs the randomized property suites on one map/orbit pair. For
/// uncertified maps (k > 1), the displacement checks run informationally
/// and the loop/index suites are skipped.
inline void verify_case(VerifyReport& rep, const MapSpec& map,
                        const std::vector<Point2>& orbit_points, std::uint64_t case_seed,
                        int trials, const RunOptions& opt = {}) {
    LipschitzCertificate cert = map.lip_bound();
    bool certified = cert.k <= kCertifiedMax;
    if (!certified && !opt.allow_uncertified)
        throw CertificateError("map certificate k = " + std::to_string(cert.k) +
                               " exceeds 1 (pass --allow-uncertified for informational checks)");

    PeriodicOrbit orbit = validate_orbit(map, orbit_points,
                                         opt.eps_orbit ? *opt.eps_orbit : -1.0);
    std::uint64_t state = hash_combine(case_seed, static_cast<std::uint64_t>(orbit.period()));

    detail::run_segment_suites(rep, map, orbit, !certified, state, trials);

    SuiteResult& arc = rep.suite("arc-independence");
    SuiteResult& loops = rep.suite("loop-agreement");
    SuiteResult& idx = rep.suite("index-agreement");
    if (!certified) {
        arc.skipped = loops.skipped = idx.skipped = true;
        arc.note = loops.note = idx.note = "requires certificate k <= 1";
        return;
    }

    // pipeline pieces shared by the remaining suites
    OrbitPolygon gamma = build_gamma(orbit);
    Arrangement arr = build_arrangement(gamma);
    face_windings(arr, gamma);
    std::vector<FaceIndex> indices = compute_face_indices(map, arr, cert);
    for (const FaceIndex& fi : indices) {
        if (fi.agreement) ++idx.passed; else ++idx.failed;
    }
    int chosen = positive_index_face(arr, indices);
    FixedPointResult fp = locate_fixed_point(map, arr, chosen, cert, opt.tol);
    Point2 x0 = fp.location;

    LoopOptions lopt;
    lopt.eps_clear_rel = opt.eps_clear_rel;

    // arc independence over random arc pairs
    for (int t = 0; t < trials; ++t) {
        ArcChain c1 = detail::random_arc(state, orbit, x0);
        ArcChain c2 = detail::random_arc(state, orbit, x0);
        ArcIndependenceReport r = arc_independence_check(map, orbit, c1, c2, x0, lopt);
        if (r.pass) {
            ++arc.passed;
        } else {
            ++arc.failed;
            if (arc.counterexamples.size() < 3) {
                std::ostringstream os;
                os << "omega1=" << r.omega1 << " omega2=" << r.omega2
                   << " connecting winding=" << r.connecting_winding;
                arc.counterexamples.push_back(os.str());
            }
        }
    }

    // loop agreement from every orbit base point
    const int n = orbit.period();
    for (int shift = 0; shift < n; ++shift) {
        std::vector<Point2> rotated;
        for (int i = 0; i < n; ++i)
            rotated.push_back(orbit.points[static_cast<std::size_t>((i + shift) % n)]);
        PeriodicOrbit shifted = validate_orbit(map, rotated,
                                               opt.eps_orbit ? *opt.eps_orbit : -1.0);
        LinkingResult via_gamma = linking_number(x0, shifted, map, LoopRoute::gamma, lopt);
        LinkingResult via_arc = linking_number(x0, shifted, map, LoopRoute::straight_arc, lopt);
        bool ok = via_gamma.omega == via_arc.omega && via_gamma.lk == via_arc.lk &&
                  std::abs(via_gamma.omega) <= n - 1 && via_gamma.lk != 0;
        if (ok) {
            ++loops.passed;
        } else {
            ++loops.failed;
            if (loops.counterexamples.size() < 3) {
                std::ostringstream os;
                os << "shift=" << shift << " omega_gamma=" << via_gamma.omega
                   << " omega_arc=" << via_arc.omega;
                loops.counterexamples.push_back(os.str());
            }
        }
    }
}

/// Suites over one input file.
inline VerifyReport verify_input(const Input& input, std::uint64_t seed, int trials) {
    VerifyReport rep;
    rep.seed = seed;
    rep.trials = trials;
    rep.source = "input";
    verify_case(rep, input.map, input.orbit_points, hash_combine(seed, std::uint64_t{1}),
                trials, input.options);
    rep.finish();
    return rep;
}

/// Suites over the built-in corpus, trials spread across the cases.
inline VerifyReport verify_corpus(std::uint64_t seed, int trials, const RunOptions& opt = {}) {
    VerifyReport rep;
    rep.seed = seed;
    rep.trials = trials;
    std::vector<TestCase> corpus = standard_corpus();
    rep.source = "builtin corpus (" + std::to_string(corpus.size()) + " cases)";
    int per_case = std::max(1, trials / static_cast<int>(corpus.size()));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        verify_case(rep, corpus[i].map, corpus[i].orbit_points,
                    hash_combine(seed, static_cast<std::uint64_t>(i)), per_case, opt);
    }
    rep.finish();
    return rep;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

inline nlohmann::json report_json(const RunReport& rep) {
    nlohmann::json j;
    j["map"] = {{"family", rep.map_family},
                {"description", rep.map_description},
                {"certificate_k", rep.certificate.k},
                {"certified", rep.certified}};
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& [label, k] : rep.certificate.parts)
        parts.push_back({{"component", label}, {"k", k}});
    j["map"]["certificate_parts"] = parts;
    j["orbit"] = {{"n", rep.orbit_n},
                  {"residual", rep.orbit_residual},
                  {"diameter", rep.orbit_diameter}};
    j["arrangement"] = {{"vertices", rep.vertices},
                        {"edges", rep.edges},
                        {"faces", rep.faces_total},
                        {"bounded_faces", rep.faces_bounded}};
    nlohmann::json faces = nlohmann::json::array();
    for (const FaceRow& r : rep.face_rows) {
        nlohmann::json f{{"id", r.id},
                         {"bounded", true},
                         {"omega", r.omega},
                         {"orientation_changes", r.orientation_changes},
                         {"comb_index", r.comb_index},
                         {"agree", r.agree},
                         {"area", r.area}};
        if (r.num_ok) f["num_index"] = r.num_index;
        faces.push_back(f);
    }
    if (rep.unbounded_face >= 0)
        faces.push_back({{"id", rep.unbounded_face}, {"bounded", false}, {"omega", 0}});
    j["faces"] = faces;
    j["chosen_face"] = rep.chosen_face;
    if (rep.fixed_point) {
        j["fixed_point"] = {{"x", rep.fixed_point->location.x},
                            {"y", rep.fixed_point->location.y},
                            {"residual", rep.fixed_point->residual},
                            {"box_radius", rep.fixed_point->box_radius},
                            {"degree", rep.fixed_point->degree},
                            {"multiple_zero_regions", rep.fixed_point->multiple_zero_regions},
                            {"subdivisions", rep.fixed_point->subdivisions}};
    }
    if (rep.linking_gamma) {
        j["linking"] = {{"omega", rep.linking_gamma->omega},
                        {"n", rep.linking_gamma->n},
                        {"lk", rep.linking_gamma->lk},
                        {"routes_agree",
                         rep.linking_arc && rep.linking_arc->omega == rep.linking_gamma->omega}};
    }
    nlohmann::json asserts = nlohmann::json::array();
    for (const Assertion& a : rep.assertions)
        asserts.push_back({{"name", a.name},
                           {"pass", a.pass},
                           {"informational", a.informational},
                           {"detail", a.detail}});
    j["assertions"] = asserts;
    j["pass"] = rep.pass;
    return j;
}

inline std::string report_text(const RunReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "map: " << rep.map_description << "\n";
    os << "certificate: k = " << rep.certificate.k
       << (rep.certified ? " (certified)" : " (NOT certified)") << "\n";
    for (const auto& [label, k] : rep.certificate.parts)
        os << "  " << label << ": " << k << "\n";
    os << "orbit: n = " << rep.orbit_n << ", residual = " << rep.orbit_residual
       << ", diameter = " << rep.orbit_diameter << "\n";
    os << "arrangement: V = " << rep.vertices << ", E = " << rep.edges
       << ", F = " << rep.faces_total << " (" << rep.faces_bounded << " bounded)\n";
    os << "faces (id bounded omega 2p comb num agree):\n";
    for (const FaceRow& r : rep.face_rows) {
        os << "  " << r.id << "  yes  " << r.omega << "  " << r.orientation_changes << "  "
           << r.comb_index << "  ";
        if (r.num_ok) os << r.num_index; else os << "-";
        os << "  " << (r.agree ? "yes" : "NO") << "\n";
    }
    if (rep.unbounded_face >= 0)
        os << "  " << rep.unbounded_face << "  no   0  -  -  -  -\n";
    os << "chosen face: " << rep.chosen_face << "\n";
    if (rep.fixed_point) {
        os << "fixed point: (" << rep.fixed_point->location.x << ", "
           << rep.fixed_point->location.y << "), residual = " << rep.fixed_point->residual
           << ", box radius = " << rep.fixed_point->box_radius
           << ", degree = " << rep.fixed_point->degree << "\n";
        if (rep.fixed_point->multiple_zero_regions)
            os << "  note: more than one sub-box carried nonzero degree; "
                  "additional fixed points exist\n";
    }
    if (rep.linking_gamma) {
        os << "linking: omega = " << rep.linking_gamma->omega << ", n = " << rep.linking_gamma->n
           << ", lk = " << rep.linking_gamma->lk;
        if (rep.linking_arc)
            os << " (iterated-arc route "
               << (rep.linking_arc->omega == rep.linking_gamma->omega ? "agrees" : "DISAGREES")
               << ")";
        os << "\n";
    }
    os << "assertions:\n";
    for (const Assertion& a : rep.assertions) {
        os << "  [" << (a.pass ? "pass" : (a.informational ? "fail/informational" : "FAIL"))
           << "] " << a.name;
        if (!a.detail.empty()) os << " -- " << a.detail;
        os << "\n";
    }
    os << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
    os << "elapsed: " << std::fixed << std::setprecision(1) << rep.elapsed_ms << " ms\n";
    return os.str();
}

inline std::string verify_text(const VerifyReport& rep) {
    std::ostringstream os;
    os << "verify: source = " << rep.source << ", seed = " << rep.seed
       << ", trials = " << rep.trials << "\n";
    for (const SuiteResult& s : rep.suites) {
        os << "suite " << s.name << ": ";
        if (s.skipped) {
            os << "SKIPPED (" << s.note << ")";
        } else {
            os << (s.failed == 0 ? "PASS " : (s.informational ? "fail/informational " : "FAIL "))
               << s.passed << "/" << (s.passed + s.failed);
        }
        os << "\n";
        for (const std::string& cx : s.counterexamples) os << "  counterexample: " << cx << "\n";
    }
    os << "overall: "
       << (rep.pass ? (rep.informational_failures ? "PASS (informational failures present)"
                                                  : "PASS")
                    : "FAIL")
       << "\n";
    return os.str();
}

inline nlohmann::json verify_json(const VerifyReport& rep) {
    nlohmann::json j;
    j["seed"] = rep.seed;
    j["trials"] = rep.trials;
    j["source"] = rep.source;
    nlohmann::json suites = nlohmann::json::array();
    for (const SuiteResult& s : rep.suites) {
        suites.push_back({{"name", s.name},
                          {"passed", s.passed},
                          {"failed", s.failed},
                          {"skipped", s.skipped},
                          {"informational", s.informational},
                          {"counterexamples", s.counterexamples}});
    }
    j["suites"] = suites;
    j["pass"] = rep.pass;
    return j;
}

} // namespace linkfix

#endif
