// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "linkfix/corpus.hpp"
#include "linkfix/fixpoint.hpp"
#include "linkfix/index.hpp"
#include "linkfix/linking.hpp"
#include "linkfix/pipeline.hpp"

using namespace linkfix;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CaseRun {
    TestCase tc;
    double k = 0.0;
    PeriodicOrbit orbit;
    Arrangement arr;
    std::vector<FaceIndex> indices;
    int chosen = -1;
    FixedPointResult fp;
    std::vector<SubdivisionRecord> trace;
    LinkingResult via_gamma;
    LinkingResult via_arc;
};

/// Full pipeline over the corpus, executed once and shared by the criteria.
std::vector<CaseRun> run_corpus(const std::vector<TestCase>& corpus, double tol) {
    std::vector<CaseRun> runs;
    for (const TestCase& tc : corpus) {
        double k = tc.map.lip_bound().k;
        PeriodicOrbit orbit = validate_orbit(tc.map, tc.orbit_points);
        OrbitPolygon gamma = build_gamma(orbit);
        Arrangement arr = build_arrangement(gamma);
        face_windings(arr, gamma);
        std::vector<FaceIndex> indices = compute_face_indices(tc.map, arr, tc.map.lip_bound());
        int chosen = positive_index_face(arr, indices);
        std::vector<SubdivisionRecord> trace;
        FixedPointResult fp =
            locate_fixed_point(tc.map, arr, chosen, tc.map.lip_bound(), tol, &trace);
        LinkingResult via_gamma = linking_number(fp.location, orbit, tc.map, LoopRoute::gamma);
        LinkingResult via_arc =
            linking_number(fp.location, orbit, tc.map, LoopRoute::straight_arc);
        runs.push_back(CaseRun{tc, k, std::move(orbit), std::move(arr), std::move(indices),
                               chosen, fp, std::move(trace), via_gamma, via_arc});
    }
    return runs;
}

ArcChain random_detour_arc(std::uint64_t& state, const PeriodicOrbit& orbit, Point2 x0) {
    BoundingBox bb = bounding_box(orbit.points);
    double pad = 0.3 * bb.diagonal();
    double clearance = 0.05 * orbit.diameter();
    for (;;) {
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
        bool clear = true;
        for (std::size_t i = 0; i + 1 < vs.size(); ++i)
            if (point_segment_distance(x0, {vs[i], vs[i + 1]}) < clearance) clear = false;
        if (clear) return ArcChain::make(vs);
    }
}

struct RunnerState {
    std::vector<CaseRun> runs;
    int failures = 0;
};

void report(RunnerState& st, int id, const std::string& name, bool pass,
            const std::string& detail) {
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << " -- " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++st.failures;
}

} // namespace

int main() {
    RunnerState st;
    const double tol = 1e-8;
    std::vector<TestCase> corpus = standard_corpus();

    // 1. worked rotation examples, exact integers, under a second each
    try {
        auto t0 = std::chrono::steady_clock::now();
        TestCase hex = rotation_case(1, 6);
        RunReport hex_rep = analyze(hex.map, hex.orbit_points);
        double hex_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0).count();

        auto t1 = std::chrono::steady_clock::now();
        TestCase star = rotation_case(2, 13);
        RunReport star_rep = analyze(star.map, star.orbit_points);
        double star_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t1).count();

        bool pass = hex_rep.pass && star_rep.pass && hex_rep.fixed_point &&
                    distance(hex_rep.fixed_point->location, {0, 0}) <= 1e-8 &&
                    hex_rep.linking_gamma && hex_rep.linking_gamma->lk == 1 &&
                    star_rep.linking_gamma && star_rep.linking_gamma->lk == 2 &&
                    hex_ms < 1000.0 && star_ms < 1000.0;
        std::ostringstream os;
        os << "lk(1,6)=" << (hex_rep.linking_gamma ? hex_rep.linking_gamma->lk : -999)
           << " lk(2,13)=" << (star_rep.linking_gamma ? star_rep.linking_gamma->lk : -999)
           << ", " << static_cast<int>(hex_ms) << "ms / " << static_cast<int>(star_ms) << "ms";
        report(st, 1, "rotation examples reproduce the known linking numbers", pass, os.str());
    } catch (const std::exception& e) {
        report(st, 1, "rotation examples reproduce the known linking numbers", false, e.what());
    }

    // shared corpus runs for criteria 2, 3, 5, 9
    try {
        st.runs = run_corpus(corpus, tol);
    } catch (const std::exception& e) {
        report(st, 2, "corpus pipeline", false, std::string("corpus run failed: ") + e.what());
        return 1;
    }

    // 2. combinatorial index equals integral index on every bounded face
    {
        int faces = 0, mismatches = 0;
        for (const CaseRun& run : st.runs) {
            for (const FaceIndex& fi : run.indices) {
                ++faces;
                if (fi.comb_index != fi.num_index) ++mismatches;
            }
        }
        std::ostringstream os;
        os << st.runs.size() << " cases, " << faces << " faces, " << mismatches
           << " mismatches";
        report(st, 2, "index formula agreement across the certified corpus",
               st.runs.size() >= 50 && mismatches == 0, os.str());
    }

    // 3. maximal-winding face has positive index; the fixed point is found
    //    with certified residual; linking number nonzero
    {
        int bad = 0;
        std::string first_bad;
        for (const CaseRun& run : st.runs) {
            int comb = 0;
            for (const FaceIndex& fi : run.indices)
                if (fi.face == run.chosen) comb = fi.comb_index;
            bool ok = comb >= 1 && run.fp.degree != 0 &&
                      run.fp.residual <= 2.0 * (1.0 + run.k) * tol &&
                      run.via_gamma.lk != 0 && run.via_arc.lk != 0;
            if (!ok) {
                ++bad;
                if (first_bad.empty()) first_bad = run.tc.name;
            }
        }
        report(st, 3, "positive-index face yields a linked fixed point on every case", bad == 0,
               bad == 0 ? std::to_string(st.runs.size()) + " cases"
                        : "first failure: " + first_bad);
    }

    // 4. arc independence: 100 randomized arc pairs per map
    {
        long long trials = 0, bad = 0;
        std::uint64_t state = 0x9e3779b97f4a7c15ULL;
        std::string first_bad;
        for (const CaseRun& run : st.runs) {
            for (int t = 0; t < 100; ++t) {
                ArcChain c1 = random_detour_arc(state, run.orbit, run.fp.location);
                ArcChain c2 = random_detour_arc(state, run.orbit, run.fp.location);
                ArcIndependenceReport r =
                    arc_independence_check(run.tc.map, run.orbit, c1, c2, run.fp.location);
                ++trials;
                if (!r.pass) {
                    ++bad;
                    if (first_bad.empty()) first_bad = run.tc.name;
                }
            }
        }
        std::ostringstream os;
        os << trials << " arc pairs";
        if (bad) os << ", " << bad << " failures, first in " << first_bad;
        report(st, 4, "loop winding differences lie in nZ and match the connecting winding",
               bad == 0, os.str());
    }

    // 5. winding through the iterated arc equals winding through the orbit
    //    polygon, within the n-1 bound
    {
        int bad = 0;
        for (const CaseRun& run : st.runs) {
            bool ok = run.via_gamma.omega == run.via_arc.omega &&
                      run.via_gamma.lk == run.via_arc.lk &&
                      std::abs(run.via_gamma.omega) <= run.orbit.period() - 1;
            if (!ok) ++bad;
        }
        report(st, 5, "both loop routes give the same winding, bounded by n - 1", bad == 0,
               std::to_string(st.runs.size()) + " cases");
    }

    // 6. displacement checks with 100 samples per orbit segment; the
    //    half-turn rotation is the negative control
    {
        long long checks = 0, bad = 0;
        for (const CaseRun& run : st.runs) {
            for (Point2 x : run.orbit.points) {
                SegmentCheckReport c = check_segment_clearance(run.tc.map, x, 100);
                SegmentCheckReport a = check_displacement_angle(run.tc.map, x, 100);
                ++checks;
                if (!c.pass || !a.pass) ++bad;
            }
        }
        MapSpec half_turn = MapSpec::rotation({0, 0}, kPi);
        bool control_fails = !check_segment_clearance(half_turn, {1, 0}, 100, true).pass &&
                             !check_displacement_angle(half_turn, {1, 0}, 100, true).pass;
        std::ostringstream os;
        os << checks << " segments, " << bad << " violations; negative control "
           << (control_fails ? "detected" : "MISSED");
        report(st, 6, "displacement bounds hold on every orbit segment", bad == 0 && control_fails,
               os.str());
    }

    // 7. winding oracle agreement on 1000 random polygon/point pairs
    {
        std::uint64_t state = 20240817;
        int bad = 0, done = 0;
        while (done < 1000) {
            int nv = 3 + static_cast<int>(splitmix64(state) % 8);
            std::vector<Point2> pts;
            while (static_cast<int>(pts.size()) < nv) {
                Point2 p{2 * uniform01(state) - 1, 2 * uniform01(state) - 1};
                if (!pts.empty() && distance(pts.back(), p) < 1e-3) continue;
                if (static_cast<int>(pts.size()) == nv - 1 &&
                    distance(pts.front(), p) < 1e-3)
                    continue;
                pts.push_back(p);
            }
            ClosedChain chain(pts);
            Point2 q{3 * uniform01(state) - 1.5, 3 * uniform01(state) - 1.5};
            if (min_distance_to_chain(q, chain) < 5e-3) continue;
            if (winding_anglesum(chain, q) != winding_via_ray(chain, q)) ++bad;
            ++done;
        }
        report(st, 7, "ray-crossing winding equals angle-sum winding on 1000 random pairs",
               bad == 0, bad == 0 ? "1000 pairs" : std::to_string(bad) + " disagreements");
    }

    // 8. byte-identical verify reports for a fixed seed
    {
        const char* bin = std::getenv("LINKFIX_BIN");
        if (!bin) {
            report(st, 8, "verify --seed 42 is byte-deterministic", false,
                   "LINKFIX_BIN not set; run through ctest");
        } else {
            auto capture = [&](const std::string& cmd) {
                std::string out;
                FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
                if (!pipe) return out;
                std::array<char, 4096> buf{};
                std::size_t n;
                while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
                    out.append(buf.data(), n);
                pclose(pipe);
                return out;
            };
            std::string cmd = std::string(bin) + " verify --seed 42";
            std::string a = capture(cmd);
            std::string b = capture(cmd);
            bool pass = !a.empty() && a == b && a.find("overall: PASS") != std::string::npos;
            report(st, 8, "verify --seed 42 is byte-deterministic", pass,
                   std::to_string(a.size()) + " bytes");
        }
    }

    // 9. degree additivity at every subdivision step of every corpus run
    {
        long long steps = 0, bad = 0;
        for (const CaseRun& run : st.runs) {
            for (const SubdivisionRecord& rec : run.trace) {
                ++steps;
                int sum = rec.child_degrees[0] + rec.child_degrees[1] + rec.child_degrees[2] +
                          rec.child_degrees[3];
                if (sum != rec.parent_degree) ++bad;
            }
        }
        report(st, 9, "child degrees sum to the parent degree at every subdivision", bad == 0,
               std::to_string(steps) + " subdivision steps");
    }

    if (st.failures == 0) {
        std::cout << "acceptance: all criteria PASS" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << st.failures << " criteria FAILED" << std::endl;
    return 1;
}
