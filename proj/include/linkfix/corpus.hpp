#ifndef LINKFIX_CORPUS_HPP
#define LINKFIX_CORPUS_HPP

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "linkfix/dynmap.hpp"
#include "linkfix/geom.hpp"

namespace linkfix {

/// A ready-to-run test case: a certified map together with one of its
/// periodic orbits, in dynamical order.
struct TestCase {
    std::string name;
    MapSpec map;
    std::vector<Point2> orbit_points;
};

/// Orbit of the rotation by 2 pi k / n: n points on a circle visited with
/// step k. The first point sits at `phase`.
inline std::vector<Point2> rotation_orbit_points(int k, int n, double radius, Point2 center,
                                                 double phase = 0.0) {
    if (n < 2 || k <= 0 || k >= n) throw DomainError("rotation orbit needs 0 < k < n, n >= 2");
    if (std::gcd(k, n) != 1)
        throw DomainError("rotation orbit needs gcd(k, n) = 1 for a minimal period");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    constexpr double two_pi = 2.0 * 3.14159265358979323846;
    for (int i = 0; i < n; ++i) {
        double a = phase + two_pi * k * i / n;
        pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return pts;
}

inline TestCase rotation_case(int k, int n, double radius = 1.0, Point2 center = {0.0, 0.0},
                              double phase = 0.0) {
    constexpr double two_pi = 2.0 * 3.14159265358979323846;
    TestCase tc{
        "rotation_k" + std::to_string(k) + "_n" + std::to_string(n),
        MapSpec::rotation(center, two_pi * k / n),
        rotation_orbit_points(k, n, radius, center, phase),
    };
    return tc;
}

/// Rotation base with a few compactly supported bumps pinned on the orbit,
/// keeping the total displacement Lipschitz bound at or below `k_budget`.
inline TestCase perturbed_rotation_case(int k, int n, std::uint64_t seed, double radius = 1.0,
                                        Point2 center = {0.0, 0.0}, double k_budget = 1.0) {
    constexpr double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<Point2> pts = rotation_orbit_points(k, n, radius, center);
    MapSpec base = MapSpec::rotation(center, two_pi * k / n);
    double k_rot = base.lip_bound().k;
    double budget = (k_budget - k_rot) * 0.9;
    if (budget <= 0.0) throw DomainError("no Lipschitz budget left for bumps");

    double pin_radius = 0.5 * radius;
    double pin_sum = static_cast<double>(n) / pin_radius;

    std::uint64_t state = seed;
    int n_bumps = 1 + static_cast<int>(splitmix64(state) % 3);
    std::vector<Bump> bumps;
    for (int b = 0; b < n_bumps; ++b) {
        double r_b = radius * (0.3 + 0.5 * uniform01(state));
        double ang = two_pi * uniform01(state);
        double dist = radius * 0.7 * uniform01(state);
        Point2 c{center.x + dist * std::cos(ang), center.y + dist * std::sin(ang)};
        double share = budget / n_bumps;
        // ||v|| (1/r_b + pin_sum) = share
        double vmag = share / (1.0 / r_b + pin_sum);
        double vang = two_pi * uniform01(state);
        bumps.push_back({c, r_b, {vmag * std::cos(vang), vmag * std::sin(vang)}});
    }

    TestCase tc{
        "perturbed_k" + std::to_string(k) + "_n" + std::to_string(n) + "_s" + std::to_string(seed),
        MapSpec::pinned_perturbation(std::move(base), std::move(bumps), pts, pin_radius),
        pts,
    };
    return tc;
}

/// The standard corpus: pure rotations with certificate k <= 1 (angle up to
/// a sixth of a turn) in assorted geometries, plus pinned perturbations that
/// keep the total bound at 1. At least 50 cases.
inline std::vector<TestCase> standard_corpus(std::uint64_t seed = 42) {
    std::vector<TestCase> cases;
    // rotations: 2 |sin(pi k / n)| <= 1 requires k/n <= 1/6
    for (int n = 6; n <= 29; ++n) cases.push_back(rotation_case(1, n));
    for (int n : {13, 15, 17, 19, 21}) cases.push_back(rotation_case(2, n));
    for (int n : {19, 20, 23}) cases.push_back(rotation_case(3, n));
    // varied geometry
    cases.push_back(rotation_case(1, 6, 2.5, {1.5, -0.75}, 0.3));
    cases.push_back(rotation_case(2, 13, 0.5, {-2.0, 1.0}, 1.1));
    cases.push_back(rotation_case(1, 9, 3.0, {0.0, 4.0}, 2.0));
    // pinned perturbations
    int idx = 0;
    for (auto [k, n] : std::vector<std::pair<int, int>>{
             {1, 6}, {1, 7}, {1, 8}, {1, 9}, {1, 10}, {1, 11}, {1, 12}, {2, 13},
             {1, 6}, {1, 7}, {1, 9}, {2, 13}, {1, 8}, {1, 10}, {2, 15}, {1, 12}}) {
        cases.push_back(perturbed_rotation_case(k, n, seed + 1000 + idx));
        ++idx;
    }
    return cases;
}

} // namespace linkfix

#endif
