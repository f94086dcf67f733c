#ifndef LINKFIX_TESTUTIL_HPP
#define LINKFIX_TESTUTIL_HPP

#include <cmath>
#include <vector>

#include "linkfix/geom.hpp"
#include "linkfix/util.hpp"

namespace testutil {

constexpr double kPi = 3.14159265358979323846;

inline linkfix::ClosedChain unit_square_ccw() {
    return linkfix::ClosedChain({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

/// Star polygon vertices at angles 2*pi*k*i/n on the unit circle.
inline std::vector<linkfix::Point2> star_points(int k, int n, double radius = 1.0) {
    std::vector<linkfix::Point2> pts;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * kPi * k * i / n;
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return pts;
}

/// Random closed chain (possibly self-intersecting) with vertices in
/// [-1, 1]^2 and pairwise-separated consecutive vertices.
inline linkfix::ClosedChain random_chain(std::uint64_t& state, int min_v = 3, int max_v = 10) {
    int nv = min_v + static_cast<int>(linkfix::splitmix64(state) %
                                      static_cast<std::uint64_t>(max_v - min_v + 1));
    std::vector<linkfix::Point2> pts;
    while (static_cast<int>(pts.size()) < nv) {
        linkfix::Point2 p{2.0 * linkfix::uniform01(state) - 1.0,
                          2.0 * linkfix::uniform01(state) - 1.0};
        bool ok = true;
        if (!pts.empty() && linkfix::distance(pts.back(), p) < 1e-3) ok = false;
        if (static_cast<int>(pts.size()) == nv - 1 && linkfix::distance(pts.front(), p) < 1e-3)
            ok = false;
        if (ok) pts.push_back(p);
    }
    return linkfix::ClosedChain(pts);
}

/// Random point with clearance from the chain.
inline linkfix::Point2 random_point_with_clearance(std::uint64_t& state,
                                                   const linkfix::ClosedChain& chain,
                                                   double clearance) {
    for (;;) {
        linkfix::Point2 p{3.0 * linkfix::uniform01(state) - 1.5,
                          3.0 * linkfix::uniform01(state) - 1.5};
        if (linkfix::min_distance_to_chain(p, chain) >= clearance) return p;
    }
}

} // namespace testutil

#endif
