#ifndef LINKFIX_DYNMAP_HPP
#define LINKFIX_DYNMAP_HPP

#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "linkfix/geom.hpp"

namespace linkfix {

class MapSpec;

/// Compactly supported displacement added on top of a base map. The bump
/// vanishes outside `radius` around `center` and at every pinned point it is
/// constructed against, so pinned orbits stay orbits of the perturbed map.
struct Bump {
    Point2 center;
    double radius = 0.0;
    Vec2 displacement;
};

struct RotationSpec {
    Point2 center;
    double angle = 0.0;  // radians, normalized into (-pi, pi]
    double cos_a = 1.0;
    double sin_a = 0.0;
};

struct TranslationSpec {
    Vec2 v;
};

struct PinnedPerturbationSpec {
    std::shared_ptr<const MapSpec> base;
    std::vector<Bump> bumps;
    std::vector<Point2> pins;
    double pin_radius = 0.0;
};

struct CompositionSpec {
    std::vector<std::shared_ptr<const MapSpec>> maps;  // applied left to right
};

/// Analytic upper bound on the Lipschitz constant of the displacement
/// field f - Id, with a per-component breakdown for diagnostics.
struct LipschitzCertificate {
    double k = 0.0;
    std::vector<std::pair<std::string, double>> parts;
};

/// A plane homeomorphism assembled from certified families. Immutable after
/// construction; evaluation is pure, safe for concurrent use.
class MapSpec {
public:
    static MapSpec rotation(Point2 center, double angle) {
        if (!std::isfinite(angle)) throw DomainError("rotation angle not finite");
        constexpr double pi = 3.14159265358979323846;
        double a = std::remainder(angle, 2.0 * pi);  // (-pi, pi]
        if (a <= -pi) a = pi;
        RotationSpec r{center, a, std::cos(a), std::sin(a)};
        return MapSpec(std::move(r));
    }

    static MapSpec translation(Vec2 v) {
        if (!finite(v)) throw DomainError("translation vector not finite");
        return MapSpec(TranslationSpec{v});
    }

    static MapSpec pinned_perturbation(MapSpec base, std::vector<Bump> bumps,
                                       std::vector<Point2> pins, double pin_radius) {
        for (const Bump& b : bumps)
            if (!(b.radius > 0.0)) throw DomainError("bump radius must be positive");
        if (!pins.empty() && !(pin_radius > 0.0))
            throw DomainError("pin radius must be positive when pins are given");
        PinnedPerturbationSpec s;
        s.base = std::make_shared<const MapSpec>(std::move(base));
        s.bumps = std::move(bumps);
        s.pins = std::move(pins);
        s.pin_radius = pin_radius;
        return MapSpec(std::move(s));
    }

    static MapSpec composition(std::vector<MapSpec> maps) {
        if (maps.empty()) throw DomainError("composition of zero maps");
        CompositionSpec spec;
        spec.maps.reserve(maps.size());
        for (MapSpec& m : maps)
            spec.maps.push_back(std::make_shared<const MapSpec>(std::move(m)));
        return MapSpec(std::move(spec));
    }

    Point2 eval(Point2 p) const {
        if (const auto* r = std::get_if<RotationSpec>(&v_)) {
            double dx = p.x - r->center.x, dy = p.y - r->center.y;
            return {r->center.x + r->cos_a * dx - r->sin_a * dy,
                    r->center.y + r->sin_a * dx + r->cos_a * dy};
        }
        if (const auto* t = std::get_if<TranslationSpec>(&v_)) return p + t->v;
        if (const auto* pp = std::get_if<PinnedPerturbationSpec>(&v_)) {
            Point2 q = pp->base->eval(p);
            for (const Bump& b : pp->bumps) q = q + bump_displacement(*pp, b, p);
            return q;
        }
        const auto& c = std::get<CompositionSpec>(v_);
        for (const auto& m : c.maps) p = m->eval(p);
        return p;
    }

    /// Displacement field d(p) = f(p) - p.
    Vec2 displacement(Point2 p) const { return eval(p) - p; }

    LipschitzCertificate lip_bound() const {
        LipschitzCertificate cert;
        if (const auto* r = std::get_if<RotationSpec>(&v_)) {
            cert.k = 2.0 * std::abs(std::sin(r->angle / 2.0));
            cert.parts.emplace_back("rotation", cert.k);
            return cert;
        }
        if (std::get_if<TranslationSpec>(&v_)) {
            cert.k = 0.0;
            cert.parts.emplace_back("translation", 0.0);
            return cert;
        }
        if (const auto* pp = std::get_if<PinnedPerturbationSpec>(&v_)) {
            cert = pp->base->lip_bound();
            double pin_sum = 0.0;
            for (std::size_t j = 0; j < pp->pins.size(); ++j) pin_sum += 1.0 / pp->pin_radius;
            for (const Bump& b : pp->bumps) {
                double kb = b.displacement.norm() * (1.0 / b.radius + pin_sum);
                cert.k += kb;
                cert.parts.emplace_back("bump", kb);
            }
            return cert;
        }
        // (g o f) - Id = (g - Id) o f + (f - Id):  k = k_g (1 + k_f) + k_f
        const auto& c = std::get<CompositionSpec>(v_);
        double acc = 0.0;
        bool first = true;
        for (const auto& m : c.maps) {
            LipschitzCertificate part = m->lip_bound();
            acc = first ? part.k : part.k * (1.0 + acc) + acc;
            first = false;
            cert.parts.emplace_back("composition factor", part.k);
        }
        cert.k = acc;
        cert.parts.emplace_back("composition total", acc);
        return cert;
    }

    /// Upper bound on the Lipschitz constant of f itself (not f - Id).
    /// Tight for isometries; used to certify how iterates stretch arcs.
    double map_lip_bound() const {
        if (std::get_if<RotationSpec>(&v_)) return 1.0;
        if (std::get_if<TranslationSpec>(&v_)) return 1.0;
        if (const auto* pp = std::get_if<PinnedPerturbationSpec>(&v_)) {
            double k = pp->base->map_lip_bound();
            double pin_sum = 0.0;
            for (std::size_t j = 0; j < pp->pins.size(); ++j) pin_sum += 1.0 / pp->pin_radius;
            for (const Bump& b : pp->bumps)
                k += b.displacement.norm() * (1.0 / b.radius + pin_sum);
            return k;
        }
        const auto& c = std::get<CompositionSpec>(v_);
        double k = 1.0;
        for (const auto& m : c.maps) k *= m->map_lip_bound();
        return k;
    }

    std::string family_name() const {
        if (std::get_if<RotationSpec>(&v_)) return "rotation";
        if (std::get_if<TranslationSpec>(&v_)) return "translation";
        if (std::get_if<PinnedPerturbationSpec>(&v_)) return "pinned_perturbation";
        return "composition";
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(12);
        if (const auto* r = std::get_if<RotationSpec>(&v_)) {
            os << "rotation(center=(" << r->center.x << "," << r->center.y
               << "), angle=" << r->angle << ")";
        } else if (const auto* t = std::get_if<TranslationSpec>(&v_)) {
            os << "translation(" << t->v.x << "," << t->v.y << ")";
        } else if (const auto* pp = std::get_if<PinnedPerturbationSpec>(&v_)) {
            os << "pinned_perturbation(base=" << pp->base->describe()
               << ", bumps=" << pp->bumps.size() << ", pins=" << pp->pins.size() << ")";
        } else {
            const auto& c = std::get<CompositionSpec>(v_);
            os << "composition[";
            for (std::size_t i = 0; i < c.maps.size(); ++i)
                os << (i ? ", " : "") << c.maps[i]->describe();
            os << "]";
        }
        return os.str();
    }

    const RotationSpec* as_rotation() const { return std::get_if<RotationSpec>(&v_); }

private:
    template <class T>
    explicit MapSpec(T&& spec) : v_(std::forward<T>(spec)) {}

    static Vec2 bump_displacement(const PinnedPerturbationSpec& pp, const Bump& b, Point2 p) {
        double w = 1.0 - distance(p, b.center) / b.radius;
        if (w <= 0.0) return {0.0, 0.0};
        for (Point2 pin : pp.pins) {
            double f = distance(p, pin) / pp.pin_radius;
            w *= std::min(1.0, f);
            if (w == 0.0) return {0.0, 0.0};
        }
        return b.displacement * w;
    }

    std::variant<RotationSpec, TranslationSpec, PinnedPerturbationSpec, CompositionSpec> v_;
};

/// Validated periodic orbit: n distinct points with f(points[i]) within
/// eps_orbit of points[i+1 mod n] and no proper sub-period.
struct PeriodicOrbit {
    std::vector<Point2> points;
    double residual = 0.0;
    double eps_orbit = 0.0;

    int period() const { return static_cast<int>(points.size()); }
    double diameter() const { return bounding_box(points).diagonal(); }
};

/// Checks that `points` is a genuine periodic orbit of `map` in listed
/// order: residual within tolerance, points pairwise separated, minimal
/// period. eps_orbit defaults to 1e-9 x orbit diameter.
inline PeriodicOrbit validate_orbit(const MapSpec& map, const std::vector<Point2>& points,
                                    double eps_orbit = -1.0) {
    const std::size_t n = points.size();
    if (n < 2) throw DomainError("orbit needs period >= 2");
    for (Point2 p : points)
        if (!finite(p)) throw DomainError("orbit point not finite");

    double diam = bounding_box(points).diagonal();
    if (eps_orbit < 0.0) eps_orbit = 1e-9 * diam;
    if (!(eps_orbit > 0.0)) throw DomainError("orbit has zero diameter");

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = distance(map.eval(points[i]), points[(i + 1) % n]);
        residual = std::max(residual, r);
    }
    if (residual > eps_orbit) {
        std::ostringstream os;
        os << "orbit residual " << residual << " exceeds tolerance " << eps_orbit
           << " (points are not an orbit of this map in the given order)";
        throw DomainError(os.str());
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(points[i], points[j]) <= 10.0 * eps_orbit)
                throw DomainError("orbit points duplicate or nearly coincide");

    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, distance(points[(i + d) % n], points[i]));
        if (worst <= 10.0 * eps_orbit)
            throw DomainError("orbit has a proper sub-period; period is not minimal");
    }

    return PeriodicOrbit{points, residual, eps_orbit};
}

/// Result of sampling one of the displacement-field checks along the
/// segment [x, f(x)].
struct SegmentCheckReport {
    bool pass = true;
    int samples = 0;
    double min_displacement = 0.0;   // min ||d(y)|| observed
    double min_certified_bound = 0.0;  // min of ||d(x)|| - k||x-y||
    double max_angle = 0.0;          // max unoriented angle (d(x), d(y))
    Point2 counterexample;
    std::string detail;
};

/// Verifies along [x, f(x)] that the displacement never vanishes: at each
/// sample y, the certified lower bound ||d(x)|| - k||x-y|| must stay
/// positive and ||d(y)|| must respect it. For certified maps (k <= 1) this
/// can only fail if the library or the certificate is broken. With
/// `informational`, maps with k > 1 are accepted and violations are
/// reported instead of indicating a bug.
inline SegmentCheckReport check_segment_clearance(const MapSpec& map, Point2 x,
                                                  int samples, bool informational = false) {
    LipschitzCertificate cert = map.lip_bound();
    if (!informational && cert.k > 1.0)
        throw CertificateError("segment clearance check requires certificate k <= 1");
    if (samples < 2) throw DomainError("need at least 2 samples");

    Vec2 dx = map.displacement(x);
    double dx_norm = dx.norm();
    if (dx_norm == 0.0) throw DomainError("x is a fixed point");
    Point2 fx = map.eval(x);

    SegmentCheckReport rep;
    rep.samples = samples;
    rep.min_displacement = dx_norm;
    rep.min_certified_bound = dx_norm;
    double slack = 1e-9 * dx_norm * (1.0 + cert.k);

    for (int i = 0; i < samples; ++i) {
        double t = static_cast<double>(i) / samples;  // [0, 1)
        Point2 y = lerp(x, fx, t);
        double dy_norm = map.displacement(y).norm();
        double bound = dx_norm - cert.k * distance(x, y);
        rep.min_displacement = std::min(rep.min_displacement, dy_norm);
        rep.min_certified_bound = std::min(rep.min_certified_bound, bound);
        bool ok = bound > 0.0 && dy_norm >= bound - slack && dy_norm > 0.0;
        if (!ok && rep.pass) {
            rep.pass = false;
            rep.counterexample = y;
            std::ostringstream os;
            os << "at t=" << t << ": ||d(y)||=" << dy_norm << ", certified bound=" << bound;
            rep.detail = os.str();
        }
    }
    return rep;
}

/// Verifies along [x, f(x)] that the displacement direction never turns by
/// a right angle or more from d(x): dot(d(x), d(y)) must stay positive.
inline SegmentCheckReport check_displacement_angle(const MapSpec& map, Point2 x,
                                                   int samples, bool informational = false) {
    LipschitzCertificate cert = map.lip_bound();
    if (!informational && cert.k > 1.0)
        throw CertificateError("displacement angle check requires certificate k <= 1");
    if (samples < 2) throw DomainError("need at least 2 samples");

    Vec2 dx = map.displacement(x);
    if (dx.norm() == 0.0) throw DomainError("x is a fixed point");
    Point2 fx = map.eval(x);

    SegmentCheckReport rep;
    rep.samples = samples;
    for (int i = 0; i < samples; ++i) {
        double t = static_cast<double>(i) / samples;
        Point2 y = lerp(x, fx, t);
        Vec2 dy = map.displacement(y);
        double angle = dy.norm() == 0.0 ? 3.14159265358979323846 : angle_between(dx, dy);
        rep.max_angle = std::max(rep.max_angle, angle);
        bool ok = dy.norm() > 0.0 && dot(dx, dy) > 0.0;
        if (!ok && rep.pass) {
            rep.pass = false;
            rep.counterexample = y;
            std::ostringstream os;
            os << "at t=" << t << ": dot(d(x),d(y))=" << dot(dx, dy) << ", angle=" << angle;
            rep.detail = os.str();
        }
    }
    return rep;
}

} // namespace linkfix

#endif
