#ifndef LINKFIX_IO_HPP
#define LINKFIX_IO_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkfix/corpus.hpp"
#include "linkfix/dynmap.hpp"

namespace linkfix {

/// Tolerances and switches a run can override from the input file or the
/// command line.
struct RunOptions {
    double tol = 1e-8;             // fixed-point box tolerance
    double eps_clear_rel = 1e-6;   // loop clearance, x orbit diameter
    std::optional<double> eps_orbit;  // absolute orbit residual tolerance
    bool allow_uncertified = false;
};

/// One self-contained run: a map, an orbit, and options.
struct Input {
    MapSpec map;
    std::vector<Point2> orbit_points;
    RunOptions options;
};

namespace detail {

inline Point2 parse_point(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(std::string(what) + " must be a [x, y] number pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Vec2 parse_vec(const nlohmann::json& j, const char* what) {
    Point2 p = parse_point(j, what);
    return {p.x, p.y};
}

inline MapSpec parse_map(const nlohmann::json& j, const std::vector<Point2>& orbit_points) {
    if (!j.is_object() || j.size() != 1)
        throw ParseError("map node must be an object with exactly one family key");
    const std::string family = j.begin().key();
    const nlohmann::json& body = j.begin().value();

    if (family == "rotation") {
        if (!body.contains("angle") || !body["angle"].is_number())
            throw ParseError("rotation needs a numeric \"angle\"");
        Point2 center = body.contains("center") ? parse_point(body["center"], "rotation center")
                                                : Point2{0.0, 0.0};
        return MapSpec::rotation(center, body["angle"].get<double>());
    }
    if (family == "translation") {
        if (!body.contains("v")) throw ParseError("translation needs a vector \"v\"");
        return MapSpec::translation(parse_vec(body["v"], "translation vector"));
    }
    if (family == "pinned_perturbation") {
        if (!body.contains("base")) throw ParseError("pinned_perturbation needs a \"base\" map");
        MapSpec base = parse_map(body["base"], orbit_points);
        std::vector<Point2> pins;
        if (body.contains("pins")) {
            if (body["pins"].is_string() && body["pins"].get<std::string>() == "orbit") {
                pins = orbit_points;
            } else if (body["pins"].is_array()) {
                for (const auto& p : body["pins"]) pins.push_back(parse_point(p, "pin"));
            } else {
                throw ParseError("\"pins\" must be \"orbit\" or a list of points");
            }
        }
        double pin_radius = 0.0;
        if (!pins.empty()) {
            if (!body.contains("pin_radius") || !body["pin_radius"].is_number())
                throw ParseError("pinned_perturbation with pins needs a numeric \"pin_radius\"");
            pin_radius = body["pin_radius"].get<double>();
        }
        std::vector<Bump> bumps;
        if (!body.contains("bumps") || !body["bumps"].is_array())
            throw ParseError("pinned_perturbation needs a \"bumps\" array");
        for (const auto& bj : body["bumps"]) {
            Bump b;
            b.center = parse_point(bj.at("center"), "bump center");
            if (!bj.contains("radius") || !bj["radius"].is_number())
                throw ParseError("bump needs a numeric \"radius\"");
            b.radius = bj["radius"].get<double>();
            b.displacement = parse_vec(bj.at("displacement"), "bump displacement");
            bumps.push_back(b);
        }
        return MapSpec::pinned_perturbation(std::move(base), std::move(bumps), std::move(pins),
                                            pin_radius);
    }
    if (family == "composition") {
        if (!body.is_array() || body.empty())
            throw ParseError("composition must be a non-empty array of maps");
        std::vector<MapSpec> maps;
        for (const auto& mj : body) maps.push_back(parse_map(mj, orbit_points));
        return MapSpec::composition(std::move(maps));
    }
    throw ParseError("unknown map family \"" + family + "\"");
}

inline std::vector<Point2> parse_orbit(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("\"orbit\" must be an object");
    if (j.contains("points")) {
        if (!j["points"].is_array() || j["points"].size() < 2)
            throw ParseError("orbit points must be an array of at least 2 points");
        std::vector<Point2> pts;
        for (const auto& p : j["points"]) pts.push_back(parse_point(p, "orbit point"));
        return pts;
    }
    if (j.contains("generate")) {
        const nlohmann::json& g = j["generate"];
        if (g.contains("rotation_orbit")) {
            const nlohmann::json& r = g["rotation_orbit"];
            if (!r.contains("k") || !r.contains("n"))
                throw ParseError("rotation_orbit needs integers \"k\" and \"n\"");
            int k = r["k"].get<int>();
            int n = r["n"].get<int>();
            double radius = r.value("radius", 1.0);
            Point2 center = r.contains("center") ? parse_point(r["center"], "orbit center")
                                                 : Point2{0.0, 0.0};
            double phase = r.value("phase", 0.0);
            return rotation_orbit_points(k, n, radius, center, phase);
        }
        throw ParseError("unknown orbit generator");
    }
    throw ParseError("\"orbit\" needs \"points\" or \"generate\"");
}

} // namespace detail

inline Input parse_input(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("input must be a JSON object");
    if (!j.contains("orbit")) throw ParseError("input needs an \"orbit\"");
    if (!j.contains("map")) throw ParseError("input needs a \"map\"");

    std::vector<Point2> pts;
    try {
        pts = detail::parse_orbit(j["orbit"]);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }

    RunOptions opt;
    if (j.contains("options")) {
        const nlohmann::json& o = j["options"];
        if (!o.is_object()) throw ParseError("\"options\" must be an object");
        opt.tol = o.value("tol", opt.tol);
        opt.eps_clear_rel = o.value("eps_clear_rel", opt.eps_clear_rel);
        if (o.contains("eps_orbit")) opt.eps_orbit = o["eps_orbit"].get<double>();
        opt.allow_uncertified = o.value("allow_uncertified", false);
    }

    MapSpec map = [&] {
        try {
            return detail::parse_map(j["map"], pts);
        } catch (const DomainError& e) {
            throw ParseError(e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed map node: ") + e.what());
        }
    }();

    return Input{std::move(map), std::move(pts), opt};
}

inline Input load_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_input(j);
}

} // namespace linkfix

#endif
