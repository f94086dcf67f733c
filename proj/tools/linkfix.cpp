#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "linkfix/io.hpp"
#include "linkfix/pipeline.hpp"
#include "linkfix/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegeneracy = 3;
constexpr int kExitFalsification = 4;

int run_analyze(const std::string& path, std::optional<double> tol, bool allow_uncertified,
                bool json_only) {
    linkfix::Input input = linkfix::load_input(path);
    if (tol) input.options.tol = *tol;
    if (allow_uncertified) input.options.allow_uncertified = true;

    linkfix::RunReport rep = linkfix::analyze(input);
    if (json_only) {
        std::cout << linkfix::report_json(rep).dump(2) << "\n";
    } else {
        std::cout << linkfix::report_text(rep);
        std::cout << "--- report json ---\n";
        std::cout << linkfix::report_json(rep).dump(2) << "\n";
    }
    return rep.pass ? kExitOk : kExitFalsification;
}

int run_verify(const std::string& path, std::uint64_t seed, int trials, bool allow_uncertified,
               bool json_only) {
    linkfix::VerifyReport rep;
    if (path.empty()) {
        linkfix::RunOptions opt;
        opt.allow_uncertified = allow_uncertified;
        rep = linkfix::verify_corpus(seed, trials, opt);
    } else {
        linkfix::Input input = linkfix::load_input(path);
        if (allow_uncertified) input.options.allow_uncertified = true;
        rep = linkfix::verify_input(input, seed, trials);
    }
    if (json_only) {
        std::cout << linkfix::verify_json(rep).dump(2) << "\n";
    } else {
        std::cout << linkfix::verify_text(rep);
    }
    return rep.pass ? kExitOk : kExitFalsification;
}

int run_render(const std::string& path, const std::string& out_path, bool allow_uncertified) {
    linkfix::Input input = linkfix::load_input(path);
    if (allow_uncertified) input.options.allow_uncertified = true;

    linkfix::RunReport rep = linkfix::analyze(input);
    linkfix::PeriodicOrbit orbit =
        linkfix::validate_orbit(input.map, input.orbit_points,
                                input.options.eps_orbit ? *input.options.eps_orbit : -1.0);
    linkfix::OrbitPolygon gamma = linkfix::build_gamma(orbit);
    linkfix::Arrangement arr = linkfix::build_arrangement(gamma);
    linkfix::face_windings(arr, gamma);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot open output file: " << out_path << "\n";
        return kExitError;
    }
    linkfix::render_svg(arr, gamma, rep.face_rows, rep.fixed_point, out);
    if (!out.good()) {
        std::cerr << "error: failed writing " << out_path << "\n";
        return kExitError;
    }
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linkfix: fixed points linked to periodic orbits of plane "
                 "homeomorphisms with displacement Lipschitz constant at most 1"};
    app.require_subcommand(1);

    std::string analyze_file, verify_file, render_file, render_out;
    std::optional<double> tol;
    bool allow_uncertified = false, json_only = false;
    std::uint64_t seed = 42;
    int trials = 100;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "run the full pipeline and report the linked fixed point");
    analyze->add_option("file", analyze_file, "input JSON file")->required();
    analyze->add_option("--tol", tol, "fixed-point box tolerance (default 1e-8)");
    analyze->add_flag("--allow-uncertified", allow_uncertified,
                      "run maps with certificate k > 1; guarantee assertions become informational");
    analyze->add_flag("--json", json_only, "emit the machine-readable report only");

    CLI::App* verify = app.add_subcommand(
        "verify", "run randomized property suites on an input or the builtin corpus");
    verify->add_option("file", verify_file, "input JSON file (omit to use the builtin corpus)");
    verify->add_option("--seed", seed, "random seed (default 42)");
    verify->add_option("--trials", trials, "randomized trials per suite (default 100)");
    verify->add_flag("--allow-uncertified", allow_uncertified,
                     "report violations informationally for maps with k > 1");
    verify->add_flag("--json", json_only, "emit the machine-readable report only");

    CLI::App* render = app.add_subcommand("render", "write an SVG diagnostic of a run");
    render->add_option("file", render_file, "input JSON file")->required();
    render->add_option("-o,--output", render_out, "output SVG path")->required();
    render->add_flag("--allow-uncertified", allow_uncertified,
                     "render maps with certificate k > 1");

    CLI11_PARSE(app, argc, argv);

    try {
        if (const char* env_seed = std::getenv("LINKFIX_SEED"))
            seed = std::strtoull(env_seed, nullptr, 10);

        if (analyze->parsed())
            return run_analyze(analyze_file, tol, allow_uncertified, json_only);
        if (verify->parsed())
            return run_verify(verify_file, seed, trials, allow_uncertified, json_only);
        if (render->parsed())
            return run_render(render_file, render_out, allow_uncertified);
    } catch (const linkfix::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const linkfix::CertificateError& e) {
        std::cerr << "certificate error: " << e.what() << "\n";
        return kExitInput;
    } catch (const linkfix::DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const linkfix::DegeneracyError& e) {
        std::cerr << "degeneracy: " << e.what() << "\n";
        return kExitDegeneracy;
    } catch (const linkfix::ClearanceError& e) {
        std::cerr << "degeneracy: " << e.what() << "\n";
        return kExitDegeneracy;
    } catch (const linkfix::FalsificationError& e) {
        std::cerr << "falsification: " << e.what() << "\n";
        return kExitFalsification;
    } catch (const linkfix::InternalError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitFalsification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
