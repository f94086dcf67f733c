#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "linkfix/svg.hpp"
#include "testutil.hpp"

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string binary_path() {
    const char* bin = std::getenv("LINKFIX_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "LINKFIX_BIN must point at the linkfix binary (set by ctest)");
    return bin;
}

std::string data_dir() {
    const char* dir = std::getenv("LINKFIX_DATA_DIR");
    REQUIRE_MESSAGE(dir != nullptr, "LINKFIX_DATA_DIR must point at tests/data (set by ctest)");
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("analyze exits 0 on the worked examples") {
    CmdResult hex = run_cmd(binary_path() + " analyze " + data_dir() + "/hexagon.json");
    CHECK(hex.exit_code == 0);
    CHECK(hex.out.find("lk = 1") != std::string::npos);

    CmdResult star = run_cmd(binary_path() + " analyze " + data_dir() + "/star13.json --json");
    CHECK(star.exit_code == 0);
    CHECK(star.out.find("\"lk\": 2") != std::string::npos);
}

TEST_CASE("exit code contract") {
    std::string bin = binary_path();
    std::string dir = data_dir();

    // 2: unparseable input
    CHECK(run_cmd(bin + " analyze /nonexistent.json").exit_code == 2);
    // 2: certificate above 1 without the override
    CmdResult comp = run_cmd(bin + " analyze " + dir + "/overcomposed.json");
    CHECK(comp.exit_code == 2);
    CHECK(comp.out.find("breakdown") != std::string::npos);
    // 3: degenerate two-point orbit reaches the arrangement and fails there
    CHECK(run_cmd(bin + " render " + dir + "/half_turn.json --allow-uncertified -o /tmp/_h.svg")
              .exit_code == 3);
    // 0: informational mode turns certificate failures into reports
    CHECK(run_cmd(bin + " verify " + dir + "/half_turn.json --allow-uncertified --trials 5")
              .exit_code == 0);
}

TEST_CASE("verify is byte-deterministic for a fixed seed") {
    std::string cmd = binary_path() + " verify --seed 42 --trials 30";
    CmdResult a = run_cmd(cmd);
    CmdResult b = run_cmd(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    // the environment variable overrides the flag
    CmdResult c = run_cmd("LINKFIX_SEED=43 " + cmd);
    CHECK(c.exit_code == 0);
    CHECK(c.out.find("seed = 43") != std::string::npos);
}

TEST_CASE("render writes the golden SVG") {
    std::string out_path = "/tmp/linkfix_hexagon_test.svg";
    CmdResult r =
        run_cmd(binary_path() + " render " + data_dir() + "/hexagon.json -o " + out_path);
    REQUIRE(r.exit_code == 0);
    std::string svg = slurp(out_path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("w=1 ind=1") != std::string::npos);   // face label
    CHECK(svg.find("#cc0000") != std::string::npos);      // fixed point marker
    CHECK(svg == slurp(data_dir() + "/hexagon.golden.svg"));
}

TEST_CASE("render labels every bounded face of the star") {
    std::string out_path = "/tmp/linkfix_star_test.svg";
    CmdResult r = run_cmd(binary_path() + " render " + data_dir() + "/star13.json -o " + out_path);
    REQUIRE(r.exit_code == 0);
    std::string svg = slurp(out_path);
    std::size_t labels = 0, pos = 0;
    while ((pos = svg.find("w=", pos)) != std::string::npos) {
        ++labels;
        pos += 2;
    }
    CHECK(labels == 14);
}
