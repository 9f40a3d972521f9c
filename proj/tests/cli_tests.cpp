#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
    int code;
    std::string out;
};

/* Run the installed binary (path in CHORDWKB_BIN) with the given arguments,
   capturing stdout and stderr together. */
RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("CHORDWKB_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CHORDWKB_BIN must point at the CLI binary");
    const std::string cmd = "\"" + std::string(bin) + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    REQUIRE(bool(os));
    os << text;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    REQUIRE_MESSAGE(bool(is), "missing file: " << path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

const char* kHarmonicConfig = R"({
  "hbar": 1.0,
  "hamiltonian": [{"dp": 2, "dq": 0, "c": 0.5}, {"dp": 0, "dq": 2, "c": 0.5}],
  "coupling": {"l_re": [0.7071067811865476, 0.0], "l_im": [0.0, 0.7071067811865476]},
  "state": {"type": "gaussian", "P": 0.7, "Q": -0.4},
  "method": "exact_quadratic",
  "times": [0.25],
  "grid": {"extent": 3.0, "resolution": 9},
  "output": {"path": "cli_tmp/harm", "format": "csv"}
})";

const char* kCubicConfig = R"({
  "hbar": 0.1,
  "hamiltonian": [{"dp": 3, "dq": 0, "c": 1.0}],
  "coupling": {"l_re": [0.3, 0.0], "l_im": [0.0, 0.0]},
  "state": {"type": "cat", "P": 1.0, "Q": 0.0, "dP": 0.0, "dQ": 2.0, "term": "ab"},
  "times": [0.2],
  "grid": {"extent": 3.0, "resolution": 9},
  "output": {"path": "cli_tmp/cmp", "format": "csv"}
})";

/* doctest assertions are only legal while a test case is running, so the
   config fixtures are written lazily on first use instead of during static
   initialisation. */
void ensure_fixtures() {
    static bool done = false;
    if (done) return;
    std::filesystem::create_directories("cli_tmp");
    write_file("cli_tmp/harm.json", kHarmonicConfig);
    write_file("cli_tmp/cubic.json", kCubicConfig);
    done = true;
}

}  // namespace

TEST_CASE("help and argument errors") {
    ensure_fixtures();
    CHECK(run_cli("--help").code == 0);
    CHECK(contains(run_cli("--help").out, "evolve"));
    CHECK(run_cli("").code != 0);                                   // a subcommand is required
    CHECK(run_cli("evolve").code != 0);                             // --config is required
    CHECK(run_cli("evolve --config cli_tmp/missing.json").code == 2);
    CHECK(run_cli("scaling").code == 2);                            // needs --config or --preset
}

TEST_CASE("configuration errors exit with code 2") {
    ensure_fixtures();
    write_file("cli_tmp/broken.json", "{oops");
    const RunResult r = run_cli("evolve --config cli_tmp/broken.json");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "error:"));

    const RunResult m = run_cli("evolve --config cli_tmp/harm.json --method bogus");
    CHECK(m.code == 2);
    CHECK(contains(m.out, "unknown method"));

    CHECK(run_cli("evolve --config cli_tmp/harm.json --times 0.1,abc").code == 2);
    CHECK(run_cli("evolve --config cli_tmp/harm.json --format xml").code == 2);
}

TEST_CASE("evolve writes chord grids and reports the trace") {
    ensure_fixtures();
    const RunResult r = run_cli("evolve --config cli_tmp/harm.json");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "t=0.25"));
    CHECK(contains(r.out, "file=cli_tmp/harm_t0.csv"));
    CHECK(contains(r.out, "trace_re="));
    CHECK(contains(r.out, "purity="));

    const std::string table = read_file("cli_tmp/harm_t0.csv");
    CHECK(table.rfind("y_p,y_q,t,re,im,abs,phase\n", 0) == 0);
    // header + 9 x 9 samples
    CHECK(std::count(table.begin(), table.end(), '\n') == 82);
}

TEST_CASE("evolve output is identical across reruns and thread counts") {
    ensure_fixtures();
    CHECK(run_cli("evolve --config cli_tmp/harm.json --out cli_tmp/det_a --threads 1").code == 0);
    CHECK(run_cli("evolve --config cli_tmp/harm.json --out cli_tmp/det_b --threads 4").code == 0);
    CHECK(read_file("cli_tmp/det_a_t0.csv") == read_file("cli_tmp/det_b_t0.csv"));
}

TEST_CASE("evolve honours time and format overrides") {
    ensure_fixtures();
    const RunResult r = run_cli(
        "evolve --config cli_tmp/harm.json --times 0.1,0.3 --format json --out cli_tmp/harmj");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "file=cli_tmp/harmj_t0.json"));
    CHECK(contains(r.out, "file=cli_tmp/harmj_t1.json"));

    const nlohmann::json j = nlohmann::json::parse(read_file("cli_tmp/harmj_t1.json"));
    CHECK(j.at("kind") == "chord_grid");
    CHECK(j.at("t").get<double>() == 0.3);
    CHECK(j.at("metadata").at("method") == "exact_quadratic");
    CHECK(j.at("axes").at("y_p").size() == 9);
}

TEST_CASE("a truncated Wigner transform is a numerical failure (exit 3)") {
    ensure_fixtures();
    const RunResult r = run_cli(
        "evolve --config cli_tmp/harm.json --out cli_tmp/trunc --wigner --times 0");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "truncated"));
}

TEST_CASE("compare reports per-time difference summaries") {
    ensure_fixtures();
    const RunResult r = run_cli(
        "compare --config cli_tmp/cubic.json --method-a saddle_cubic --method-b exact_cubic");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "summary t=0.2"));
    CHECK(contains(r.out, "max_rel="));
    CHECK(contains(r.out, "table cli_tmp/cmp.csv"));

    const std::string table = read_file("cli_tmp/cmp.csv");
    CHECK(table.rfind("y_p,y_q,t,re_a,im_a,re_b,im_b,abs_diff,rel_diff,phase_diff\n", 0) == 0);
    CHECK(contains(table, "# summary"));
}

TEST_CASE("scaling presets run and report fitted exponents") {
    ensure_fixtures();
    const RunResult r = run_cli("scaling --preset cubic --out cli_tmp/sc_cubic");
    CHECK(r.code == 0);
    // The fully solvable sweep has no phase defect: both fits are degenerate,
    // the decoherence exponent is exactly one, and the curvature term vanishes.
    CHECK(contains(r.out, "t_exponent=undefined"));
    CHECK(contains(r.out, "l_exponent=undefined"));
    CHECK(contains(r.out, "deco_exponent=1.000000"));
    CHECK(contains(r.out, "hessian_contraction=0.000000e+00"));
    CHECK(contains(r.out, "table cli_tmp/sc_cubic.csv"));
    const std::string table = read_file("cli_tmp/sc_cubic.csv");
    CHECK(table.rfind("sweep,t,l,re_dP,im_dP,abs_dP,deco\n", 0) == 0);
    CHECK(run_cli("scaling --preset pentic").code == 2);
}
