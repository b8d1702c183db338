#include "doctest.h"

#include "subforge/config.hpp"
#include "subforge/shell.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace subforge;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string &name) : path("/tmp/subforge_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("config parsing: defaults, overrides, rejections") {
    RunConfig def = parse_config("");
    CHECK(def.eps2 == doctest::Approx(0.1));
    CHECK(def.s == 1600);
    CHECK(def.log_base == LogBase::two);
    CHECK(def.seed == 0);

    RunConfig over = parse_config("eps2=0.2\n# comment\nseed = 7\n");
    CHECK(over.eps2 == doctest::Approx(0.2));
    CHECK(over.seed == 7);
    CHECK(over.eps1 == doctest::Approx(def.eps1)); // untouched

    CHECK_THROWS_AS(parse_config("eps1=9\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("no_such_key=1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("eps1\n"), std::invalid_argument);
}

TEST_CASE("effective m: formula, cap and override") {
    RunConfig cfg;
    CHECK(ball_radius_m(120, 60.0, LogBase::two) == 2);
    CHECK(effective_m(cfg, 200, 10.0) == cfg.m_cap); // formula astronomically larger
    cfg.m_override = 4;
    CHECK(effective_m(cfg, 200, 10.0) == 4);
}

TEST_CASE("cli end-to-end: generate, find, verify, determinism") {
    TempFile host("host.txt"), pattern("pattern.txt"), cert1("cert1.json"), cert2("cert2.json");
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "complete_bipartite", "--a",
                   "40", "--b", "40", "--out", host.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "clique", "--a", "3", "--out",
                   pattern.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "find-subdivision", "--graph", host.path, "--pattern",
                   pattern.path, "--mode", "balanced", "--out", cert1.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "verify", "--graph", host.path, "--pattern",
                   pattern.path, "--cert", cert1.path}) == 0);
    // Identical inputs and seed give byte-identical output.
    CHECK(run_cli({"--log-level", "quiet", "find-subdivision", "--graph", host.path, "--pattern",
                   pattern.path, "--mode", "balanced", "--out", cert2.path}) == 0);
    CHECK(slurp(cert1.path) == slurp(cert2.path));
}

TEST_CASE("cli stats and gadget building") {
    TempFile host("host2.txt"), gadget("gadget.json");
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "complete_bipartite", "--a",
                   "50", "--b", "50", "--out", host.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "stats", "--graph", host.path, "--json"}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "build-gadget", "--graph", host.path, "--kind", "unit",
                   "--h1", "3", "--h2", "2", "--h3", "2", "--out", gadget.path}) == 0);
    CHECK(slurp(gadget.path).find("\"tag\": \"unit\"") != std::string::npos);
}

TEST_CASE("cli surfaces parse errors with exit 3") {
    TempFile bad("bad.txt");
    {
        std::ofstream out(bad.path);
        out << "3 1\n0 0\n"; // loop
    }
    CHECK(run_cli({"--log-level", "quiet", "stats", "--graph", bad.path}) == 3);
    CHECK(run_cli({"--log-level", "quiet", "stats", "--graph", "/nonexistent/file"}) == 3);
    CHECK(run_cli({"bogus-command"}) == 3);
}

TEST_CASE("cli lowerbound writes reports") {
    TempFile pattern("k4.txt"), json("lb.json"), csv("lb.csv");
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "clique", "--a", "4", "--out",
                   pattern.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "lowerbound", "--pattern", pattern.path, "--n1", "20",
                   "--samples", "200", "--seed", "1", "--out", json.path, "--csv", csv.path}) ==
          0);
    CHECK(slurp(json.path).find("mean_missing") != std::string::npos);
    CHECK(slurp(csv.path).find("frac_below_quarter") != std::string::npos);
}

TEST_CASE("cli extract-expander emits a graph and a report") {
    TempFile host("er.txt"), out("exp.txt"), report("exp.json");
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "erdos_renyi", "--a", "60",
                   "--p", "0.2", "--seed", "3", "--out", host.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "extract-expander", "--graph", host.path, "--out",
                   out.path, "--report", report.path}) == 0);
    CHECK(slurp(report.path).find("verdict") != std::string::npos);
}

TEST_CASE("config rejects a broken exponent hierarchy") {
    CHECK_THROWS_AS(parse_config("s=10\nx=50\n"), std::invalid_argument); // s < 8x
    CHECK_THROWS_AS(parse_config("y=3\nz=5\n"), std::invalid_argument);   // y <= z
    CHECK_NOTHROW(parse_config("s=1600\nx=50\ny=12\nz=4\n"));
}

TEST_CASE("SUBFORGE_SEED overrides the config seed") {
    TempFile cfg("seed.cfg"), host("seedhost.txt"), pat("seedpat.txt"), stages("stages.json");
    {
        std::ofstream out(cfg.path);
        out << "seed=123\n";
    }
    setenv("SUBFORGE_SEED", "77", 1);
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "erdos_renyi", "--a", "90",
                   "--p", "0.3", "--seed", "4", "--out", host.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "cycle", "--a", "4", "--out",
                   pat.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "find-subdivision", "--graph", host.path, "--pattern",
                   pat.path, "--mode", "sparse", "--config", cfg.path, "--stages",
                   stages.path}) == 0);
    unsetenv("SUBFORGE_SEED");
    CHECK(slurp(stages.path).find("stages") != std::string::npos);
}

TEST_CASE("cli lowerbound parallel seeds") {
    TempFile pattern("k5.txt"), csv("lbmulti.csv");
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "clique", "--a", "5", "--out",
                   pattern.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "lowerbound", "--pattern", pattern.path, "--n1", "20",
                   "--samples", "300", "--seeds", "3", "--jobs", "2", "--csv", csv.path}) == 0);
    std::string text = slurp(csv.path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4); // header + three rows
}

TEST_CASE("cli cartesian power generation") {
    TempFile factor("factor.txt"), power("power.txt");
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "path", "--a", "3", "--out",
                   factor.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "cartesian_power", "--factor",
                   factor.path, "--r", "2", "--out", power.path}) == 0);
    std::string text = slurp(power.path);
    CHECK(text.rfind("9 12", 0) == 0); // 3^2 vertices, 2*3*2 edges
}

TEST_CASE("cli honors the --ell request") {
    TempFile host("hell.txt"), pat("pell.txt"), cert("cell.json");
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "complete_bipartite", "--a",
                   "60", "--b", "60", "--out", host.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "generate", "--family", "clique", "--a", "3", "--out",
                   pat.path}) == 0);
    CHECK(run_cli({"--log-level", "quiet", "find-subdivision", "--graph", host.path, "--pattern",
                   pat.path, "--mode", "balanced", "--ell", "1", "--out", cert.path}) == 0);
    std::string text = slurp(cert.path);
    CHECK(text.find("\"ell\": 1") != std::string::npos);
}
