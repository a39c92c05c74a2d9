#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "ttrack/path.hpp"
#include "ttrack/ttm_io.hpp"

namespace {

struct RunResult {
    std::string out;
    int code = -1;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(TTRACK_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
    int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string map_path(const std::string& name) { return std::string(TTRACK_MAPS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("split reports the worked example with exit zero") {
    RunResult r = run_cli("split " + map_path("example2.ttm") + " --path \"E3 E2 ~E1\" --kmax 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("[E3 E2 ~E1]") != std::string::npos);
    CHECK(r.out.find("pos 1: NotHard(k=1)") != std::string::npos);
    CHECK(r.out.find("pos 2: NotHard(k=1)") != std::string::npos);
}

TEST_CASE("split json matches the golden file") {
    RunResult r = run_cli("split " + map_path("example2.ttm") + " --path \"E3 E2 ~E1\" --kmax 4 --json");
    REQUIRE(r.code == 0);
    std::ifstream golden(std::string(TTRACK_GOLDEN_DIR) + "/split_example2.json");
    REQUIRE(golden.good());
    std::stringstream want;
    want << golden.rdbuf();
    CHECK(r.out == want.str() + "");
}

TEST_CASE("tighten handles the empty result") {
    RunResult r = run_cli("tighten " + map_path("example2.ttm") + " --path \"E1 ~E1\"");
    CHECK(r.code == 0);
    CHECK(r.out == "\n");
}

TEST_CASE("image raw and tight") {
    RunResult r = run_cli("image " + map_path("example2.ttm") + " --path \"E3 E2 ~E1\" --json");
    REQUIRE(r.code == 0);
    auto js = nlohmann::json::parse(r.out);
    CHECK(js["raw"] == "E3 ~E1 ~E2 E2 E1 ~E1");
    CHECK(js["tight"] == "E3 ~E1");
}

TEST_CASE("verifier exit codes discriminate") {
    CHECK(run_cli("verify-irtt " + map_path("example2.ttm")).code == 0);
    CHECK(run_cli("verify-irtt " + map_path("idrose2.ttm")).code == 0);
    RunResult broken = run_cli("verify-irtt " + map_path("broken_ne2.ttm"));
    CHECK(broken.code == 1);
    CHECK(broken.out.find("parabolic-prefix-form") != std::string::npos);
    CHECK(broken.out.find("E2") != std::string::npos);
}

TEST_CASE("input errors exit with code two") {
    CHECK(run_cli("tighten " + map_path("example2.ttm") + " --path \"E9\"").code == 2);
    CHECK(run_cli("tighten " + map_path("multivertex.ttm") + " --path \"c c\"").code == 2);
    CHECK(run_cli("analyze " + map_path("example2.ttm") + " --no-such-flag").code != 0);
}

TEST_CASE("resource caps exit with code three") {
    RunResult r = run_cli("image " + map_path("torus.ttm") + " --path \"a\" --power 16 --word-cap 500");
    CHECK(r.code == 3);
}

TEST_CASE("emitted path literals re-parse to the same path") {
    using namespace ttrack;
    GraphMap f = load_ttm_file(map_path("linear_gep.ttm"));
    RunResult r = run_cli("mono " + map_path("linear_gep.ttm") + " --depth 2 --json");
    REQUIRE(r.code == 0);
    auto js = nlohmann::json::parse(r.out);
    REQUIRE(js["paths"].is_array());
    REQUIRE(js["paths"].size() > 4);
    for (auto& entry : js["paths"]) {
        EdgePath p = parse_path(f.graph(), entry["path"].get<std::string>());
        CHECK(format_path(f.graph(), p) == entry["path"].get<std::string>());
        CHECK(is_tight(p));
    }
}

TEST_CASE("identical seeded invocations are byte-identical") {
    std::string invocation =
        "verify-refinements " + map_path("linear.ttm") + " --depth 3 --trajectories 16 --seed 7 --json";
    RunResult a = run_cli(invocation);
    RunResult b = run_cli(invocation);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    RunResult c = run_cli("trace " + map_path("torus.ttm") +
                          " --path \"a b\" --steps 3 --policy seeded --seed 11 --json");
    RunResult d = run_cli("trace " + map_path("torus.ttm") +
                          " --path \"a b\" --steps 3 --policy seeded --seed 11 --json");
    REQUIRE(c.code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("analyze reports strata with the schema keys") {
    RunResult r = run_cli("analyze " + map_path("torus.ttm") + " --json");
    REQUIRE(r.code == 0);
    auto js = nlohmann::json::parse(r.out);
    REQUIRE(js["strata"].is_array());
    REQUIRE(js["strata"].size() == 1);
    auto& s = js["strata"][0];
    CHECK(s["kind"] == "exponential");
    CHECK(s["lambda_lo"].get<double>() <= 2.6181);
    CHECK(s["lambda_hi"].get<double>() >= 2.6179);
    CHECK(js["omega"] == 1);
}

TEST_CASE("nielsen geps peps subcommands") {
    RunResult inv = run_cli("nielsen " + map_path("example2.ttm") + " --max-len 5 --json");
    REQUIRE(inv.code == 0);
    auto js = nlohmann::json::parse(inv.out);
    CHECK(js["members"].size() == 4);
    CHECK(js["families"].size() == 1);

    RunResult gep = run_cli("geps " + map_path("linear.ttm") + " --path \"E ~a ~a ~F\" --json");
    REQUIRE(gep.code == 0);
    auto gj = nlohmann::json::parse(gep.out);
    CHECK(gj["gep"]["k"] == 2);
    CHECK(gj["gep"]["m_j"] == 2);

    RunResult pep = run_cli("peps " + map_path("linear.ttm") + " --path \"E ~a ~a\" --json");
    REQUIRE(pep.code == 0);
    auto pj = nlohmann::json::parse(pep.out);
    CHECK(pj["pep"]["s"] == 2);
    CHECK(pj["step"]["death"] == false);
    CHECK(pj["auto_power"] == 1);
}

TEST_CASE("verify-bdt runs from the command line") {
    RunResult r = run_cli("verify-bdt " + map_path("example2.ttm") + " --r 1 --J 1 --depth 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("verified") == 0);
    RunResult bad = run_cli("verify-bdt " + map_path("nest.ttm") + " --r 1 --J 1 --depth 2");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("counterexample") != std::string::npos);
}

TEST_CASE("trace exposes the family forest") {
    RunResult r = run_cli("trace " + map_path("example2.ttm") + " --path \"E3\" --steps 2 --json");
    REQUIRE(r.code == 0);
    auto js = nlohmann::json::parse(r.out);
    REQUIRE(js.is_array());
    REQUIRE(js.size() == 3);
    CHECK(js[2]["path"] == "E3 ~E1 ~E2 ~E1 ~E1 ~E2");
    for (auto& entry : js[2]["edges"]) {
        CHECK(entry["parent_pos"].get<int>() >= 0);
        CHECK(entry["weight"].get<int>() >= 1);
    }
}
