// End-to-end checks of the command-line tool. The binary path comes from the
// MOBIPRED_CLI environment variable (set by ctest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "mobipred/io.hpp"

using namespace mobipred;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* path = std::getenv("MOBIPRED_CLI");
    REQUIRE_MESSAGE(path != nullptr, "MOBIPRED_CLI must point at the CLI binary");
    return path;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "mobipred_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("gen-trace is deterministic and row-exact") {
    const fs::path dir = work_dir();
    const std::string a = (dir / "a.csv").string();
    const std::string b = (dir / "b.csv").string();
    CHECK(run("gen-trace --seed 1 --duration 4000 --interval 10 --out " + a) == 0);
    CHECK(run("gen-trace --seed 1 --duration 4000 --interval 10 --out " + b) == 0);
    CHECK(read_file(a) == read_file(b));

    std::size_t rows = 0;
    for (char ch : read_file(a)) {
        rows += ch == '\n';
    }
    CHECK(rows == 402);  // header + 401 samples

    const std::string c = (dir / "c.csv").string();
    CHECK(run("gen-trace --seed 2 --duration 4000 --interval 10 --out " + c) == 0);
    CHECK(read_file(a) != read_file(c));
}

TEST_CASE("missing required arguments exit with code 2") {
    CHECK(run("gen-trace --seed 1") == 2);
    CHECK(run("train") == 2);
    CHECK(run("no-such-command") == 2);
}

TEST_CASE("nonexistent inputs exit with code 1") {
    CHECK(run("train --trace /nonexistent.csv --out /tmp/m.json") == 1);
}

TEST_CASE("train, predict and let run end to end") {
    const fs::path dir = work_dir() / "flow";
    fs::create_directories(dir);
    const std::string trace = (dir / "trace.csv").string();
    CHECK(run("gen-trace --seed 5 --nodes 2 --duration 1000 --interval 10 --out " + trace) == 0);

    for (const std::string node : {"n0", "n1"}) {
        for (const std::string coord : {"x", "y"}) {
            CHECK(run("train --trace " + trace + " --node " + node + " --coord " + coord +
                      " --split 0 --epochs 60 --lr 0.25 --seed 9 --out " +
                      (dir / (node + "_" + coord + ".json")).string()) == 0);
        }
    }
    CHECK(run("predict --model " + (dir / "n0_x.json").string() + " --trace " + trace +
              " --at 500 --steps 3") == 0);
    CHECK(run("let --model-a " + (dir / "n0").string() + " --model-b " + (dir / "n1").string() +
              " --trace " + trace + " --at 500 --range 250 --steps 3") == 0);
}

TEST_CASE("paper-eval reruns byte-identically") {
    const fs::path dir = work_dir();
    const fs::path out1 = dir / "pe1";
    const fs::path out2 = dir / "pe2";
    const std::string args = "paper-eval --seed 11 --count 120 --split 60 --epochs 40 --out ";
    CHECK(run(args + out1.string()) == 0);
    CHECK(run(args + out2.string()) == 0);
    for (const std::string name : {"x_pred.csv", "y_pred.csv", "trajectory.csv", "errors.csv"}) {
        CAPTURE(name);
        CHECK(fs::exists(out1 / name));
        CHECK(read_file(out1 / name) == read_file(out2 / name));
    }
}

TEST_CASE("route-sim on the built-in scenario writes reports") {
    const fs::path dir = work_dir();
    const fs::path report = dir / "report.json";
    CHECK(run("route-sim --fig2 --seed 7 --epochs 300 --out " + report.string()) == 0);
    REQUIRE(fs::exists(report));
    REQUIRE(fs::exists(dir / "report.csv"));
    const auto parsed = nlohmann::json::parse(read_file(report));
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0]["policy"] == "stable");
    CHECK(parsed[1]["policy"] == "shortest");
}

TEST_CASE("config file values apply where flags are absent") {
    const fs::path dir = work_dir();
    const fs::path config = dir / "config.json";
    write_file(config, "{\"seed\": 21, \"duration\": 300, \"interval\": 10}\n");

    const std::string via_config = (dir / "via_config.csv").string();
    const std::string via_flags = (dir / "via_flags.csv").string();
    CHECK(run("--config " + config.string() + " gen-trace --out " + via_config) == 0);
    CHECK(run("gen-trace --seed 21 --duration 300 --interval 10 --out " + via_flags) == 0);
    CHECK(read_file(via_config) == read_file(via_flags));

    // a flag overrides the config value
    const std::string overridden = (dir / "override.csv").string();
    CHECK(run("--config " + config.string() + " gen-trace --seed 22 --out " + overridden) == 0);
    CHECK(read_file(overridden) != read_file(via_config));
}
