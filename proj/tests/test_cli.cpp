#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "tfpsi/io.hpp"
#include "tfpsi/presets.hpp"
#include "tfpsi/suites.hpp"

using namespace tfpsi;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "tfpsi_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TFPSI_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error(const json& j) {
    try {
        config_from_json(j);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config parsing names the offending field") {
        CHECK(config_error({{"n", "abc"}}).find("'n'") != std::string::npos);
        CHECK(config_error({{"bogus", 1}}).find("'bogus'") != std::string::npos);
        CHECK(config_error({{"symbol", {{"preset", "bump"}, {"amp", 1}}}}).find("'symbol.amp'") != std::string::npos);
        CHECK(config_error({{"tolerances", {{"nope", 1}}}}).find("'tolerances.nope'") != std::string::npos);
        CHECK(config_error({{"suite", {{"nope", 1}}}}).find("'suite.nope'") != std::string::npos);
        CHECK(config_error({{"algebra", {{"q", 3}}}}).find("'algebra.q'") != std::string::npos);
        const auto c = config_from_json({{"n", 15}, {"algebra", {{"weightKind", "polynomial"}, {"s", 3}, {"q", "inf"}}}});
        CHECK(c.n == 15);
        CHECK(c.q == Exponent::infinity);
        CHECK(c.weight == WeightSpec::polynomial(3));
    }

    TEST_CASE("report layout") {
        ExperimentConfig c;
        c.n = 15;
        const Report r = run_suite("frame", c);
        const json j = to_json(r);
        for (const char* key : {"suiteName", "configEcho", "metrics", "pass", "wallTimeMs"}) CHECK(j.contains(key));
        CHECK(r.pass);
        CHECK(r.metrics.at("parsevalResidual") <= 1e-10);
        CHECK(report_bytes_without_timing(r).find("wallTimeMs") == std::string::npos);
        CHECK_THROWS_AS(run_suite("nosuch", c), Error);
    }

    TEST_CASE("tolerances decide pass") {
        ExperimentConfig c;
        c.n = 15;
        c.tolerances["parsevalResidual"] = 0.0;
        const Report r = run_suite("frame", c);
        CHECK_FALSE(r.pass);
        REQUIRE(r.failures.size() == 1);
        CHECK(r.failures[0] == "parsevalResidual");
    }

    TEST_CASE("artifacts are written") {
        ExperimentConfig c;
        c.n = 15;
        c.out_dir = scratch_dir("artifacts");
        run_suite("covariance", c);
        CHECK(fs::exists(c.out_dir / "report.json"));
        CHECK(fs::exists(c.out_dir / "symbol.csv"));
        CHECK(fs::exists(c.out_dir / "grand_symbol.csv"));
        CHECK(load_symbol(c.out_dir / "symbol.csv").n() == 15);
    }

    TEST_CASE("exit codes") {
        const fs::path dir = scratch_dir("exit");
        CHECK(run_cli("frame --n 15 --out " + (dir / "ok").string()) == 0);
        CHECK(run_cli("frame --n 14 --out " + (dir / "even").string()) == 1);
        CHECK(run_cli("frame --n 15 --alpha 5 --beta 3 --out " + (dir / "dense").string()) == 1);
        CHECK(run_cli("frame --n 15 --tol parsevalResidual=0 --out " + (dir / "tight").string()) == 2);
        CHECK(run_cli("nosuch") == 1);
        std::ofstream(dir / "bad.json") << R"({"n": 15, "windw": "delta"})";
        CHECK(run_cli("frame --config " + (dir / "bad.json").string()) == 1);
    }

    TEST_CASE("symbol from file and covariance example") {
        const fs::path dir = scratch_dir("fromfile");
        save_symbol(random_bandlimited_symbol(15, 3, 5), dir / "sigma.bin");
        CHECK(run_cli("covariance --n 15 --symbol-file " + (dir / "sigma.bin").string() + " --out " + (dir / "out").string()) == 0);
        CHECK(run_cli("covariance --n 15 --symbol randomBandlimited --out " + (dir / "out2").string()) == 0);
        std::ifstream in(dir / "out2" / "report.json");
        const json j = json::parse(in);
        CHECK(j["metrics"]["covarianceMaxRelErr"].get<double>() <= 1e-9);
    }
}
