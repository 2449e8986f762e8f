// Drives the built command-line tool as a subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(NEURISTOR_CLI_WORK);

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result run(const std::string& args, const std::string& env = "")
{
    fs::create_directories(kWork);
    const auto out = kWork / "stdout.txt";
    const auto err = kWork / "stderr.txt";
    const std::string cmd = "cd '" + kWork.string() + "' && " + env + " '" NEURISTOR_CLI "' " + args +
                            " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

json summary(const fs::path& p) { return json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text)
{
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("scenario fig2a is quiescent")
{
    const auto r = run("scenario fig2a --out fig2a");
    REQUIRE(r.code == 0);
    const auto s = summary(kWork / "fig2a/fig2a_summary.json");
    CHECK(s["devices"][0]["mode"]["mode"] == "quiescent");
    CHECK(s["devices"][0]["mode"]["spike_count"] == 0);
    CHECK(slurp(kWork / "fig2a/fig2a_A_spikes.csv") == "peak_time_s,amplitude_A,width_s\n");
}

TEST_CASE("scenario fig2c is trapped")
{
    const auto r = run("scenario fig2c --out fig2c");
    REQUIRE(r.code == 0);
    const auto s = summary(kWork / "fig2c/fig2c_summary.json");
    CHECK(s["devices"][0]["mode"]["mode"] == "trapped_metallic");
    const double i = s["devices"][0]["mode"]["final_current_A"];
    CHECK(i > 0.5e-3);
    CHECK(i < 1.5e-3);
}

TEST_CASE("reruns are byte-identical")
{
    REQUIRE(run("scenario fig2b --seed 4 --out rerun1").code == 0);
    REQUIRE(run("scenario fig2b --seed 4 --out rerun2").code == 0);
    for (const char* f : {"fig2b_trace.csv", "fig2b_A_spikes.csv", "fig2b_summary.json"}) {
        CAPTURE(f);
        const auto a = slurp(kWork / "rerun1" / f);
        CHECK_FALSE(a.empty());
        CHECK(a == slurp(kWork / "rerun2" / f));
    }
}

TEST_CASE("asymmetric coupling is a validation error")
{
    REQUIRE(run("scenario fig5c --dump-config").code == 0);
    auto cfg = json::parse(run("scenario fig5c --dump-config").out);
    cfg["network"]["eta"][0][1] = 0.2;
    write(kWork / "asym.json", cfg.dump());
    const auto r = run("simulate asym.json --out asym");
    CHECK(r.code == 1);
    CHECK(r.err.find("eta[0][1]") != std::string::npos);
    CHECK(r.err.find("symmetric") != std::string::npos);
    CHECK_FALSE(fs::exists(kWork / "asym"));
}

TEST_CASE("usage errors")
{
    auto r = run("frobnicate");
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);
    r = run("scenario fig2a --no-such-flag");
    CHECK(r.code == 1);
    r = run("scenario unknown");
    CHECK(r.code == 1);
    CHECK(r.err.find("fig2a") != std::string::npos);
    r = run("scenario fig2a --format xml");
    CHECK(r.code == 1);
    r = run("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("runtime errors exit with 2")
{
    const auto r = run("export-svg missing.csv");
    CHECK(r.code == 2);
}

TEST_CASE("simulate with overrides and json output")
{
    const auto cfg = run("scenario fig2b --dump-config").out;
    write(kWork / "fig2b.json", cfg);
    const auto r = run("simulate fig2b.json --horizon 4e-6 --dt 1e-9 --format json --out sim");
    REQUIRE(r.code == 0);
    const auto s = summary(kWork / "sim/fig2b_summary.json");
    CHECK(s["horizon_s"] == 4e-6);
    CHECK(s["dt_s"] == 1e-9);
    CHECK(s["devices"][0]["spikes"].is_array());
    const auto trace = summary(kWork / "sim/fig2b_trace.json");
    CHECK(trace["devices"][0]["Idev_A"].size() == 4001);
}

TEST_CASE("output directory from the environment")
{
    const auto r = run("scenario fig2a --horizon 3e-6", "NEURISTOR_OUT_DIR=envdir");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(kWork / "envdir/fig2a_summary.json"));
}

TEST_CASE("rate sweep writes CSV and JSON")
{
    auto cfg = json::parse(run("scenario fig2d --dump-config").out);
    cfg["sweep"]["rate"] = {{"device", 0}, {"v_min_V", 9.0}, {"v_max_V", 15.0}, {"step_V", 3.0}};
    write(kWork / "rate.json", cfg.dump());
    const auto r = run("sweep rate rate.json --horizon 20e-6 --out rate");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(kWork / "rate/fig2d_rate.csv"));
    const auto j = summary(kWork / "rate/fig2d_rate.json");
    CHECK(j["points"].size() == 3);
    CHECK(j["spiking_intervals"] == 1);

    const auto missing = run("sweep coupling rate.json --out rate");
    CHECK(missing.code == 1);
    CHECK(missing.err.find("sweep.coupling") != std::string::npos);
}

TEST_CASE("fits")
{
    auto cfg = json::parse(run("scenario fig2b --dump-config").out);
    cfg["fit"] = {{"population", 8}, {"max_generations", 3}, {"seed", 2}, {"horizon_s", 10e-6}};
    write(kWork / "fit.json", cfg.dump());

    write(kWork / "rt.csv", "T_K,R_ohm,branch\n320,7.0e4,heat\n330,3.5e4,heat\n340,2.3e3,heat\n"
                            "340,2.3e3,cool\n330,5e3,cool\n320,5.5e4,cool\n");
    auto r = run("fit hysteresis rt.csv fit.json --out fit");
    REQUIRE(r.code == 0);
    auto j = summary(kWork / "fit/fig2b_fit_hysteresis.json");
    CHECK(j["parameters"].contains("w_K"));
    CHECK(j["seed"] == 2);
    CHECK(j["generations"] == 3);

    REQUIRE(run("scenario fig2b --horizon 10e-6 --out feat").code == 0);
    r = run("fit device feat/fig2b_trace.csv fit.json --out fit");
    REQUIRE(r.code == 0);
    j = summary(kWork / "fit/fig2b_fit_device.json");
    CHECK(j["parameters"].contains("c_th_J_per_K"));
    CHECK(j["target"]["amplitudes_A"].size() == 3);

    REQUIRE(run("scenario fig2a --horizon 5e-6 --out feat").code == 0);
    r = run("fit device feat/fig2a_trace.csv fit.json --out fit");
    CHECK(r.code == 1);
}

TEST_CASE("export-svg")
{
    REQUIRE(run("scenario fig2b --horizon 5e-6 --out svg").code == 0);
    const auto r = run("export-svg svg/fig2b_trace.csv");
    REQUIRE(r.code == 0);
    const auto svg = slurp(kWork / "svg/fig2b_trace.svg");
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("dev0_Idev_A") != std::string::npos);
}
