#include "neuristor/fit.hpp"
#include "neuristor/analysis.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace neuristor;
using doctest::Approx;

namespace {

std::vector<double> ratios(const HysteresisParams& fit, const HysteresisParams& truth)
{
    return {fit.r0 / truth.r0, fit.rm / truth.rm,     fit.ea / truth.ea,     fit.beta / truth.beta,
            fit.w / truth.w,   fit.tc / truth.tc,     fit.gamma / truth.gamma};
}

}  // namespace

TEST_CASE("synthetic R(T) protocol")
{
    const auto p = paper_fit_2023();
    const auto data = simulate_rt(p, standard_rt_protocol());
    REQUIRE(data.size() == 6);
    CHECK(data[0].branch == Branch::heat);
    CHECK(data[1].branch == Branch::cool);
    CHECK(data[0].points.front().t == 320.0);
    CHECK(data[0].points.back().t == 360.0);
    CHECK(data[2].points.back().t == 330.0);
    CHECK(data[4].points.back().t == 335.0);
    CHECK(hysteresis_objective(p, data) == 0.0);
    // The 335 K minor cooling branch starts above the major cooling branch.
    const auto& minor = data[5].points;
    const auto& major = data[1].points;
    const auto at = [](const std::vector<RtPoint>& pts, double t) {
        for (const auto& pt : pts)
            if (std::abs(pt.t - t) < 1e-9)
                return pt.r;
        return -1.0;
    };
    CHECK(at(minor, 333.0) > at(major, 333.0));
    CHECK(std::abs(at(minor, 320.0) / at(major, 320.0) - 1.0) < 1e-3);
}

TEST_CASE("R(T) data checks and CSV round trip")
{
    auto data = simulate_rt(paper_fit_2023(), standard_rt_protocol(1.0));
    std::ostringstream out;
    write_rt_csv(out, data);
    std::istringstream in(out.str());
    const auto back = read_rt_csv(in);
    REQUIRE(back.size() == data.size());
    for (std::size_t s = 0; s < data.size(); ++s) {
        CHECK(back[s].branch == data[s].branch);
        REQUIRE(back[s].points.size() == data[s].points.size());
        for (std::size_t i = 0; i < data[s].points.size(); ++i) {
            CHECK(back[s].points[i].t == data[s].points[i].t);
            CHECK(back[s].points[i].r == data[s].points[i].r);
        }
    }

    std::istringstream no_series("T_K, R_ohm, branch\n320,5e4,heat\n330,3e4,heat\n330,3e4,cool\n320,4e4,cool\n");
    const auto split = read_rt_csv(no_series);
    REQUIRE(split.size() == 2);
    CHECK(split[1].branch == Branch::cool);

    data[0].points[3].r = -1.0;
    CHECK_THROWS_AS(check_rt_data(data), std::invalid_argument);
    std::istringstream bad("T_K,R_ohm,branch\n320,5e4,sideways\n");
    CHECK_THROWS(read_rt_csv(bad));
}

TEST_CASE("hysteresis fit objective is minimal at the generating constants")
{
    const auto p = paper_fit_2023();
    const auto data = simulate_rt(p, standard_rt_protocol());
    FitOptions o;
    o.max_generations = 30;
    const auto fit = fit_hysteresis(data, o);
    CHECK(hysteresis_objective(p, data) <= fit.residual);
    for (double v : fit.de.history)
        CHECK(hysteresis_objective(p, data) <= v);
}

TEST_CASE("hysteresis fit is deterministic per seed")
{
    const auto data = simulate_rt(paper_fit_2023(), standard_rt_protocol());
    FitOptions o;
    o.max_generations = 20;
    o.seed = 5;
    const auto a = fit_hysteresis(data, o);
    const auto b = fit_hysteresis(data, o);
    CHECK(a.de.history == b.de.history);
    CHECK(a.params == b.params);
    CHECK(a.seed == 5);
}

TEST_CASE("hysteresis fit with 1% multiplicative noise")
{
    const auto p = paper_fit_2023();
    const auto clean = simulate_rt(p, standard_rt_protocol());
    int r0_within = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto data = clean;
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.01);
        for (auto& s : data)
            for (auto& pt : s.points)
                pt.r *= 1.0 + noise(rng);
        const auto fit = fit_hysteresis(data, FitOptions{});
        // Bounded by the noise floor: log10(1.01)^2 ~ 1.9e-5.
        CHECK(fit.residual < 3e-5);
        const auto r = ratios(fit.params, p);
        for (std::size_t i = 1; i < r.size(); ++i)
            CHECK(std::abs(r[i] - 1.0) <= 0.10);
        r0_within += std::abs(r[0] - 1.0) <= 0.10;
        MESSAGE("noise seed " << seed << ": r0 ratio " << r[0]);
    }
    // r0 trades off against ea (R ~ r0 exp(ea/T)); it is the weakest parameter.
    CHECK(r0_within >= 5);
}

TEST_CASE("single-branch data flags the width")
{
    const auto p = paper_fit_2023();
    const auto heat_only = simulate_rt(p, {{Branch::heat, 320.0, 360.0, 0.5}});
    FitOptions o;
    o.max_generations = 40;
    const auto fit = fit_hysteresis(heat_only, o);
    CHECK(fit.width_low_confidence);
    CHECK(std::isfinite(fit.residual));
    const auto both = simulate_rt(p, standard_rt_protocol());
    CHECK_FALSE(fit_hysteresis(both, o).width_low_confidence);
}

TEST_CASE("spike features")
{
    SUBCASE("constructed train")
    {
        SpikeTrain t;
        t.events = {{1e-6, 6e-3, 2e-7}, {3e-6, 5e-3, 1e-7}, {5e-6, 5e-3, 1e-7}, {7e-6, 5e-3, 2e-7}};
        const auto f = extract_spike_features(t);
        CHECK(f.amplitudes[0] == 6e-3);
        CHECK(f.times[2] == 5e-6);
        CHECK(f.mean_width == Approx(1.5e-7));
        CHECK(f.frequency == Approx(5e5));
        CHECK(feature_error(f, f) == 0.0);
    }
    SUBCASE("simulated spiking device")
    {
        const auto f = simulate_features(paper_fit_device(12e3), DeviceDrive{});
        CHECK(f.amplitudes[0] > f.amplitudes[1]);
        CHECK(f.amplitudes[0] > f.amplitudes[2]);
        CHECK(f.times[0] < f.times[1]);
        CHECK(f.times[1] < f.times[2]);
        CHECK(f.frequency == Approx(351.5e3).epsilon(0.01));
        const auto back = features_from_json(to_json(f));
        CHECK(back.as_array() == f.as_array());
    }
    SUBCASE("quiescent drive has too few spikes")
    {
        DeviceDrive d;
        d.v_in = 9.0;
        CHECK_THROWS_AS(simulate_features(paper_fit_device(12e3), d), InsufficientData);
    }
}

TEST_CASE("device fit survives an infeasible target")
{
    SpikeFeatures target;
    target.amplitudes = {5e-3, 5e-3, 5e-3};
    target.times = {1e-6, 2e-6, 3e-6};
    target.mean_width = 0.0;
    target.frequency = 1e6;
    FitOptions o;
    o.population = 8;
    o.max_generations = 2;
    DeviceDrive drive;
    drive.horizon = 8e-6;
    const auto fit = fit_device(target, paper_fit_2023(), drive, o);
    CHECK(std::isfinite(fit.residual));
    CHECK(fit.residual > 0.1);
    CHECK(fit.params.k >= 1.0);
}

TEST_CASE("fit bounds are validated")
{
    const auto data = simulate_rt(paper_fit_2023(), standard_rt_protocol());
    FitOptions o;
    o.bounds["nope"] = {1.0, 2.0};
    CHECK_THROWS_AS(fit_hysteresis(data, o), std::invalid_argument);
    o.bounds.clear();
    o.bounds["w"] = {5.0, 1.0};
    CHECK_THROWS_AS(fit_hysteresis(data, o), std::invalid_argument);
}
