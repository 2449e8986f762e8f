#include "neuristor/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace neuristor;
using doctest::Approx;

namespace {

NetworkConfig single(double r_load = 12e3)
{
    return {{paper_fit_device(r_load)}, uncoupled(1), 325.0};
}

IntegrateOptions options(double dt, double horizon)
{
    IntegrateOptions o;
    o.dt = dt;
    o.horizon = horizon;
    return o;
}

}  // namespace

TEST_CASE("equilibrium stays constant")
{
    const std::vector<Waveform> src{Dc{0.0}};
    const auto trace = integrate(single(), src, options(kDefaultDt, 1e-6));
    REQUIRE(trace.size() > 100);
    const auto& d = trace.devices[0];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(d.v1[i] == 0.0);
        CHECK(d.t[i] == 325.0);
        CHECK(d.i_device[i] == 0.0);
    }
}

TEST_CASE("trace layout")
{
    const std::vector<Waveform> src{Dc{12.5}};
    auto o = options(kDefaultDt, 2e-6);
    const auto full = integrate(single(), src, o);
    CHECK(full.size() == 4001);
    CHECK(full.dt == kDefaultDt);
    CHECK(full.end_time() == Approx(2e-6));
    CHECK(full.devices[0].v_in.front() == 12.5);

    o.record_stride = 10;
    const auto thin = integrate(single(), src, o);
    CHECK(thin.size() == 401);
    CHECK(thin.dt == Approx(10 * kDefaultDt));
    for (std::size_t i = 0; i < thin.size(); ++i)
        CHECK(thin.devices[0].v1[i] == full.devices[0].v1[i * 10]);
}

TEST_CASE("step-halving convergence order on a smooth segment")
{
    // Sub-threshold charging from rest: no branch reversal in the window.
    const std::vector<Waveform> src{Dc{9.0}};
    const double horizon = 400e-9;
    double v[3], t[3];
    const double dts[3] = {20e-9, 10e-9, 5e-9};
    for (int k = 0; k < 3; ++k) {
        const auto tr = integrate(single(), src, options(dts[k], horizon));
        REQUIRE(tr.end_time() == Approx(horizon));
        v[k] = tr.devices[0].v1.back();
        t[k] = tr.devices[0].t.back();
        REQUIRE(tr.final_states[0].branch.on_major_loop());
    }
    const double order_v = std::log2(std::abs(v[0] - v[1]) / std::abs(v[1] - v[2]));
    const double order_t = std::log2(std::abs(t[0] - t[1]) / std::abs(t[1] - t[2]));
    MESSAGE("observed order v1 " << order_v << ", T " << order_t);
    CHECK(order_v >= 3.5);
    CHECK(order_t >= 3.5);
}

TEST_CASE("relaxation to ambient with no drive")
{
    NetworkConfig cfg{{paper_fit_device(12e3), paper_fit_device(12e3)}, pair_coupling(0.1), 325.0};
    const std::vector<Waveform> src{Dc{0.0}, Dc{0.0}};
    auto o = options(kDefaultDt, 20e-6);
    DeviceState a = rest_state(325.0), b = rest_state(325.0);
    a.t = 345.0;
    a.v1 = 2.0;
    a.branch = major_loop_state(345.0, +1);
    b.t = 318.0;
    b.branch = major_loop_state(318.0, -1);
    o.initial = {a, b};
    const auto tr = integrate(cfg, src, o);
    double prev = 1e9;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double dev = std::max(std::abs(tr.devices[0].t[i] - 325.0),
                                    std::abs(tr.devices[1].t[i] - 325.0));
        CHECK(dev <= prev);
        prev = dev;
    }
    CHECK(prev < 1e-3);
    CHECK(std::abs(tr.devices[0].v1.back()) < 1e-4);
}

TEST_CASE("energy balance of a spiking device")
{
    const auto cfg = single();
    const auto& p = cfg.devices[0];
    const std::vector<Waveform> src{Dc{12.5}};
    const auto tr = integrate(cfg, src, options(kDefaultDt, 8e-6));
    const auto& d = tr.devices[0];
    double joule = 0.0, to_env = 0.0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
        joule += 0.5 * tr.dt * (d.v1[i] * d.i_device[i] + d.v1[i - 1] * d.i_device[i - 1]);
        to_env += 0.5 * tr.dt * p.s_th * ((d.t[i] - 325.0) + (d.t[i - 1] - 325.0));
    }
    const double stored = p.c_th * (d.t.back() - d.t.front());
    REQUIRE(joule > 0.0);
    CHECK(joule >= (to_env + stored) * (1.0 - 0.01));
    CHECK(std::abs(joule - to_env - stored) <= 0.01 * joule);
}

TEST_CASE("determinism and seeded noise")
{
    const std::vector<Waveform> src{Dc{12.5}};
    auto o = options(kDefaultDt, 3e-6);
    CHECK(integrate(single(), src, o) == integrate(single(), src, o));

    o.noise = NoiseSpec{4000.0};
    o.seed = 42;
    const auto a = integrate(single(), src, o);
    const auto b = integrate(single(), src, o);
    CHECK(a == b);
    o.seed = 43;
    const auto c = integrate(single(), src, o);
    CHECK_FALSE(a == c);
}

TEST_CASE("invalid inputs are rejected")
{
    const std::vector<Waveform> src{Dc{12.5}};
    CHECK_THROWS_AS(integrate(single(), src, options(0.0, 1e-6)), std::invalid_argument);
    CHECK_THROWS_AS(integrate(single(), src, options(1e-9, -1.0)), std::invalid_argument);
    const std::vector<Waveform> two{Dc{1.0}, Dc{2.0}};
    CHECK_THROWS_AS(integrate(single(), two, options(1e-9, 1e-6)), std::invalid_argument);
    const std::vector<Waveform> bad{PulseTrain{1.0, 0.0, 1e-6, 1.2, 0.0, std::nullopt}};
    CHECK_THROWS_AS(integrate(single(), bad, options(1e-9, 1e-6)), std::invalid_argument);
    auto cfg = single();
    cfg.devices[0].c = -1.0;
    CHECK_THROWS_AS(integrate(cfg, src, options(1e-9, 1e-6)), std::invalid_argument);
}

TEST_CASE("recorded currents agree with the state")
{
    const auto cfg = single();
    const auto& p = cfg.devices[0];
    const std::vector<Waveform> src{Dc{12.5}};
    const auto tr = integrate(cfg, src, options(kDefaultDt, 4e-6));
    const auto& d = tr.devices[0];
    const auto peak = static_cast<std::size_t>(
        std::max_element(d.i_device.begin(), d.i_device.end()) - d.i_device.begin());
    REQUIRE(d.i_device[peak] > 2e-3);
    for (std::size_t i : {peak - 20, peak, peak + 20}) {
        CHECK(d.i_device[i] == Approx(d.v1[i] / d.r[i]).epsilon(1e-12));
        CHECK(d.i_load[i] == Approx((d.v_in[i] - d.v1[i]) / p.r_load).epsilon(1e-12));
    }
}
