#include "neuristor/analysis.hpp"
#include "neuristor/scenarios.hpp"

#include "golden.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace neuristor;
using doctest::Approx;

namespace {

SpikeTrain regular(double first, double period, std::size_t n)
{
    SpikeTrain t;
    for (std::size_t i = 0; i < n; ++i)
        t.events.push_back({first + static_cast<double>(i) * period, 5e-3, 1e-7});
    return t;
}

NetworkRun single_run(double v_in, double horizon = 20e-6)
{
    const NetworkConfig cfg{{paper_fit_device(12e3)}, uncoupled(1), 325.0};
    const std::vector<Waveform> src{Dc{v_in}};
    const std::vector<DetectionSettings> det{DetectionSettings{}};
    SimulationSettings s;
    s.horizon = horizon;
    return run_network(cfg, src, det, s);
}

}  // namespace

TEST_CASE("sync ratio on constructed trains")
{
    SUBCASE("identical trains lock 1:1 with zero lag")
    {
        const auto a = regular(1e-6, 1e-6, 40);
        const auto r = sync_ratio(a, a, 0.0, 1.0);
        CHECK(r.ratio_label() == "1:1");
        CHECK(r.lock_defined);
        CHECK(r.lock_fraction == 1.0);
        CHECK(r.mean_lag == 0.0);
        CHECK_FALSE(r.few_spikes);
    }
    SUBCASE("A at twice the rate of B")
    {
        const auto a = regular(0.0, 1e-6, 80);
        const auto b = regular(0.0, 2e-6, 40);
        const auto r = sync_ratio(a, b, 0.0, 80e-6);
        CHECK(r.n == 2);
        CHECK(r.m == 1);
        CHECK_FALSE(r.mixed);
        CHECK(r.lock_fraction == 1.0);
    }
    SUBCASE("incommensurate rates are mixed")
    {
        const auto a = regular(0.0, 1e-6, 100);
        const auto b = regular(0.3e-6, 100e-6 / 37.0, 37);
        const auto r = sync_ratio(a, b, 0.0, 100e-6);
        CHECK(r.mixed);
        CHECK(r.ratio_label() == "mixed");
    }
    SUBCASE("an empty train leaves the lock undefined")
    {
        const auto r = sync_ratio(regular(0.0, 1e-6, 10), SpikeTrain{}, 0.0, 1.0);
        CHECK_FALSE(r.lock_defined);
        CHECK(r.few_spikes);
        CHECK(r.count_b == 0);
    }
}

TEST_CASE("response labels")
{
    OperatingMode spiking{Mode::spiking}, quiet{Mode::quiescent}, trapped{Mode::trapped_metallic};
    SyncReport one_one;
    one_one.n = one_one.m = 1;
    one_one.count_a = one_one.count_b = 30;
    CHECK(response_label(spiking, quiet, one_one) == "quiescent");
    CHECK(response_label(spiking, trapped, one_one) == "trapped");
    CHECK(response_label(quiet, spiking, one_one) == "spiking");
    CHECK(response_label(spiking, spiking, one_one) == "1:1");
    SyncReport mixed = one_one;
    mixed.mixed = true;
    CHECK(response_label(spiking, spiking, mixed) == "mixed");
}

TEST_CASE("integration counts between B spikes")
{
    const auto a = regular(0.5e-6, 1e-6, 20);
    const auto b = regular(0.6e-6, 3e-6, 6);
    const auto counts = integration_counts(a, b, 0.0, 1.0);
    REQUIRE(counts.size() == 5);
    for (int c : counts)
        CHECK(c == 3);
}

TEST_CASE("single-device operating modes")
{
    const auto quiet = single_run(9.0);
    CHECK(quiet.modes[0].label == Mode::quiescent);
    CHECK(quiet.trains[0].empty());

    const auto spiking = single_run(12.5);
    CHECK(spiking.modes[0].label == Mode::spiking);
    check_against_golden(spiking.trains[0], "fig2b_spikes.csv");
    const auto& ev = spiking.trains[0].events;
    REQUIRE(ev.size() >= 3);
    for (std::size_t k = 1; k < ev.size(); ++k) {
        CHECK(ev[0].amplitude > ev[k].amplitude);
        CHECK(std::abs(ev[k].amplitude / ev[1].amplitude - 1.0) <= 0.10);
    }
    // Energy per spike is stable after the first.
    std::vector<double> energy;
    for (std::size_t k = 1; k + 1 < ev.size(); ++k)
        energy.push_back(spike_energy(spiking.trace, 0, ev[k].peak_time - 0.5e-6,
                                      ev[k].peak_time + 0.5e-6));
    for (double e : energy)
        CHECK(std::abs(e / energy.front() - 1.0) <= 0.10);

    const auto trapped = single_run(15.8);
    CHECK(trapped.modes[0].label == Mode::trapped_metallic);
    CHECK(trapped.modes[0].final_current == Approx(1.11e-3).epsilon(0.01));
    CHECK(trapped.trains[0].size() == 2);
}

TEST_CASE("thermal scaling maps thresholds by sqrt(s)")
{
    const double s = 4.0;
    const NetworkConfig base{{paper_fit_device(12e3)}, uncoupled(1), 325.0};
    NetworkConfig scaled = base;
    scaled.devices[0] = scale_thermal(base.devices[0], s);
    CHECK(scaled.devices[0].s_th == Approx(4.0 * base.devices[0].s_th));
    CHECK(scaled.devices[0].c_th == Approx(4.0 * base.devices[0].c_th));

    SimulationSettings settings;
    settings.horizon = 12e-6;
    const std::vector<Waveform> v1{Dc{12.5}}, v2{Dc{25.0}};
    const std::vector<DetectionSettings> d1{DetectionSettings{}};
    const std::vector<DetectionSettings> d2{scale_detection(DetectionSettings{}, 2.0)};
    const auto a = run_network(base, v1, d1, settings);
    const auto b = run_network(scaled, v2, d2, settings);
    REQUIRE(a.trains[0].size() == b.trains[0].size());
    for (std::size_t k = 0; k < a.trains[0].size(); ++k) {
        CHECK(std::abs(a.trains[0].events[k].peak_time - b.trains[0].events[k].peak_time) < 1e-9);
        CHECK(b.trains[0].events[k].amplitude == Approx(2.0 * a.trains[0].events[k].amplitude).epsilon(1e-6));
    }
}

TEST_CASE("serial and parallel sweeps agree")
{
    const auto device = paper_fit_device(12e3);
    SimulationSettings s;
    s.horizon = 20e-6;
    s.execution = Execution::serial;
    const auto serial = rate_coding_sweep(device, {}, 325.0, 9.5, 16.0, 1.3, s);
    s.execution = Execution::parallel;
    const auto parallel = rate_coding_sweep(device, {}, 325.0, 9.5, 16.0, 1.3, s);
    REQUIRE(serial.points.size() == parallel.points.size());
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        CHECK(serial.points[i].v_in == parallel.points[i].v_in);
        CHECK(serial.points[i].frequency == parallel.points[i].frequency);
        CHECK(serial.points[i].mode.label == parallel.points[i].mode.label);
    }
    CHECK(serial.threshold_low == parallel.threshold_low);
    CHECK(serial.cutoff_high == parallel.cutoff_high);
    CHECK(serial.points.front().mode.label == Mode::quiescent);
    CHECK(serial.points.front().frequency == 0.0);
}

TEST_CASE("coupled pair golden at eta 0.18")
{
    const auto pair = scenarios::paper_pair(0.18);
    const std::vector<Waveform> src{Dc{11.0}, Dc{9.4}};
    SimulationSettings s;
    s.horizon = scenarios::kSyncHorizon;
    const auto run = run_network(pair.network, src, pair.detection, s);
    check_against_golden(run.trains[0], "pair_eta018_A_spikes.csv");
    check_against_golden(run.trains[1], "pair_eta018_B_spikes.csv");
    const auto sync = sync_ratio(run.trains[0], run.trains[1], s.settle_time(), s.horizon + s.dt);
    CHECK(sync.ratio_label() == "1:1");
    CHECK(sync.lock_fraction >= 0.9);
}

TEST_CASE("drive map is a pure function of its inputs")
{
    const auto pair = scenarios::paper_pair(0.1);
    SimulationSettings s;
    s.horizon = 40e-6;
    const auto a = drive_response_map(pair.network, pair.detection, 9.4, 11.0, 13.0, 1.0, 0.1, s);
    const auto b = drive_response_map(pair.network, pair.detection, 9.4, 11.0, 13.0, 1.0, 0.1, s);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].v_a == b[i].v_a);
        CHECK(a[i].label == b[i].label);
        CHECK(a[i].sync.mean_lag == b[i].sync.mean_lag);
    }
}

TEST_CASE("cascade rate coding propagates")
{
    SimulationSettings s;
    s.horizon = 40e-6;
    const auto low = cascade_scenario(0.5, 9.1, s);
    const auto high = cascade_scenario(0.5, 11.0, s);
    CHECK(high.run.modes[0].mean_frequency > low.run.modes[0].mean_frequency);
    CHECK(low.input_pulses == 40);
    CHECK_THROWS_AS(cascade_scenario(1.0, 9.1, s), std::invalid_argument);
}

TEST_CASE("noisy integrate-and-fire statistics")
{
    const auto pair = scenarios::cascade_pair();
    SimulationSettings s;
    s.horizon = 40e-6;
    const std::vector<double> levels{5.2};

    // Without noise every trial repeats the same periodic 2:1 pattern.
    SimulationSettings quiet = s;
    quiet.horizon = 100e-6;
    const auto silent = stochastic_lif_histogram(pair.network, pair.detection, scenarios::kLifDriveA,
                                                 levels, NoiseSpec{0.0}, 2, 1, quiet);
    REQUIRE(silent.size() == 1);
    CHECK(silent[0].bins.size() == 1);
    CHECK(silent[0].bins.count(2) == 1);
    CHECK(silent[0].samples % 2 == 0);
    CHECK(silent[0].variance == 0.0);

    const auto a = stochastic_lif_histogram(pair.network, pair.detection, scenarios::kLifDriveA,
                                            levels, NoiseSpec{scenarios::kLifNoiseSigma}, 2, 5, s);
    const auto b = stochastic_lif_histogram(pair.network, pair.detection, scenarios::kLifDriveA,
                                            levels, NoiseSpec{scenarios::kLifNoiseSigma}, 2, 5, s);
    CHECK(a[0].bins == b[0].bins);
    CHECK(a[0].mean == b[0].mean);
}

TEST_CASE("derived seeds are distinct")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i)
        seen.insert(derive_seed(7, i));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}
