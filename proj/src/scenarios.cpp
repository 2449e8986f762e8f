#include "neuristor/scenarios.hpp"

#include "neuristor/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace neuristor::scenarios {

CalibratedDevice calibrated_device(double r_load, double threshold, double base_threshold)
{
    const double s = (threshold / base_threshold) * (threshold / base_threshold);
    return {scale_thermal(paper_fit_device(r_load), s),
            scale_detection(DetectionSettings{}, std::sqrt(s)), s};
}

namespace {

PairScenario make_pair(const CalibratedDevice& a, const CalibratedDevice& b, double eta)
{
    PairScenario p;
    p.network.devices = {a.params, b.params};
    p.network.eta = pair_coupling(eta);
    p.network.t0 = 325.0;
    p.detection = {a.detection, b.detection};
    return p;
}

CalibratedDevice zero_load_trigger()
{
    auto a = calibrated_device(0.0, 0.5, kThresholdZeroLoad);
    // Metallic resistance k * R_m of about 325 Ohm: 4 mA at 1.3 V.
    a.params.k = 1.238;
    return a;
}

}  // namespace

PairScenario paper_pair(double eta)
{
    return make_pair({paper_fit_device(12e3), {}, 1.0}, {paper_fit_device(12e3), {}, 1.0}, eta);
}

PairScenario cascade_pair()
{
    return make_pair(calibrated_device(22e3, 4.5, kThreshold22k),
                     calibrated_device(30e3, 5.8, kThreshold30k), kCascadeEta);
}

PairScenario fig5_pair(double eta)
{
    return make_pair(calibrated_device(12e3, 2.88, kThreshold12k),
                     calibrated_device(12e3, 2.8, kThreshold12k), eta);
}

PairScenario spike_in_dc_out_pair()
{
    return make_pair(zero_load_trigger(), calibrated_device(0.0, 1.6, kThresholdZeroLoad), 0.1);
}

PairScenario spike_in_spike_out_pair()
{
    return make_pair(zero_load_trigger(), calibrated_device(9e3, 2.77, kThreshold9k), 0.01);
}

const std::vector<std::string>& names()
{
    static const std::vector<std::string> all{"fig2a", "fig2b", "fig2c", "fig2d", "fig3a",
                                              "fig3b", "fig3c", "fig4",  "fig5c", "fig5f",
                                              "s11",   "s12",   "s13"};
    return all;
}

namespace {

RunConfig single(const std::string& name, double v_in, double horizon)
{
    RunConfig cfg;
    cfg.name = name;
    cfg.network = {{paper_fit_device(12e3)}, uncoupled(1), 325.0};
    cfg.device_names = {"A"};
    cfg.detection = {DetectionSettings{}};
    cfg.sources = {Dc{v_in}};
    cfg.solver.horizon = horizon;
    cfg.output.prefix = name;
    return cfg;
}

RunConfig pair(const std::string& name, const PairScenario& p, Waveform a, Waveform b,
               double horizon)
{
    RunConfig cfg;
    cfg.name = name;
    cfg.network = p.network;
    cfg.device_names = p.names;
    cfg.detection = p.detection;
    cfg.sources = {std::move(a), std::move(b)};
    cfg.solver.horizon = horizon;
    cfg.output.prefix = name;
    return cfg;
}

}  // namespace

RunConfig builtin(const std::string& name)
{
    if (name == "fig2a")
        return single(name, 9.0, 20e-6);
    if (name == "fig2b")
        return single(name, 12.5, 20e-6);
    if (name == "fig2c")
        return single(name, 15.8, 20e-6);
    if (name == "fig2d") {
        auto cfg = single(name, 12.5, 40e-6);
        cfg.sweep.rate = RateSweepSection{0, 9.0, 16.0, 0.1};
        return cfg;
    }
    if (name == "fig3a")
        return pair(name, spike_in_dc_out_pair(), Pulse{1.3, 0.0, 200e-9, 0.0}, Dc{1.5}, 10e-6);
    if (name == "fig3b")
        return pair(name, spike_in_spike_out_pair(), Pulse{3.3, 0.0, 200e-9, 0.0}, Dc{2.7},
                    60e-6);
    if (name == "fig3c") {
        auto cfg = pair(name, cascade_pair(), Dc{kFig3cDriveA}, Dc{kFig3cBiasB}, kLifHorizon);
        cfg.solver.noise_sigma = kLifNoiseSigma;
        cfg.solver.seed = kLifSeed;
        return cfg;
    }
    if (name == "fig4")
        return pair(name, cascade_pair(),
                    PulseTrain{kCascadeAmplitude, 0.0, kCascadePeriod, 0.5, 0.0, std::nullopt},
                    Dc{kCascadeBiasB}, 100e-6);
    if (name == "fig5c")
        return pair(name, fig5_pair(kFig5ExcitatoryEta), Dc{2.9}, Dc{2.6}, 60e-6);
    if (name == "fig5f")
        return pair(name, fig5_pair(kFig5InhibitoryEta), Dc{4.1}, Dc{4.1}, 60e-6);
    if (name == "s11") {
        auto cfg = pair(name, paper_pair(0.15), Dc{11.0}, Dc{9.4}, kSyncHorizon);
        cfg.sweep.coupling = CouplingSweepSection{11.0, 9.4, {0.03, 0.06, 0.09, 0.12, 0.15, 0.18, 0.2}};
        return cfg;
    }
    if (name == "s12") {
        auto cfg = pair(name, paper_pair(0.1), Dc{12.0}, Dc{9.4}, kSyncHorizon);
        cfg.sweep.drive = DriveMapSection{9.4, 9.0, 16.0, 0.5, 0.1};
        return cfg;
    }
    if (name == "s13") {
        auto cfg = pair(name, paper_pair(0.1), Dc{12.0}, Dc{14.0}, kSyncHorizon);
        cfg.sweep.drive = DriveMapSection{14.0, 9.0, 16.0, 0.5, 0.1};
        return cfg;
    }
    std::string known;
    for (const auto& n : names())
        known += (known.empty() ? "" : ", ") + n;
    throw std::out_of_range("unknown scenario '" + name + "' (known: " + known + ")");
}

}  // namespace neuristor::scenarios
