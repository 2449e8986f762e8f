#include "neuristor/runner.hpp"

#include "neuristor/io.hpp"
#include "neuristor/scenarios.hpp"

#include <sstream>

namespace neuristor {

using nlohmann::json;

SweepKind sweep_kind_from_string(const std::string& name)
{
    if (name == "rate")
        return SweepKind::rate;
    if (name == "coupling")
        return SweepKind::coupling;
    if (name == "drive")
        return SweepKind::drive;
    throw std::invalid_argument("unknown sweep kind '" + name + "' (rate, coupling, drive)");
}

SimulationSettings simulation_settings(const RunConfig& cfg, Execution execution)
{
    SimulationSettings s;
    s.dt = cfg.solver.dt;
    s.horizon = cfg.solver.horizon;
    s.settle = cfg.solver.settle;
    s.record_stride = cfg.solver.record_stride;
    s.seed = cfg.solver.seed;
    if (cfg.solver.noise_sigma > 0.0)
        s.noise = NoiseSpec{cfg.solver.noise_sigma};
    s.reversal_eps = cfg.solver.reversal_eps;
    s.execution = execution;
    return s;
}

namespace {

std::string artifact(const RunConfig& cfg, const std::string& suffix)
{
    std::string dir = cfg.output.dir.empty() ? "." : cfg.output.dir;
    if (dir.back() != '/')
        dir += '/';
    return dir + cfg.output.prefix + "_" + suffix;
}

bool csv_format(const RunConfig& cfg) { return cfg.output.format != "json"; }

void emit(RunOutputs& out, const std::string& path, const std::string& text)
{
    write_file(path, text);
    out.files.push_back(path);
}

template <class Writer, class Value>
std::string render(Writer writer, const Value& value)
{
    std::ostringstream os;
    writer(os, value);
    return os.str();
}

json trace_to_json(const Trace& trace)
{
    json devices = json::array();
    for (const auto& d : trace.devices)
        devices.push_back({{"vin_V", d.v_in},
                           {"v1_V", d.v1},
                           {"T_K", d.t},
                           {"R_ohm", d.r},
                           {"Idev_A", d.i_device},
                           {"Iload_A", d.i_load}});
    return {{"dt_s", trace.dt}, {"t_start_s", trace.t_start}, {"devices", devices}};
}

json train_to_json(const SpikeTrain& train)
{
    json events = json::array();
    for (const auto& e : train.events)
        events.push_back(
            {{"peak_time_s", e.peak_time}, {"amplitude_A", e.amplitude}, {"width_s", e.width}});
    return events;
}

std::string device_name(const RunConfig& cfg, std::size_t i)
{
    return i < cfg.device_names.size() && !cfg.device_names[i].empty()
               ? cfg.device_names[i]
               : "dev" + std::to_string(i);
}

std::vector<DetectionSettings> detection_for(const RunConfig& cfg)
{
    auto det = cfg.detection;
    det.resize(cfg.network.devices.size());
    return det;
}

// Simulation plus per-device spikes; the summary is returned for extension.
RunOutputs simulate_and_write(const RunConfig& cfg, NetworkRun& run)
{
    const auto settings = simulation_settings(cfg);
    const auto det = detection_for(cfg);
    run = run_network(cfg.network, cfg.sources, det, settings);

    RunOutputs out;
    json devices = json::array();
    for (std::size_t i = 0; i < run.trains.size(); ++i) {
        const auto name = device_name(cfg, i);
        if (csv_format(cfg))
            emit(out, artifact(cfg, name + "_spikes.csv"), render(write_spikes_csv, run.trains[i]));
        json d = {{"name", name}, {"mode", to_json(run.modes[i])}};
        if (!csv_format(cfg))
            d["spikes"] = train_to_json(run.trains[i]);
        devices.push_back(d);
    }
    if (csv_format(cfg))
        emit(out, artifact(cfg, "trace.csv"), render(write_trace_csv, run.trace));
    else
        emit(out, artifact(cfg, "trace.json"), dump(trace_to_json(run.trace)));

    out.summary = {{"name", cfg.name},
                   {"seed", cfg.solver.seed},
                   {"dt_s", cfg.solver.dt},
                   {"horizon_s", cfg.solver.horizon},
                   {"settle_s", settings.settle_time()},
                   {"devices", devices}};
    return out;
}

void write_summary(const RunConfig& cfg, RunOutputs& out)
{
    emit(out, artifact(cfg, "summary.json"), dump(out.summary));
}

FitOptions fit_options(const FitSection& f)
{
    FitOptions o;
    o.population = f.population;
    o.f = f.f;
    o.cr = f.cr;
    o.max_generations = f.max_generations;
    o.tolerance = f.tolerance;
    o.seed = f.seed;
    o.bounds = f.bounds;
    return o;
}

void require_pair(const RunConfig& cfg, const std::string& what)
{
    if (cfg.network.devices.size() != 2)
        throw ConfigError("network.devices", what + " requires exactly two devices");
}

json lif_to_json(const std::vector<LifHistogram>& hists)
{
    json levels = json::array();
    for (const auto& h : hists) {
        json bins = json::object();
        for (const auto& [count, n] : h.bins)
            bins[std::to_string(count)] = n;
        levels.push_back({{"v_b_V", h.v_b},
                          {"samples", h.samples},
                          {"mean", h.mean},
                          {"variance", h.variance},
                          {"bins", bins}});
    }
    return levels;
}

}  // namespace

RunOutputs run_simulation(const RunConfig& cfg)
{
    NetworkRun run;
    auto out = simulate_and_write(cfg, run);
    write_summary(cfg, out);
    return out;
}

RunOutputs run_sweep(const RunConfig& cfg, SweepKind kind)
{
    const auto settings = simulation_settings(cfg);
    const auto det = detection_for(cfg);
    RunOutputs out;

    switch (kind) {
    case SweepKind::rate: {
        if (!cfg.sweep.rate)
            throw ConfigError("sweep.rate", "section missing");
        const auto& s = *cfg.sweep.rate;
        if (s.device >= cfg.network.devices.size())
            throw ConfigError("sweep.rate.device", "no such device");
        const auto curve = rate_coding_sweep(cfg.network.devices[s.device], det[s.device],
                                             cfg.network.t0, s.v_min, s.v_max, s.step, settings);
        if (csv_format(cfg))
            emit(out, artifact(cfg, "rate.csv"), render(write_rate_csv, curve));
        out.summary = rate_to_json(curve);
        emit(out, artifact(cfg, "rate.json"), dump(out.summary));
        break;
    }
    case SweepKind::coupling: {
        if (!cfg.sweep.coupling)
            throw ConfigError("sweep.coupling", "section missing");
        require_pair(cfg, "coupling sweep");
        const auto& s = *cfg.sweep.coupling;
        const auto points = coupling_sweep(cfg.network, det, s.v_a, s.v_b, s.etas, settings);
        if (csv_format(cfg))
            emit(out, artifact(cfg, "coupling.csv"), render(write_coupling_csv, points));
        out.summary = coupling_to_json(points);
        emit(out, artifact(cfg, "coupling.json"), dump(out.summary));
        break;
    }
    case SweepKind::drive: {
        if (!cfg.sweep.drive)
            throw ConfigError("sweep.drive", "section missing");
        require_pair(cfg, "drive map");
        const auto& s = *cfg.sweep.drive;
        const auto points = drive_response_map(cfg.network, det, s.v_b, s.v_a_min, s.v_a_max,
                                               s.step, s.eta, settings);
        if (csv_format(cfg))
            emit(out, artifact(cfg, "drive.csv"), render(write_drive_csv, points));
        out.summary = drive_to_json(points);
        emit(out, artifact(cfg, "drive.json"), dump(out.summary));
        break;
    }
    }
    return out;
}

RunOutputs run_hysteresis_fit(const RunConfig& cfg, const std::vector<RtSeries>& data)
{
    const auto form = cfg.network.devices.empty()
                          ? ReversalForm::inverse_tanh
                          : cfg.network.devices.front().hysteresis.reversal_form;
    const auto fit = fit_hysteresis(data, fit_options(cfg.fit), form);
    RunOutputs out;
    out.summary = to_json(fit);
    emit(out, artifact(cfg, "fit_hysteresis.json"), dump(out.summary));
    return out;
}

RunOutputs run_device_fit(const RunConfig& cfg, const SpikeFeatures& target)
{
    if (cfg.network.devices.empty())
        throw ConfigError("network.devices", "device fit needs a device for its hysteresis constants");
    DeviceDrive drive;
    drive.v_in = cfg.fit.v_in;
    drive.r_load = cfg.fit.r_load;
    drive.t0 = cfg.fit.t0;
    drive.horizon = cfg.fit.horizon;
    drive.dt = cfg.solver.dt;
    const auto fit =
        fit_device(target, cfg.network.devices.front().hysteresis, drive, fit_options(cfg.fit));
    RunOutputs out;
    out.summary = to_json(fit);
    out.summary["target"] = to_json(target);
    emit(out, artifact(cfg, "fit_device.json"), dump(out.summary));
    return out;
}

RunOutputs run_scenario(const std::string& name, const RunConfig& cfg)
{
    if (name == "fig2d") {
        NetworkRun run;
        auto out = simulate_and_write(cfg, run);
        auto sweep = run_sweep(cfg, SweepKind::rate);
        out.files.insert(out.files.end(), sweep.files.begin(), sweep.files.end());
        out.summary["rate"] = {{"threshold_low_V", sweep.summary["threshold_low_V"]},
                               {"cutoff_high_V", sweep.summary["cutoff_high_V"]},
                               {"spiking_intervals", sweep.summary["spiking_intervals"]}};
        write_summary(cfg, out);
        return out;
    }
    if (name == "s11")
        return run_sweep(cfg, SweepKind::coupling);
    if (name == "s12" || name == "s13")
        return run_sweep(cfg, SweepKind::drive);

    NetworkRun run;
    auto out = simulate_and_write(cfg, run);
    const auto settings = simulation_settings(cfg);

    if (name == "fig4") {
        require_pair(cfg, name);
        const auto counts = integration_counts(run.trains[0], run.trains[1],
                                               settings.settle_time(), settings.horizon + settings.dt);
        const auto sync = sync_ratio(run.trains[0], run.trains[1], settings.settle_time(),
                                     settings.horizon + settings.dt);
        out.summary["cascade"] = {{"a_spikes_per_b_spike", counts}, {"sync", to_json(sync)}};
        // The higher duty cycle of the same study, for comparison.
        const auto det = detection_for(cfg);
        const auto high = cascade_run(cfg.network, det, 0.8, scenarios::kCascadeAmplitude,
                                      scenarios::kCascadeBiasB, settings);
        out.summary["cascade_duty_0.8"] = {{"a_spikes_per_b_spike", high.a_spikes_per_b_spike},
                                           {"a_spikes", high.run.trains[0].size()},
                                           {"b_spikes", high.run.trains[1].size()}};
    } else if (name == "fig3c") {
        require_pair(cfg, name);
        out.summary["integration_counts"] =
            integration_counts(run.trains[0], run.trains[1], settings.settle_time(),
                               settings.horizon + settings.dt);
        const auto det = detection_for(cfg);
        const auto hists = stochastic_lif_histogram(
            cfg.network, det, scenarios::kLifDriveA, scenarios::kLifBiasLevels,
            NoiseSpec{cfg.solver.noise_sigma}, scenarios::kLifTrials, cfg.solver.seed, settings);
        const json lif = {{"v_a_V", scenarios::kLifDriveA},
                          {"noise_K_per_sqrt_s", cfg.solver.noise_sigma},
                          {"trials", scenarios::kLifTrials},
                          {"seed", cfg.solver.seed},
                          {"levels", lif_to_json(hists)}};
        emit(out, artifact(cfg, "lif_histogram.json"), dump(lif));
    } else if (cfg.network.devices.size() == 2) {
        const auto sync = sync_ratio(run.trains[0], run.trains[1], settings.settle_time(),
                                     settings.horizon + settings.dt);
        out.summary["sync"] = to_json(sync);
    }
    write_summary(cfg, out);
    return out;
}

}  // namespace neuristor
