#pragma once

// Executes run configurations and built-in scenarios and writes their
// artifacts. File names are `<dir>/<prefix>_<artifact>.<ext>`; every writer is
// deterministic so reruns with the same seed are byte-identical.

#include "neuristor/analysis.hpp"
#include "neuristor/config.hpp"
#include "neuristor/fit.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace neuristor {

enum class SweepKind { rate, coupling, drive };
SweepKind sweep_kind_from_string(const std::string& name);

struct RunOutputs {
    std::vector<std::string> files;  ///< written paths, in write order
    nlohmann::json summary;
};

SimulationSettings simulation_settings(const RunConfig& cfg,
                                       Execution execution = Execution::parallel);

/// Integrates the configured network. Writes the trace (`_trace.csv`, or
/// `_trace.json` when the format is json), one spike list per device and a
/// `_summary.json` with modes and spike counts.
RunOutputs run_simulation(const RunConfig& cfg);

/// Runs the sweep section named by `kind`. Writes `_<kind>.csv` (csv format
/// only) and `_<kind>.json`. Throws ConfigError when the section is absent.
RunOutputs run_sweep(const RunConfig& cfg, SweepKind kind);

/// Fits hysteresis constants to R(T) data. Writes `_fit_hysteresis.json`.
RunOutputs run_hysteresis_fit(const RunConfig& cfg, const std::vector<RtSeries>& data);

/// Fits (C, k, S_th, C_th) of the first configured device to `target`, with
/// its hysteresis constants fixed. Writes `_fit_device.json`.
RunOutputs run_device_fit(const RunConfig& cfg, const SpikeFeatures& target);

/// Runs a built-in scenario on `cfg` (normally scenarios::builtin(name) with
/// command-line overrides applied). Sweep scenarios write their sweep; the
/// others write a simulation plus scenario-specific statistics.
RunOutputs run_scenario(const std::string& name, const RunConfig& cfg);

}  // namespace neuristor
