#pragma once

// Run configuration documents (JSON, schema_version 1).
//
// {
//   "schema_version": 1,
//   "name": "fig2b",
//   "network": {
//     "t0_K": 325,
//     "eta": [[0]],
//     "devices": [{ "name": "A", "r_load_ohm": 12000, "c_F": 1.45e-10, ... ,
//                   "hysteresis": { "r0_ohm": ..., "reversal_form": "inverse_tanh" },
//                   "detection": { "hi_A": 2e-3, "lo_A": 1e-3, "plateau_floor_A": 2e-4 } }]
//   },
//   "sources": [{ "type": "dc", "level_V": 12.5 }],
//   "solver": { "dt_s": 5e-10, "horizon_s": 2e-5, "seed": 0, "noise_K_per_sqrt_s": 0 },
//   "sweep": { "rate": {...} | "coupling": {...} | "drive": {...} },
//   "fit": { ... },
//   "output": { "dir": "out", "prefix": "fig2b", "format": "csv" }
// }
//
// Device fields missing from the document default to the built-in fitted constants.

#include "neuristor/solver.hpp"
#include "neuristor/spikes.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace neuristor {

inline constexpr int kSchemaVersion = 1;

/// Parse or schema failure. `field` is a JSON path such as `sources[0].duty`.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct SolverSection {
    double dt = kDefaultDt;
    double horizon = 20e-6;
    std::uint64_t seed = 0;
    double noise_sigma = 0.0;  ///< K/sqrt(s); 0 disables noise
    std::size_t record_stride = 1;
    double reversal_eps = kDefaultReversalEps;
    double settle = 0.0;  ///< 0 selects the default settle time
    bool operator==(const SolverSection&) const = default;
};

struct RateSweepSection {
    std::size_t device = 0;
    double v_min = 9.0;
    double v_max = 16.0;
    double step = 0.1;
    bool operator==(const RateSweepSection&) const = default;
};

struct CouplingSweepSection {
    double v_a = 11.0;
    double v_b = 9.4;
    std::vector<double> etas;
    bool operator==(const CouplingSweepSection&) const = default;
};

struct DriveMapSection {
    double v_b = 9.4;
    double v_a_min = 9.0;
    double v_a_max = 16.0;
    double step = 0.5;
    double eta = 0.1;
    bool operator==(const DriveMapSection&) const = default;
};

struct SweepSection {
    std::optional<RateSweepSection> rate;
    std::optional<CouplingSweepSection> coupling;
    std::optional<DriveMapSection> drive;
    bool operator==(const SweepSection&) const = default;
};

struct FitSection {
    std::size_t population = 0;  ///< 0 selects 15 x dimension
    double f = 0.5;
    double cr = 0.9;
    std::size_t max_generations = 300;
    double tolerance = 1e-12;
    std::uint64_t seed = 1;
    /// Optional per-parameter (low, high) overrides keyed by parameter name.
    std::map<std::string, std::pair<double, double>> bounds;
    /// Drive used by the device fit.
    double v_in = 12.5;
    double r_load = 12e3;
    double t0 = 325.0;
    double horizon = 20e-6;
    bool operator==(const FitSection&) const = default;
};

struct OutputSection {
    std::string dir = ".";
    std::string prefix = "run";
    std::string format = "csv";
    bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    std::string name = "run";
    NetworkConfig network;
    std::vector<std::string> device_names;
    std::vector<DetectionSettings> detection;
    std::vector<Waveform> sources;
    SolverSection solver;
    SweepSection sweep;
    FitSection fit;
    OutputSection output;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a document. `origin` names the source in messages.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Reads, parses and validates a configuration file.
RunConfig load_config(const std::string& path);

RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& cfg);

/// Every issue found in a config: schema problems and network invariants.
std::vector<std::string> validate(const RunConfig& cfg);

nlohmann::json waveform_to_json(const Waveform& w);
nlohmann::json device_to_json(const DeviceParams& p, const std::string& name,
                              const DetectionSettings& detection);

IntegrateOptions integrate_options(const RunConfig& cfg);

}  // namespace neuristor
