#pragma once

// Pinned device pairs and built-in run configurations.
//
// Devices other than the fitted 12 kOhm neuristor are derived from it by
// thermal scaling: multiplying S_th and C_th by s leaves the dynamics
// unchanged under V -> sqrt(s) V, so a target DC threshold V* is realized
// with s = (V* / V0)^2, V0 being the unscaled threshold on the same load.
// Currents, and therefore detection thresholds, scale by sqrt(s).

#include "neuristor/config.hpp"

#include <array>
#include <string>
#include <vector>

namespace neuristor::scenarios {

// Unscaled DC thresholds of the fitted device at 325 K (bisection, 80 us horizon).
inline constexpr double kThreshold9k = 9.29361;
inline constexpr double kThreshold12k = 10.01089;
inline constexpr double kThreshold22k = 12.67802;
inline constexpr double kThreshold30k = 14.84511;
inline constexpr double kThresholdZeroLoad = 7.08926;  // switching to metallic

struct CalibratedDevice {
    DeviceParams params;
    DetectionSettings detection;
    double thermal_scale = 1.0;
};

/// Fitted device on `r_load` scaled so its DC threshold becomes `threshold`.
CalibratedDevice calibrated_device(double r_load, double threshold, double base_threshold);

struct PairScenario {
    NetworkConfig network;
    std::vector<DetectionSettings> detection;
    std::vector<std::string> names{"A", "B"};
};

/// Two fitted devices on 12 kOhm loads.
PairScenario paper_pair(double eta);

/// Cascade pair: A on 22 kOhm (threshold 4.5 V), B on 30 kOhm (threshold 5.8 V), eta 0.12.
PairScenario cascade_pair();
inline constexpr double kCascadeEta = 0.12;
inline constexpr double kCascadeBiasB = 5.7;
inline constexpr double kCascadeAmplitude = 9.1;
inline constexpr double kCascadePeriod = 1e-6;

/// Noisy integrate-and-fire study on the cascade pair.
inline constexpr double kLifDriveA = 5.0;
inline constexpr std::array<double, 3> kLifBiasLevels{4.3, 4.9, 5.5};
inline constexpr double kLifNoiseSigma = 4000.0;  // K / sqrt(s)
inline constexpr std::size_t kLifTrials = 8;
inline constexpr std::uint64_t kLifSeed = 7;
inline constexpr double kLifHorizon = 100e-6;
/// Single integrate-and-fire trace: A at 7 V, B at 5 V, same noise.
inline constexpr double kFig3cDriveA = 7.0;
inline constexpr double kFig3cBiasB = 5.0;

/// Excitatory/inhibitory pair on 12 kOhm: A threshold 2.88 V, B threshold 2.8 V.
PairScenario fig5_pair(double eta);
inline constexpr double kFig5ExcitatoryEta = 0.10;
inline constexpr double kFig5InhibitoryEta = 0.03;

/// Zero-load pair: A (threshold 0.5 V, k 1.238) pulsed, B (threshold 1.6 V) biased.
PairScenario spike_in_dc_out_pair();
/// A as above; B on 9 kOhm with threshold 2.77 V, eta 0.01.
PairScenario spike_in_spike_out_pair();

/// Horizon used by the pairwise synchronization sweeps.
inline constexpr double kSyncHorizon = 130e-6;

/// Built-in scenario names.
const std::vector<std::string>& names();

/// Pinned configuration for a built-in scenario. Throws std::out_of_range.
RunConfig builtin(const std::string& name);

}  // namespace neuristor::scenarios
