#pragma once

// Fixed-step classical RK4 integration of a neuristor network.
//
// Film resistances are evaluated at every stage on the branch state frozen at
// the start of the step; the hysteresis memory is advanced once per completed
// step. Zero-load devices have v1 pinned to their input voltage.

#include "neuristor/network.hpp"
#include "neuristor/sources.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace neuristor {

inline constexpr double kDefaultDt = 0.5e-9;  // s

/// Additive Gaussian temperature noise, applied after each step as
/// sigma * sqrt(dt) * N(0, 1) per device.
struct NoiseSpec {
    double temperature_sigma = 0.0;  ///< [K / sqrt(s)]
    bool operator==(const NoiseSpec&) const = default;
};

struct IntegrateOptions {
    double dt = kDefaultDt;
    double horizon = 20e-6;
    std::optional<NoiseSpec> noise;
    std::uint64_t seed = 0;
    double reversal_eps = kDefaultReversalEps;
    std::size_t record_stride = 1;  ///< keep every n-th step
    std::vector<DeviceState> initial;  ///< empty: every device starts at rest
};

struct DeviceChannels {
    std::vector<double> v_in;      // V
    std::vector<double> v1;        // V
    std::vector<double> t;         // K
    std::vector<double> r;         // ohm
    std::vector<double> i_device;  // A
    std::vector<double> i_load;    // A

    bool operator==(const DeviceChannels&) const = default;
};

struct Trace {
    double dt = 0.0;  ///< sample spacing [s]
    double t_start = 0.0;
    std::vector<DeviceChannels> devices;
    std::vector<DeviceState> final_states;
    std::vector<DeviceParams> params;

    std::size_t size() const { return devices.empty() ? 0 : devices.front().v1.size(); }
    double time(std::size_t i) const { return t_start + static_cast<double>(i) * dt; }
    double end_time() const { return size() == 0 ? t_start : time(size() - 1); }
    bool operator==(const Trace&) const = default;
};

class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step)
    {
    }
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Throws std::invalid_argument for an invalid network, waveform or option set
/// and SimulationError when the state stops being finite.
Trace integrate(const NetworkConfig& cfg, std::span<const Waveform> sources,
                const IntegrateOptions& options);

}  // namespace neuristor
