#pragma once

// N devices exchanging heat through the substrate. Device i routes a fraction
// eta[i][j] of its thermal conductance to device j and the rest,
// (1 - sum_j eta[i][j]) * s_th, to the environment.

#include "neuristor/device.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace neuristor {

using CouplingMatrix = std::vector<std::vector<double>>;

struct NetworkConfig {
    std::vector<DeviceParams> devices;
    CouplingMatrix eta;
    double t0 = 325.0;  ///< ambient temperature [K]

    std::size_t size() const { return devices.size(); }
    bool operator==(const NetworkConfig&) const = default;
};

/// Zero coupling matrix for `n` devices.
CouplingMatrix uncoupled(std::size_t n);

/// Symmetric two-device matrix with off-diagonal `eta`.
CouplingMatrix pair_coupling(double eta);

struct Violation {
    std::string message;
    int i = -1;  ///< row index, or -1 when not index-specific
    int j = -1;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_coupling(const NetworkConfig& cfg);

/// Checked derivative evaluation; throws std::invalid_argument on dimension
/// mismatch or an invalid coupling matrix.
std::vector<Derivatives> network_derivatives(std::span<const DeviceState> states,
                                             std::span<const double> v_ins,
                                             const NetworkConfig& cfg);

/// Precomputed, unchecked form used inside the integrator.
class NetworkModel {
public:
    explicit NetworkModel(const NetworkConfig& cfg);

    std::size_t size() const { return devices_.size(); }
    const DeviceParams& device(std::size_t i) const { return devices_[i]; }
    double ambient() const { return t0_; }

    /// Rates for frozen film resistances `r` (one per device).
    void rates(std::span<const double> v1, std::span<const double> t, std::span<const double> r,
               std::span<const double> v_in, std::span<Derivatives> out) const;

    /// Heat flow from device i into device j [W].
    double coupling_flow(std::size_t i, std::size_t j, std::span<const double> t) const;

    /// Heat flow from device i into the environment [W].
    double environment_flow(std::size_t i, double t_i) const;

private:
    std::vector<DeviceParams> devices_;
    std::vector<double> g_env_;     // W/K per device
    std::vector<double> g_couple_;  // W/K, row-major N x N
    double t0_;
};

}  // namespace neuristor
