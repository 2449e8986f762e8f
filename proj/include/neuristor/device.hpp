#pragma once

// Single neuristor: VO2 film in parallel with a parasitic capacitance, in
// series with a load resistor, exchanging heat with a fixed-temperature bath.

#include "neuristor/hysteresis.hpp"

#include <string>
#include <vector>

namespace neuristor {

struct DeviceParams {
    double c = 0.0;       ///< parasitic capacitance [F]
    double k = 1.0;       ///< metallic-channel resistance factor
    double s_th = 0.0;    ///< thermal conductance to the environment [W/K]
    double c_th = 0.0;    ///< thermal capacitance [J/K]
    double r_load = 0.0;  ///< series load [ohm]; 0 selects the zero-load variant
    HysteresisParams hysteresis;

    bool zero_load() const { return r_load == 0.0; }
    bool operator==(const DeviceParams&) const = default;
};

/// Device constants fitted to the single-neuristor spike features.
DeviceParams paper_fit_device(double r_load = 12e3);

std::vector<std::string> validate(const DeviceParams& p);

struct DeviceState {
    double v1 = 0.0;  ///< voltage across the device [V]
    double t = 0.0;   ///< device temperature [K]
    BranchState branch;

    bool operator==(const DeviceState&) const = default;
};

/// Unbiased device at ambient temperature on the major heating branch.
DeviceState rest_state(double t0);

struct Derivatives {
    double dv1 = 0.0;  ///< [V/s]
    double dt = 0.0;   ///< [K/s]
};

/// Rates for a given film resistance. With zero load, v1 is pinned to v_in
/// and only the thermal rate is meaningful (dv1 is reported as 0).
Derivatives electro_thermal_rates(double v1, double t, double r_vo2, double v_in, double t0,
                                  const DeviceParams& p);

Derivatives device_derivatives(const DeviceState& state, double v_in, double t0,
                               const DeviceParams& p);

double device_resistance(const DeviceState& state, const DeviceParams& p);

struct Currents {
    double i_device = 0.0;  ///< through the VO2 film [A]
    double i_load = 0.0;    ///< through the load resistor [A]
};

Currents observable_currents(const DeviceState& state, double v_in, const DeviceParams& p);

}  // namespace neuristor
