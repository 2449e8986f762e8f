#include "neuristor/device.hpp"

#include <cmath>

namespace neuristor {

DeviceParams paper_fit_device(double r_load)
{
    DeviceParams p;
    p.c = 145e-12;
    p.k = 4.90;
    p.s_th = 0.206e-3;
    p.c_th = 49.6e-12;
    p.r_load = r_load;
    p.hysteresis = paper_fit_2023();
    return p;
}

std::vector<std::string> validate(const DeviceParams& p)
{
    std::vector<std::string> issues;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            issues.push_back(std::string(name) + " must be finite and > 0");
    };
    positive(p.c, "c");
    positive(p.s_th, "s_th");
    positive(p.c_th, "c_th");
    if (!(p.k >= 1.0) || !std::isfinite(p.k))
        issues.push_back("k must be >= 1");
    if (!(p.r_load >= 0.0) || !std::isfinite(p.r_load))
        issues.push_back("r_load must be >= 0");
    for (auto& msg : validate(p.hysteresis))
        issues.push_back("hysteresis." + msg);
    return issues;
}

DeviceState rest_state(double t0)
{
    DeviceState s;
    s.v1 = 0.0;
    s.t = t0;
    s.branch = major_loop_state(t0, +1);
    return s;
}

Derivatives electro_thermal_rates(double v1, double t, double r_vo2, double v_in, double t0,
                                  const DeviceParams& p)
{
    Derivatives d;
    if (p.zero_load()) {
        d.dv1 = 0.0;
        d.dt = v_in * v_in / (r_vo2 * p.c_th) - p.s_th * (t - t0) / p.c_th;
        return d;
    }
    d.dv1 = v_in / (p.r_load * p.c) - v1 * (1.0 / (r_vo2 * p.c) + 1.0 / (p.r_load * p.c));
    d.dt = v1 * v1 / (r_vo2 * p.c_th) - p.s_th * (t - t0) / p.c_th;
    return d;
}

double device_resistance(const DeviceState& state, const DeviceParams& p)
{
    return resistance(state.t, state.branch, p.hysteresis, p.k, ResistanceMode::dynamic);
}

Derivatives device_derivatives(const DeviceState& state, double v_in, double t0,
                               const DeviceParams& p)
{
    return electro_thermal_rates(state.v1, state.t, device_resistance(state, p), v_in, t0, p);
}

Currents observable_currents(const DeviceState& state, double v_in, const DeviceParams& p)
{
    const double r = device_resistance(state, p);
    Currents c;
    if (p.zero_load()) {
        c.i_device = v_in / r;
        c.i_load = c.i_device;
        return c;
    }
    c.i_device = state.v1 / r;
    c.i_load = (v_in - state.v1) / p.r_load;
    return c;
}

}  // namespace neuristor
