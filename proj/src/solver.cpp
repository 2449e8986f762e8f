#include "neuristor/solver.hpp"

#include <cmath>
#include <random>
#include <string>

namespace neuristor {

namespace {

void check_inputs(const NetworkConfig& cfg, std::span<const Waveform> sources,
                  const IntegrateOptions& o)
{
    const auto report = validate_coupling(cfg);
    if (!report.ok())
        throw std::invalid_argument("invalid network\n" + report.to_string());
    if (sources.size() != cfg.size())
        throw std::invalid_argument("expected one waveform per device");
    for (std::size_t i = 0; i < sources.size(); ++i)
        for (const auto& [field, msg] : validate(sources[i]))
            throw std::invalid_argument("sources[" + std::to_string(i) + "]." + field + " " + msg);
    if (!(o.dt > 0.0) || !std::isfinite(o.dt))
        throw std::invalid_argument("dt must be > 0");
    if (!(o.horizon >= o.dt) || !std::isfinite(o.horizon))
        throw std::invalid_argument("horizon must be >= dt");
    if (o.record_stride == 0)
        throw std::invalid_argument("record_stride must be >= 1");
    if (!o.initial.empty() && o.initial.size() != cfg.size())
        throw std::invalid_argument("initial state count does not match device count");
    if (o.noise && !(o.noise->temperature_sigma >= 0.0))
        throw std::invalid_argument("noise sigma must be >= 0");
}

}  // namespace

Trace integrate(const NetworkConfig& cfg, std::span<const Waveform> sources,
                const IntegrateOptions& options)
{
    check_inputs(cfg, sources, options);

    const NetworkModel model(cfg);
    const auto n = cfg.size();
    const double dt = options.dt;
    const auto steps = static_cast<std::size_t>(std::llround(options.horizon / dt));
    const std::size_t stride = options.record_stride;

    std::vector<DeviceState> state = options.initial;
    if (state.empty())
        state.assign(n, rest_state(cfg.t0));
    for (std::size_t i = 0; i < n; ++i)
        if (cfg.devices[i].zero_load())
            state[i].v1 = sample(sources[i], 0.0);

    Trace trace;
    trace.dt = dt * static_cast<double>(stride);
    trace.params = cfg.devices;
    trace.devices.resize(n);
    const std::size_t samples = steps / stride + 1;
    for (auto& ch : trace.devices) {
        for (auto* v : {&ch.v_in, &ch.v1, &ch.t, &ch.r, &ch.i_device, &ch.i_load})
            v->reserve(samples);
    }

    auto record = [&](double time) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v_in = sample(sources[i], time);
            const auto& p = cfg.devices[i];
            const Currents c = observable_currents(state[i], v_in, p);
            auto& ch = trace.devices[i];
            ch.v_in.push_back(v_in);
            ch.v1.push_back(state[i].v1);
            ch.t.push_back(state[i].t);
            ch.r.push_back(device_resistance(state[i], p));
            ch.i_device.push_back(c.i_device);
            ch.i_load.push_back(c.i_load);
        }
    };
    record(0.0);

    std::vector<double> v1(n), t(n), r(n), vin(n), sv(n), st(n);
    std::vector<Derivatives> k1(n), k2(n), k3(n), k4(n);

    auto stage = [&](double time, std::span<const double> sv1, std::span<const double> stt,
                     std::span<Derivatives> out) {
        for (std::size_t i = 0; i < n; ++i) {
            vin[i] = sample(sources[i], time);
            r[i] = resistance(stt[i], state[i].branch, cfg.devices[i].hysteresis, cfg.devices[i].k,
                              ResistanceMode::dynamic);
        }
        model.rates(sv1, stt, r, vin, out);
    };

    const bool noisy = options.noise && options.noise->temperature_sigma > 0.0;
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise_scale = noisy ? options.noise->temperature_sigma * std::sqrt(dt) : 0.0;

    for (std::size_t step = 0; step < steps; ++step) {
        const double time = static_cast<double>(step) * dt;
        for (std::size_t i = 0; i < n; ++i) {
            v1[i] = state[i].v1;
            t[i] = state[i].t;
        }

        stage(time, v1, t, k1);
        for (std::size_t i = 0; i < n; ++i) {
            sv[i] = v1[i] + 0.5 * dt * k1[i].dv1;
            st[i] = t[i] + 0.5 * dt * k1[i].dt;
        }
        stage(time + 0.5 * dt, sv, st, k2);
        for (std::size_t i = 0; i < n; ++i) {
            sv[i] = v1[i] + 0.5 * dt * k2[i].dv1;
            st[i] = t[i] + 0.5 * dt * k2[i].dt;
        }
        stage(time + 0.5 * dt, sv, st, k3);
        for (std::size_t i = 0; i < n; ++i) {
            sv[i] = v1[i] + dt * k3[i].dv1;
            st[i] = t[i] + dt * k3[i].dt;
        }
        stage(time + dt, sv, st, k4);

        const double t_next = static_cast<double>(step + 1) * dt;
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = state[i];
            s.v1 = v1[i] + dt / 6.0 * (k1[i].dv1 + 2.0 * k2[i].dv1 + 2.0 * k3[i].dv1 + k4[i].dv1);
            s.t = t[i] + dt / 6.0 * (k1[i].dt + 2.0 * k2[i].dt + 2.0 * k3[i].dt + k4[i].dt);
            if (cfg.devices[i].zero_load())
                s.v1 = sample(sources[i], t_next);
            if (noisy)
                s.t += noise_scale * gauss(rng);
            if (!std::isfinite(s.v1) || !std::isfinite(s.t) || !(s.t > 0.0))
                throw SimulationError("non-finite state in device " + std::to_string(i) +
                                          " at step " + std::to_string(step),
                                      step);
            s.branch = reversal_update(s.branch, s.t, cfg.devices[i].hysteresis,
                                       options.reversal_eps);
        }
        if ((step + 1) % stride == 0)
            record(t_next);
    }

    trace.final_states = state;
    return trace;
}

}  // namespace neuristor
