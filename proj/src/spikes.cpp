#include "neuristor/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neuristor {

std::vector<double> SpikeTrain::times() const
{
    std::vector<double> out;
    out.reserve(events.size());
    for (const auto& e : events)
        out.push_back(e.peak_time);
    return out;
}

SpikeTrain SpikeTrain::window(double t_begin, double t_end) const
{
    SpikeTrain out;
    out.channel = channel;
    for (const auto& e : events)
        if (e.peak_time >= t_begin && e.peak_time < t_end)
            out.events.push_back(e);
    return out;
}

namespace {

// Vertex of the parabola through three equally spaced samples, as an offset
// in samples from the middle one.
double parabolic_offset(double left, double mid, double right)
{
    const double denom = left - 2.0 * mid + right;
    if (denom >= 0.0)
        return 0.0;
    return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

double half_crossing_left(std::span<const double> s, std::size_t peak, double half)
{
    std::size_t j = peak;
    while (j > 0 && s[j - 1] >= half)
        --j;
    if (j == 0)
        return 0.0;
    const double a = s[j - 1], b = s[j];
    return static_cast<double>(j - 1) + (half - a) / (b - a);
}

double half_crossing_right(std::span<const double> s, std::size_t peak, double half)
{
    std::size_t j = peak;
    while (j + 1 < s.size() && s[j + 1] >= half)
        ++j;
    if (j + 1 >= s.size())
        return static_cast<double>(s.size() - 1);
    const double a = s[j], b = s[j + 1];
    return static_cast<double>(j) + (a - half) / (a - b);
}

}  // namespace

SpikeTrain detect_spikes(std::span<const double> series, double dt, double t_start, double hi,
                         double lo)
{
    if (!(hi > lo && lo > 0.0))
        throw std::invalid_argument("detect_spikes requires hi > lo > 0");
    if (!(dt > 0.0))
        throw std::invalid_argument("detect_spikes requires dt > 0");

    SpikeTrain train;
    bool open = false;
    std::size_t peak = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double x = series[i];
        if (!open) {
            if (x > hi) {
                open = true;
                peak = i;
            }
            continue;
        }
        if (x > series[peak])
            peak = i;
        if (x < lo) {
            open = false;
            double offset = 0.0;
            double amplitude = series[peak];
            if (peak > 0 && peak + 1 < series.size()) {
                const double l = series[peak - 1], m = series[peak], r = series[peak + 1];
                offset = parabolic_offset(l, m, r);
                amplitude = m - 0.25 * (l - r) * offset;
            }
            const double half = 0.5 * series[peak];
            const double width =
                (half_crossing_right(series, peak, half) - half_crossing_left(series, peak, half)) * dt;
            train.events.push_back(
                {t_start + (static_cast<double>(peak) + offset) * dt, amplitude, width});
        }
    }
    return train;
}

SpikeTrain detect_device_spikes(const Trace& trace, std::size_t device,
                                const DetectionSettings& settings)
{
    auto train = detect_spikes(trace.devices.at(device).i_device, trace.dt, trace.t_start,
                               settings.hi, settings.lo);
    train.channel = "dev" + std::to_string(device) + "_Idev_A";
    return train;
}

std::string to_string(Mode mode)
{
    switch (mode) {
    case Mode::quiescent: return "quiescent";
    case Mode::spiking: return "spiking";
    case Mode::trapped_metallic: return "trapped_metallic";
    }
    return "unknown";
}

double default_settle(double horizon)
{
    return std::max(2e-6, 0.1 * horizon);
}

double mean_frequency(const SpikeTrain& train, double t_begin, double t_end)
{
    std::vector<double> times;
    for (std::size_t i = 1; i < train.events.size(); ++i) {
        const double t = train.events[i].peak_time;
        if (t >= t_begin && t < t_end)
            times.push_back(t);
    }
    if (times.size() < 2)
        return 0.0;
    return static_cast<double>(times.size() - 1) / (times.back() - times.front());
}

OperatingMode classify_mode(const Trace& trace, std::size_t device, const SpikeTrain& train,
                            double settle, const DetectionSettings& settings)
{
    const double t_end = trace.end_time();
    if (!(settle < t_end))
        throw std::invalid_argument("classify_mode: settle must be shorter than the trace");

    OperatingMode mode;
    const auto& ch = trace.devices.at(device);
    const auto& final_state = trace.final_states.at(device);
    mode.spike_count = train.size();
    mode.final_current = ch.i_device.back();
    mode.final_fraction =
        insulating_fraction(final_state.t, final_state.branch, trace.params.at(device).hysteresis);
    mode.mean_frequency = mean_frequency(train, settle, t_end + trace.dt);

    const double tail_start = t_end - 0.2 * (t_end - trace.t_start);
    std::size_t after_settle = 0;
    std::size_t in_tail = 0;
    for (const auto& e : train.events) {
        after_settle += e.peak_time >= settle;
        in_tail += e.peak_time >= tail_start;
    }

    bool spiking = false;
    if (after_settle >= 2) {
        const auto& ev = train.events;
        const double last = ev.back().peak_time;
        const double last_isi = last - ev[ev.size() - 2].peak_time;
        spiking = (t_end - last) <= std::max(t_end - tail_start, 1.5 * last_isi);
    }

    const bool high_current = mode.final_current > settings.plateau_floor;
    const bool metallic = mode.final_fraction < 0.5;
    // A current that crossed `hi` and never fell back below `lo` is an event
    // the detector leaves open; it still marks the transition.
    const bool open_event = mode.final_current > settings.hi;

    if (spiking) {
        mode.label = Mode::spiking;
    } else if ((!train.empty() || open_event) && high_current && metallic) {
        mode.label = Mode::trapped_metallic;
        mode.low_confidence = in_tail > 0;
    } else {
        mode.label = Mode::quiescent;
        mode.low_confidence = in_tail > 0 || (!train.empty() && (high_current != metallic));
    }
    return mode;
}

double spike_energy(const Trace& trace, std::size_t device, double t_begin, double t_end)
{
    const auto& ch = trace.devices.at(device);
    const std::size_t n = trace.size();
    if (n < 2 || !(t_end >= t_begin))
        return 0.0;
    if (t_begin < trace.t_start - 1e-15 || t_end > trace.end_time() + 1e-15)
        throw std::invalid_argument("spike_energy: window outside trace");

    auto power_at = [&](double time) {
        const double pos = std::clamp((time - trace.t_start) / trace.dt, 0.0, static_cast<double>(n - 1));
        const auto i = std::min(static_cast<std::size_t>(pos), n - 2);
        const double frac = pos - static_cast<double>(i);
        const double p0 = ch.v1[i] * ch.i_device[i];
        const double p1 = ch.v1[i + 1] * ch.i_device[i + 1];
        return p0 + frac * (p1 - p0);
    };

    // Sample indices strictly inside the window.
    const auto first = static_cast<std::size_t>(std::floor((t_begin - trace.t_start) / trace.dt)) + 1;
    const double last_pos = (t_end - trace.t_start) / trace.dt;
    auto last = static_cast<std::size_t>(std::ceil(last_pos));
    last = last == 0 ? 0 : last - 1;

    double energy = 0.0;
    double prev_t = t_begin;
    double prev_p = power_at(t_begin);
    for (std::size_t i = first; i <= last && i < n; ++i) {
        const double ti = trace.time(i);
        if (ti <= t_begin || ti >= t_end)
            continue;
        const double pi = ch.v1[i] * ch.i_device[i];
        energy += 0.5 * (prev_p + pi) * (ti - prev_t);
        prev_t = ti;
        prev_p = pi;
    }
    energy += 0.5 * (prev_p + power_at(t_end)) * (t_end - prev_t);
    return energy;
}

}  // namespace neuristor
