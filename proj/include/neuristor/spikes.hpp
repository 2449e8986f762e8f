#pragma once

// Spike extraction and operating-mode labels for recorded traces.

#include "neuristor/solver.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace neuristor {

struct SpikeEvent {
    double peak_time = 0.0;  // s
    double amplitude = 0.0;  // A
    double width = 0.0;      // FWHM [s]
    bool operator==(const SpikeEvent&) const = default;
};

struct SpikeTrain {
    std::vector<SpikeEvent> events;
    std::string channel;

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }
    std::vector<double> times() const;
    /// Events with peak_time in [t_begin, t_end).
    SpikeTrain window(double t_begin, double t_end) const;
    bool operator==(const SpikeTrain&) const = default;
};

/// Schmitt-trigger detector: an event opens when the series rises above `hi`
/// and closes when it falls below `lo`. Events still open at the end of the
/// series are dropped. Requires hi > lo > 0.
SpikeTrain detect_spikes(std::span<const double> series, double dt, double t_start, double hi,
                         double lo);

/// Per-device detection thresholds. The defaults suit the fitted device
/// at roughly 10-16 V on a 12 kOhm load (spikes of 4-6 mA).
struct DetectionSettings {
    double hi = 2.0e-3;             ///< event open threshold [A]
    double lo = 1.0e-3;             ///< event close threshold [A]
    double plateau_floor = 0.2e-3;  ///< minimum trapped-state current [A]

    bool operator==(const DetectionSettings&) const = default;
};

SpikeTrain detect_device_spikes(const Trace& trace, std::size_t device,
                                const DetectionSettings& settings = {});

enum class Mode { quiescent, spiking, trapped_metallic };

std::string to_string(Mode mode);

struct OperatingMode {
    Mode label = Mode::quiescent;
    bool low_confidence = false;
    std::size_t spike_count = 0;   ///< all detected events
    double mean_frequency = 0.0;   ///< over events after settle, first event excluded [Hz]
    double final_current = 0.0;    ///< i_device at the end of the trace [A]
    double final_fraction = 1.0;   ///< insulating fraction at the end of the trace
};

/// Default settle time: max(2 us, 10% of the horizon).
double default_settle(double horizon);

/// Labels the device's regime:
///  - Spiking: at least two events after `settle`, and the gap from the last
///    event to the end of the trace is within max(20% of the trace, 1.5 x the
///    last inter-spike interval).
///  - TrappedMetallic: at least one event (an event still open at the end
///    counts), not spiking, final current above the plateau floor and the
///    film mostly metallic (F < 0.5).
///  - Quiescent: otherwise.
/// Borderline cases (a lone event in the final 20%, or the current and F
/// disagreeing about the final phase) set `low_confidence`.
OperatingMode classify_mode(const Trace& trace, std::size_t device, const SpikeTrain& train,
                            double settle, const DetectionSettings& settings = {});

/// Mean spike frequency from inter-spike intervals of events in
/// [t_begin, t_end), skipping the first event of the whole train. Zero when
/// fewer than two qualifying events exist.
double mean_frequency(const SpikeTrain& train, double t_begin, double t_end);

/// Trapezoidal integral of v1 * i_device over [t_begin, t_end] [J].
double spike_energy(const Trace& trace, std::size_t device, double t_begin, double t_end);

}  // namespace neuristor
