#pragma once

// Sweeps and scenario drivers built on the integrator: rate coding, pairwise
// synchronization, drive-response maps, cascaded transfer and the noisy
// integrate-and-fire statistics.

#include "neuristor/parallel.hpp"
#include "neuristor/spikes.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace neuristor {

struct SimulationSettings {
    double dt = kDefaultDt;
    double horizon = 40e-6;
    double settle = 0.0;  ///< 0 selects default_settle(horizon)
    std::size_t record_stride = 1;
    std::uint64_t seed = 0;
    std::optional<NoiseSpec> noise;
    double reversal_eps = kDefaultReversalEps;
    Execution execution = Execution::parallel;

    double settle_time() const { return settle > 0.0 ? settle : default_settle(horizon); }
};

/// A simulated network together with its per-device spikes and modes.
struct NetworkRun {
    Trace trace;
    std::vector<SpikeTrain> trains;
    std::vector<OperatingMode> modes;
};

NetworkRun run_network(const NetworkConfig& cfg, std::span<const Waveform> sources,
                       std::span<const DetectionSettings> detection,
                       const SimulationSettings& settings);

// --- device calibration ---------------------------------------------------

/// Scales s_th and c_th by `factor`. Thermal time constants are unchanged and
/// every voltage threshold scales by sqrt(factor).
DeviceParams scale_thermal(const DeviceParams& p, double factor);

/// Detection thresholds for a device whose currents scale by `factor`.
DetectionSettings scale_detection(const DetectionSettings& d, double factor);

/// Lowest DC voltage in [v_lo, v_hi] at which the device leaves the quiescent
/// regime (spiking, or switching to metallic for a zero-load device), located
/// by bisection to `tolerance`.
double find_threshold(const DeviceParams& p, const DetectionSettings& detection, double t0,
                      double v_lo, double v_hi, double tolerance,
                      const SimulationSettings& settings);

// --- rate coding ----------------------------------------------------------

struct RatePoint {
    double v_in = 0.0;
    double frequency = 0.0;
    OperatingMode mode;
};

struct RateCodingCurve {
    std::vector<RatePoint> points;     ///< sorted by v_in
    double threshold_low = 0.0;        ///< quiescent -> spiking boundary [V], NaN if absent
    double cutoff_high = 0.0;          ///< spiking -> trapped boundary [V], NaN if absent
    std::size_t spiking_intervals = 0; ///< contiguous runs of Spiking points
};

/// One simulation per grid voltage; both mode boundaries are then refined by
/// bisection to within +-0.05 V. Frequency is the inter-spike-interval rate
/// after the settle time.
RateCodingCurve rate_coding_sweep(const DeviceParams& device, const DetectionSettings& detection,
                                  double t0, double v_lo, double v_hi, double step,
                                  const SimulationSettings& settings);

// --- synchronization ------------------------------------------------------

struct SyncReport {
    int n = 0;                  ///< A part of the A:B ratio
    int m = 0;                  ///< B part of the A:B ratio
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    bool mixed = false;         ///< counts not within 5% of a ratio with n, m <= 5
    bool lock_defined = false;  ///< false when either train is empty in the window
    bool few_spikes = false;    ///< fewer than 20 B spikes in the window
    double lock_fraction = 0.0; ///< B spikes whose lag is within 10% of A's period of the median lag
    double mean_lag = 0.0;      ///< mean delay from the preceding A spike [s]

    std::string ratio_label() const;
};

SyncReport sync_ratio(const SpikeTrain& a, const SpikeTrain& b, double t_begin, double t_end);

struct CouplingPoint {
    double eta = 0.0;
    OperatingMode mode_a;
    OperatingMode mode_b;
    SyncReport sync;
};

/// Two-device network `pair` with its off-diagonal coupling replaced by each
/// eta in turn; A and B driven by DC `v_a` and `v_b`.
std::vector<CouplingPoint> coupling_sweep(const NetworkConfig& pair,
                                          std::span<const DetectionSettings> detection,
                                          double v_a, double v_b, std::span<const double> etas,
                                          const SimulationSettings& settings);

struct DrivePoint {
    double v_a = 0.0;
    OperatingMode mode_a;
    OperatingMode mode_b;
    SyncReport sync;
    std::string label;  ///< B response: quiescent, trapped, spiking, n:m or mixed
};

/// B response label: "quiescent", "trapped", "spiking" (A silent), "n:m" when
/// locked to A, or "mixed".
std::string response_label(const OperatingMode& a, const OperatingMode& b, const SyncReport& s);

std::vector<DrivePoint> drive_response_map(const NetworkConfig& pair,
                                           std::span<const DetectionSettings> detection,
                                           double v_b, double v_a_lo, double v_a_hi, double step,
                                           double eta, const SimulationSettings& settings);

// --- cascaded transfer ----------------------------------------------------

struct CascadeResult {
    NetworkRun run;
    std::size_t input_pulses = 0;
    double pulses_per_a_spike = 0.0;
    /// A spikes in each interval (previous B spike, this B spike], after the first B spike.
    std::vector<int> a_spikes_per_b_spike;
};

/// Counts A spikes between consecutive B spikes whose peaks lie in [t_begin, t_end).
std::vector<int> integration_counts(const SpikeTrain& a, const SpikeTrain& b, double t_begin,
                                    double t_end);

/// Runs `pair` with A driven by a 1 us pulse train of `amplitude` and `duty`
/// and B by the DC level configured for it.
CascadeResult cascade_run(const NetworkConfig& pair, std::span<const DetectionSettings> detection,
                          double duty, double amplitude, double v_b,
                          const SimulationSettings& settings);

/// The built-in cascade pair: A on 22 kOhm, B on 30 kOhm at 5.7 V.
CascadeResult cascade_scenario(double duty, double amplitude, const SimulationSettings& settings);

// --- noisy integrate-and-fire ---------------------------------------------

struct LifHistogram {
    double v_b = 0.0;
    std::map<int, std::size_t> bins;  ///< integrated A spikes -> occurrences
    std::size_t samples = 0;
    double mean = 0.0;
    double variance = 0.0;
};

/// For each B bias, `trials` seeded noisy runs of `pair` (A at DC `v_a`);
/// histograms the A spikes B integrates between consecutive firings.
std::vector<LifHistogram> stochastic_lif_histogram(const NetworkConfig& pair,
                                                   std::span<const DetectionSettings> detection,
                                                   double v_a, std::span<const double> v_bs,
                                                   const NoiseSpec& noise, std::size_t trials,
                                                   std::uint64_t seed,
                                                   const SimulationSettings& settings);

/// Per-point seed derived from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace neuristor
