#pragma once

// Parameter estimation: hysteresis constants from R(T) sweeps and device
// constants from spike features, both by differential evolution.

#include "neuristor/de.hpp"
#include "neuristor/spikes.hpp"

#include <json.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace neuristor {

enum class Branch { heat, cool };

std::string to_string(Branch b);
Branch branch_from_string(const std::string& s);  // "heat" | "cool"

struct RtPoint {
    double t = 0.0;  // K
    double r = 0.0;  // Ohm
};

/// One monotone temperature sweep. Series are replayed in order: a change of
/// branch reverses the state at the previous series' last temperature, a
/// repeated branch restarts on the major loop.
struct RtSeries {
    Branch branch = Branch::heat;
    std::string name;
    std::vector<RtPoint> points;
};

/// Sweep description for synthetic data.
struct RtSweep {
    Branch branch = Branch::heat;
    double t_begin = 0.0;
    double t_end = 0.0;
    double step = 0.5;
};

/// Quasistatic R(T) along the protocol, replayed through the branch state machine.
std::vector<RtSeries> simulate_rt(const HysteresisParams& p, const std::vector<RtSweep>& protocol);

/// Heating 320 -> 360 K, cooling back, then minor loops reversing at 330 K and 335 K.
std::vector<RtSweep> standard_rt_protocol(double step = 0.5);

/// Mean squared log10(R) error of `p` against the data.
double hysteresis_objective(const HysteresisParams& p, const std::vector<RtSeries>& data);

/// Throws std::invalid_argument for empty data or non-positive T or R.
void check_rt_data(const std::vector<RtSeries>& data);

struct FitOptions {
    std::size_t population = 0;  ///< 0 selects 15 x dimension
    double f = 0.5;
    double cr = 0.9;
    std::size_t max_generations = 300;
    double tolerance = 1e-12;
    std::uint64_t seed = 1;
    /// Optional (low, high) per parameter name. Defaults span 0.1x..10x of the
    /// built-in fitted value (k from 1) and are searched in log space.
    std::map<std::string, std::pair<double, double>> bounds;
    Execution execution = Execution::parallel;
};

struct HysteresisFit {
    HysteresisParams params;
    double residual = 0.0;
    bool width_low_confidence = false;  ///< data covers only one branch direction
    DEResult de;
    std::uint64_t seed = 0;
};

/// Parameter names, in search order: r0, rm, ea, beta, w, tc, gamma.
const std::vector<std::string>& hysteresis_parameter_names();

HysteresisFit fit_hysteresis(const std::vector<RtSeries>& data, const FitOptions& options,
                             ReversalForm form = ReversalForm::inverse_tanh);

// --- spike features --------------------------------------------------------

struct SpikeFeatures {
    std::array<double, 3> amplitudes{};  // A
    std::array<double, 3> times{};       // s
    double mean_width = 0.0;             // s
    double frequency = 0.0;              // Hz, inter-spike-interval rate excluding the first spike

    std::array<double, 8> as_array() const;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Features of the first three events; width averages every event. Throws
/// InsufficientData with fewer than three events.
SpikeFeatures extract_spike_features(const SpikeTrain& train);
SpikeFeatures extract_spike_features(const Trace& trace, std::size_t device = 0,
                                     const DetectionSettings& detection = {});

struct DeviceDrive {
    double v_in = 12.5;
    double r_load = 12e3;
    double t0 = 325.0;
    double horizon = 20e-6;
    double dt = kDefaultDt;
};

/// Uniformly weighted mean of squared feature errors, each normalized by its
/// target value.
double feature_error(const SpikeFeatures& simulated, const SpikeFeatures& target);

/// Simulates a single device and returns its features (throws InsufficientData).
SpikeFeatures simulate_features(const DeviceParams& device, const DeviceDrive& drive);

struct DeviceFit {
    DeviceParams params;
    double residual = 0.0;
    DEResult de;
    std::uint64_t seed = 0;
};

inline constexpr double kFeaturePenalty = 1e6;

/// Parameter names, in search order: c, k, s_th, c_th.
const std::vector<std::string>& device_parameter_names();

/// Fits (C, k, S_th, C_th) with the hysteresis constants held fixed. Failed or
/// spike-less simulations score kFeaturePenalty.
DeviceFit fit_device(const SpikeFeatures& target, const HysteresisParams& hysteresis,
                     const DeviceDrive& drive, const FitOptions& options);

// --- I/O ---------------------------------------------------------------------

/// CSV with header `T_K,R_ohm,branch[,series]`. Without a series column a new
/// series starts whenever the branch changes.
std::vector<RtSeries> read_rt_csv(std::istream& in);
std::vector<RtSeries> read_rt_csv_file(const std::string& path);
void write_rt_csv(std::ostream& out, const std::vector<RtSeries>& data);

nlohmann::json to_json(const HysteresisFit& fit);
nlohmann::json to_json(const DeviceFit& fit);
nlohmann::json to_json(const SpikeFeatures& f);
SpikeFeatures features_from_json(const nlohmann::json& j);

}  // namespace neuristor
