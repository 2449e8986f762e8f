#include "neuristor/analysis.hpp"

#include "neuristor/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace neuristor {

NetworkRun run_network(const NetworkConfig& cfg, std::span<const Waveform> sources,
                       std::span<const DetectionSettings> detection,
                       const SimulationSettings& settings)
{
    if (detection.size() != cfg.size())
        throw std::invalid_argument("run_network: one detection setting per device required");
    IntegrateOptions options;
    options.dt = settings.dt;
    options.horizon = settings.horizon;
    options.noise = settings.noise;
    options.seed = settings.seed;
    options.record_stride = settings.record_stride;
    options.reversal_eps = settings.reversal_eps;

    NetworkRun run;
    run.trace = integrate(cfg, sources, options);
    const double settle = settings.settle_time();
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        run.trains.push_back(detect_device_spikes(run.trace, i, detection[i]));
        run.modes.push_back(classify_mode(run.trace, i, run.trains.back(), settle, detection[i]));
    }
    return run;
}

DeviceParams scale_thermal(const DeviceParams& p, double factor)
{
    DeviceParams out = p;
    out.s_th *= factor;
    out.c_th *= factor;
    return out;
}

DetectionSettings scale_detection(const DetectionSettings& d, double factor)
{
    return {d.hi * factor, d.lo * factor, d.plateau_floor * factor};
}

namespace {

bool leaves_rest(const DeviceParams& p, const DetectionSettings& detection, double t0, double v,
                 const SimulationSettings& settings)
{
    const NetworkConfig cfg{{p}, uncoupled(1), t0};
    const std::vector<Waveform> src{Dc{v}};
    const auto run = run_network(cfg, src, std::span(&detection, 1), settings);
    if (p.zero_load())
        return run.modes[0].final_fraction < 0.5;
    return run.modes[0].label != Mode::quiescent;
}

OperatingMode single_mode(const DeviceParams& p, const DetectionSettings& detection, double t0,
                          double v, const SimulationSettings& settings)
{
    const NetworkConfig cfg{{p}, uncoupled(1), t0};
    const std::vector<Waveform> src{Dc{v}};
    return run_network(cfg, src, std::span(&detection, 1), settings).modes[0];
}

}  // namespace

double find_threshold(const DeviceParams& p, const DetectionSettings& detection, double t0,
                      double v_lo, double v_hi, double tolerance,
                      const SimulationSettings& settings)
{
    if (leaves_rest(p, detection, t0, v_lo, settings))
        throw std::invalid_argument("find_threshold: device already active at the lower bound");
    if (!leaves_rest(p, detection, t0, v_hi, settings))
        throw std::invalid_argument("find_threshold: device still quiescent at the upper bound");
    while (v_hi - v_lo > tolerance) {
        const double mid = 0.5 * (v_lo + v_hi);
        (leaves_rest(p, detection, t0, mid, settings) ? v_hi : v_lo) = mid;
    }
    return 0.5 * (v_lo + v_hi);
}

RateCodingCurve rate_coding_sweep(const DeviceParams& device, const DetectionSettings& detection,
                                  double t0, double v_lo, double v_hi, double step,
                                  const SimulationSettings& settings)
{
    if (!(step > 0.0) || !(v_hi >= v_lo))
        throw std::invalid_argument("rate_coding_sweep: invalid voltage range");
    const auto count = static_cast<std::size_t>(std::floor((v_hi - v_lo) / step + 1e-9)) + 1;

    RateCodingCurve curve;
    curve.points = parallel_map(
        count,
        [&](std::size_t i) {
            const double v = v_lo + static_cast<double>(i) * step;
            RatePoint pt;
            pt.v_in = v;
            pt.mode = single_mode(device, detection, t0, v, settings);
            pt.frequency = pt.mode.label == Mode::spiking ? pt.mode.mean_frequency : 0.0;
            return pt;
        },
        settings.execution);

    const auto& pts = curve.points;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].mode.label == Mode::spiking && (i == 0 || pts[i - 1].mode.label != Mode::spiking))
            ++curve.spiking_intervals;

    auto refine = [&](std::size_t i, Mode upper) {
        double lo = pts[i].v_in, hi = pts[i + 1].v_in;
        while (hi - lo > 0.05) {
            const double mid = 0.5 * (lo + hi);
            (single_mode(device, detection, t0, mid, settings).label == upper ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    curve.threshold_low = nan;
    curve.cutoff_high = nan;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (std::isnan(curve.threshold_low) && pts[i].mode.label == Mode::quiescent &&
            pts[i + 1].mode.label == Mode::spiking)
            curve.threshold_low = refine(i, Mode::spiking);
        if (pts[i].mode.label == Mode::spiking && pts[i + 1].mode.label == Mode::trapped_metallic)
            curve.cutoff_high = refine(i, Mode::trapped_metallic);
    }
    return curve;
}

std::string SyncReport::ratio_label() const
{
    if (mixed)
        return "mixed";
    return std::to_string(n) + ":" + std::to_string(m);
}

SyncReport sync_ratio(const SpikeTrain& a, const SpikeTrain& b, double t_begin, double t_end)
{
    const auto ta = a.window(t_begin, t_end).times();
    const auto tb = b.window(t_begin, t_end).times();

    SyncReport report;
    report.count_a = ta.size();
    report.count_b = tb.size();
    report.few_spikes = tb.size() < 20;
    if (ta.empty() || tb.empty()) {
        report.n = ta.empty() ? 0 : 1;
        report.m = tb.empty() ? 0 : 1;
        return report;
    }

    const double ratio = static_cast<double>(ta.size()) / static_cast<double>(tb.size());
    double best_err = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) {
            if (std::gcd(n, m) != 1)
                continue;
            const double exact = static_cast<double>(n) / m;
            const double err = std::abs(ratio - exact) / exact;
            if (err < best_err) {
                best_err = err;
                report.n = n;
                report.m = m;
            }
        }
    }
    if (best_err > 0.05) {
        report.mixed = true;
        const auto g = std::gcd(ta.size(), tb.size());
        report.n = static_cast<int>(ta.size() / g);
        report.m = static_cast<int>(tb.size() / g);
    }

    std::vector<double> lags;
    for (double t : tb) {
        auto it = std::upper_bound(ta.begin(), ta.end(), t);
        if (it == ta.begin())
            continue;
        lags.push_back(t - *std::prev(it));
    }
    if (lags.empty())
        return report;

    report.lock_defined = true;
    report.mean_lag = std::accumulate(lags.begin(), lags.end(), 0.0) / static_cast<double>(lags.size());

    double period = 0.0;
    if (ta.size() >= 2)
        period = (ta.back() - ta.front()) / static_cast<double>(ta.size() - 1);
    else if (tb.size() >= 2)
        period = (tb.back() - tb.front()) / static_cast<double>(tb.size() - 1);

    auto sorted = lags;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::size_t locked = 0;
    for (double lag : lags) {
        double dev = std::abs(lag - median);
        if (period > 0.0) {
            dev = std::fmod(dev, period);
            dev = std::min(dev, period - dev);
        }
        locked += period > 0.0 ? dev <= 0.1 * period : dev == 0.0;
    }
    report.lock_fraction = static_cast<double>(locked) / static_cast<double>(lags.size());
    return report;
}

namespace {

NetworkConfig with_eta(const NetworkConfig& pair, double eta)
{
    if (pair.size() != 2)
        throw std::invalid_argument("expected a two-device network");
    NetworkConfig cfg = pair;
    cfg.eta = pair_coupling(eta);
    return cfg;
}

}  // namespace

std::vector<CouplingPoint> coupling_sweep(const NetworkConfig& pair,
                                          std::span<const DetectionSettings> detection,
                                          double v_a, double v_b, std::span<const double> etas,
                                          const SimulationSettings& settings)
{
    const std::vector<Waveform> src{Dc{v_a}, Dc{v_b}};
    return parallel_map(
        etas.size(),
        [&](std::size_t i) {
            const auto run = run_network(with_eta(pair, etas[i]), src, detection, settings);
            CouplingPoint pt;
            pt.eta = etas[i];
            pt.mode_a = run.modes[0];
            pt.mode_b = run.modes[1];
            pt.sync = sync_ratio(run.trains[0], run.trains[1], settings.settle_time(),
                                 settings.horizon + settings.dt);
            return pt;
        },
        settings.execution);
}

std::string response_label(const OperatingMode& a, const OperatingMode& b, const SyncReport& s)
{
    switch (b.label) {
    case Mode::quiescent: return "quiescent";
    case Mode::trapped_metallic: return "trapped";
    case Mode::spiking: break;
    }
    if (a.label != Mode::spiking)
        return "spiking";
    return s.ratio_label();
}

std::vector<DrivePoint> drive_response_map(const NetworkConfig& pair,
                                           std::span<const DetectionSettings> detection,
                                           double v_b, double v_a_lo, double v_a_hi, double step,
                                           double eta, const SimulationSettings& settings)
{
    if (!(step > 0.0) || !(v_a_hi >= v_a_lo))
        throw std::invalid_argument("drive_response_map: invalid voltage range");
    const auto count = static_cast<std::size_t>(std::floor((v_a_hi - v_a_lo) / step + 1e-9)) + 1;
    const auto cfg = with_eta(pair, eta);
    return parallel_map(
        count,
        [&](std::size_t i) {
            const double v_a = v_a_lo + static_cast<double>(i) * step;
            const std::vector<Waveform> src{Dc{v_a}, Dc{v_b}};
            const auto run = run_network(cfg, src, detection, settings);
            DrivePoint pt;
            pt.v_a = v_a;
            pt.mode_a = run.modes[0];
            pt.mode_b = run.modes[1];
            pt.sync = sync_ratio(run.trains[0], run.trains[1], settings.settle_time(),
                                 settings.horizon + settings.dt);
            pt.label = response_label(pt.mode_a, pt.mode_b, pt.sync);
            return pt;
        },
        settings.execution);
}

std::vector<int> integration_counts(const SpikeTrain& a, const SpikeTrain& b, double t_begin,
                                    double t_end)
{
    const auto ta = a.times();
    const auto tb = b.window(t_begin, t_end).times();
    std::vector<int> counts;
    for (std::size_t k = 1; k < tb.size(); ++k) {
        const auto lo = std::upper_bound(ta.begin(), ta.end(), tb[k - 1]);
        const auto hi = std::upper_bound(ta.begin(), ta.end(), tb[k]);
        counts.push_back(static_cast<int>(hi - lo));
    }
    return counts;
}

CascadeResult cascade_run(const NetworkConfig& pair, std::span<const DetectionSettings> detection,
                          double duty, double amplitude, double v_b,
                          const SimulationSettings& settings)
{
    if (!(duty > 0.0 && duty < 1.0))
        throw std::invalid_argument("cascade: duty must lie in (0, 1)");
    constexpr double period = 1e-6;
    const std::vector<Waveform> src{PulseTrain{amplitude, 0.0, period, duty, 0.0, std::nullopt},
                                    Dc{v_b}};
    CascadeResult out;
    out.run = run_network(pair, src, detection, settings);
    out.input_pulses = static_cast<std::size_t>(std::ceil(settings.horizon / period - 1e-9));
    const auto a_spikes = out.run.trains[0].size();
    out.pulses_per_a_spike =
        a_spikes == 0 ? 0.0 : static_cast<double>(out.input_pulses) / static_cast<double>(a_spikes);
    out.a_spikes_per_b_spike = integration_counts(out.run.trains[0], out.run.trains[1],
                                                  settings.settle_time(),
                                                  settings.horizon + settings.dt);
    return out;
}

CascadeResult cascade_scenario(double duty, double amplitude, const SimulationSettings& settings)
{
    const auto scenario = scenarios::cascade_pair();
    return cascade_run(scenario.network, scenario.detection, duty, amplitude,
                       scenarios::kCascadeBiasB, settings);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<LifHistogram> stochastic_lif_histogram(const NetworkConfig& pair,
                                                   std::span<const DetectionSettings> detection,
                                                   double v_a, std::span<const double> v_bs,
                                                   const NoiseSpec& noise, std::size_t trials,
                                                   std::uint64_t seed,
                                                   const SimulationSettings& settings)
{
    if (trials == 0)
        throw std::invalid_argument("stochastic_lif_histogram: trials must be >= 1");
    if (!(noise.temperature_sigma >= 0.0))
        throw std::invalid_argument("stochastic_lif_histogram: noise must be >= 0");

    const std::size_t jobs = v_bs.size() * trials;
    const auto counts = parallel_map(
        jobs,
        [&](std::size_t job) {
            const std::size_t level = job / trials;
            SimulationSettings s = settings;
            s.noise = noise;
            s.seed = derive_seed(seed, job);
            const std::vector<Waveform> src{Dc{v_a}, Dc{v_bs[level]}};
            const auto run = run_network(pair, src, detection, s);
            return integration_counts(run.trains[0], run.trains[1], s.settle_time(),
                                      s.horizon + s.dt);
        },
        settings.execution);

    std::vector<LifHistogram> out(v_bs.size());
    for (std::size_t level = 0; level < v_bs.size(); ++level) {
        auto& h = out[level];
        h.v_b = v_bs[level];
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            for (int c : counts[level * trials + t]) {
                ++h.bins[c];
                ++h.samples;
                sum += c;
                sum_sq += static_cast<double>(c) * c;
            }
        }
        if (h.samples > 0) {
            h.mean = sum / static_cast<double>(h.samples);
            h.variance = std::max(0.0, sum_sq / static_cast<double>(h.samples) - h.mean * h.mean);
        }
    }
    return out;
}

}  // namespace neuristor
