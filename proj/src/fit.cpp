#include "neuristor/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace neuristor {

using nlohmann::json;

std::string to_string(Branch b) { return b == Branch::heat ? "heat" : "cool"; }

Branch branch_from_string(const std::string& s)
{
    if (s == "heat")
        return Branch::heat;
    if (s == "cool")
        return Branch::cool;
    throw std::invalid_argument("unknown branch '" + s + "' (expected heat or cool)");
}

namespace {

int delta_of(Branch b) { return b == Branch::heat ? +1 : -1; }

// Calls visit(series_index, point_index, t, branch_state) along the protocol.
template <class Visit>
void replay(const HysteresisParams& p, const std::vector<RtSeries>& data, Visit&& visit)
{
    BranchState state;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto& series = data[s];
        if (series.points.empty())
            continue;
        if (s == 0 || series.branch == data[s - 1].branch || data[s - 1].points.empty())
            state = major_loop_state(series.points.front().t, delta_of(series.branch));
        else
            state = reverse_branch(state, data[s - 1].points.back().t, p);
        for (std::size_t i = 0; i < series.points.size(); ++i)
            visit(s, i, series.points[i].t, state);
    }
}

std::vector<std::pair<double, double>> log_bounds(
    const std::vector<std::string>& names, const std::vector<double>& nominal,
    const std::map<std::string, std::pair<double, double>>& overrides)
{
    for (const auto& [key, b] : overrides)
        if (std::find(names.begin(), names.end(), key) == names.end())
            throw std::invalid_argument("fit bounds: unknown parameter '" + key + "'");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::pair<double, double> b{0.1 * nominal[i], 10.0 * nominal[i]};
        if (auto it = overrides.find(names[i]); it != overrides.end())
            b = it->second;
        if (!(b.first > 0.0 && b.first < b.second))
            throw std::invalid_argument("fit bounds for '" + names[i] +
                                        "': need 0 < low < high");
        out.emplace_back(std::log10(b.first), std::log10(b.second));
    }
    return out;
}

DESettings de_settings(const FitOptions& o, std::vector<std::pair<double, double>> bounds)
{
    DESettings s;
    s.population = o.population;
    s.f = o.f;
    s.cr = o.cr;
    s.max_generations = o.max_generations;
    s.tolerance = o.tolerance;
    s.seed = o.seed;
    s.bounds = std::move(bounds);
    s.execution = o.execution;
    return s;
}

HysteresisParams hysteresis_from(const std::vector<double>& x, ReversalForm form)
{
    HysteresisParams p;
    p.r0 = std::pow(10.0, x[0]);
    p.rm = std::pow(10.0, x[1]);
    p.ea = std::pow(10.0, x[2]);
    p.beta = std::pow(10.0, x[3]);
    p.w = std::pow(10.0, x[4]);
    p.tc = std::pow(10.0, x[5]);
    p.gamma = std::pow(10.0, x[6]);
    p.reversal_form = form;
    return p;
}

DeviceParams device_from(const std::vector<double>& x, const HysteresisParams& h, double r_load)
{
    DeviceParams d = paper_fit_device(r_load);
    d.c = std::pow(10.0, x[0]);
    d.k = std::pow(10.0, x[1]);
    d.s_th = std::pow(10.0, x[2]);
    d.c_th = std::pow(10.0, x[3]);
    d.hysteresis = h;
    return d;
}

}  // namespace

std::vector<RtSeries> simulate_rt(const HysteresisParams& p, const std::vector<RtSweep>& protocol)
{
    std::vector<RtSeries> data;
    for (const auto& sweep : protocol) {
        if (!(sweep.step > 0.0))
            throw std::invalid_argument("simulate_rt: step must be > 0");
        RtSeries s;
        s.branch = sweep.branch;
        s.name = "s" + std::to_string(data.size());
        const double dir = sweep.t_end >= sweep.t_begin ? 1.0 : -1.0;
        const auto n = static_cast<std::size_t>(
            std::floor(std::abs(sweep.t_end - sweep.t_begin) / sweep.step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
            s.points.push_back({sweep.t_begin + dir * sweep.step * static_cast<double>(i), 0.0});
        data.push_back(std::move(s));
    }
    replay(p, data, [&](std::size_t s, std::size_t i, double t, const BranchState& b) {
        data[s].points[i].r = resistance(t, b, p, 1.0, ResistanceMode::quasistatic);
    });
    return data;
}

std::vector<RtSweep> standard_rt_protocol(double step)
{
    return {{Branch::heat, 320.0, 360.0, step}, {Branch::cool, 360.0, 320.0, step},
            {Branch::heat, 320.0, 330.0, step}, {Branch::cool, 330.0, 320.0, step},
            {Branch::heat, 320.0, 335.0, step}, {Branch::cool, 335.0, 320.0, step}};
}

void check_rt_data(const std::vector<RtSeries>& data)
{
    std::size_t total = 0;
    for (const auto& s : data) {
        for (const auto& pt : s.points) {
            if (!(pt.t > 0.0) || !std::isfinite(pt.t))
                throw std::invalid_argument("R-T data: non-positive temperature in series '" +
                                            s.name + "'");
            if (!(pt.r > 0.0) || !std::isfinite(pt.r))
                throw std::invalid_argument("R-T data: non-positive resistance in series '" +
                                            s.name + "'");
        }
        total += s.points.size();
    }
    if (total == 0)
        throw std::invalid_argument("R-T data: no points");
}

double hysteresis_objective(const HysteresisParams& p, const std::vector<RtSeries>& data)
{
    double sum = 0.0;
    std::size_t n = 0;
    replay(p, data, [&](std::size_t s, std::size_t i, double t, const BranchState& b) {
        const double model = resistance(t, b, p, 1.0, ResistanceMode::quasistatic);
        const double e = std::log10(model) - std::log10(data[s].points[i].r);
        sum += e * e;
        ++n;
    });
    return n ? sum / static_cast<double>(n) : 0.0;
}

const std::vector<std::string>& hysteresis_parameter_names()
{
    static const std::vector<std::string> names{"r0", "rm", "ea", "beta", "w", "tc", "gamma"};
    return names;
}

HysteresisFit fit_hysteresis(const std::vector<RtSeries>& data, const FitOptions& options,
                             ReversalForm form)
{
    check_rt_data(data);
    const auto ref = paper_fit_2023();
    const std::vector<double> nominal{ref.r0, ref.rm, ref.ea, ref.beta, ref.w, ref.tc, ref.gamma};
    auto settings =
        de_settings(options, log_bounds(hysteresis_parameter_names(), nominal, options.bounds));

    const auto objective = [&](const std::vector<double>& x) {
        const auto p = hysteresis_from(x, form);
        if (!validate(p).empty())
            return std::numeric_limits<double>::infinity();
        return hysteresis_objective(p, data);
    };

    HysteresisFit out;
    out.de = differential_evolution(objective, settings);
    out.params = hysteresis_from(out.de.best, form);
    out.residual = out.de.best_value;
    out.seed = options.seed;
    bool heat = false, cool = false;
    for (const auto& s : data) {
        if (s.points.empty())
            continue;
        (s.branch == Branch::heat ? heat : cool) = true;
    }
    out.width_low_confidence = !(heat && cool);
    return out;
}

// --- spike features -----------------------------------------------------------

std::array<double, 8> SpikeFeatures::as_array() const
{
    return {amplitudes[0], amplitudes[1], amplitudes[2], times[0],
            times[1],      times[2],      mean_width,    frequency};
}

SpikeFeatures extract_spike_features(const SpikeTrain& train)
{
    if (train.size() < 3)
        throw InsufficientData("spike features need at least 3 spikes, found " +
                               std::to_string(train.size()));
    SpikeFeatures f;
    for (std::size_t i = 0; i < 3; ++i) {
        f.amplitudes[i] = train.events[i].amplitude;
        f.times[i] = train.events[i].peak_time;
    }
    double width = 0.0;
    for (const auto& e : train.events)
        width += e.width;
    f.mean_width = width / static_cast<double>(train.size());
    f.frequency = mean_frequency(train, -std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::infinity());
    return f;
}

SpikeFeatures extract_spike_features(const Trace& trace, std::size_t device,
                                     const DetectionSettings& detection)
{
    return extract_spike_features(detect_device_spikes(trace, device, detection));
}

double feature_error(const SpikeFeatures& simulated, const SpikeFeatures& target)
{
    const auto s = simulated.as_array();
    const auto t = target.as_array();
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double e;
        if (t[i] != 0.0)
            e = (s[i] - t[i]) / std::abs(t[i]);
        else
            e = s[i] == 0.0 ? 0.0 : 1.0;
        sum += e * e;
    }
    return sum / static_cast<double>(s.size());
}

SpikeFeatures simulate_features(const DeviceParams& device, const DeviceDrive& drive)
{
    NetworkConfig cfg;
    cfg.devices = {device};
    cfg.devices[0].r_load = drive.r_load;
    cfg.eta = uncoupled(1);
    cfg.t0 = drive.t0;
    const std::vector<Waveform> src{Dc{drive.v_in}};
    IntegrateOptions o;
    o.dt = drive.dt;
    o.horizon = drive.horizon;
    const auto trace = integrate(cfg, src, o);
    return extract_spike_features(trace, 0);
}

const std::vector<std::string>& device_parameter_names()
{
    static const std::vector<std::string> names{"c", "k", "s_th", "c_th"};
    return names;
}

DeviceFit fit_device(const SpikeFeatures& target, const HysteresisParams& hysteresis,
                     const DeviceDrive& drive, const FitOptions& options)
{
    const auto ref = paper_fit_device(drive.r_load);
    const std::vector<double> nominal{ref.c, ref.k, ref.s_th, ref.c_th};
    auto overrides = options.bounds;
    // k >= 1 is a model invariant, so the default k range starts at 1.
    overrides.try_emplace("k", 1.0, 10.0 * ref.k);
    auto settings = de_settings(options, log_bounds(device_parameter_names(), nominal, overrides));

    const auto objective = [&](const std::vector<double>& x) {
        try {
            const auto sim = simulate_features(device_from(x, hysteresis, drive.r_load), drive);
            const double e = feature_error(sim, target);
            return std::isfinite(e) ? std::min(e, kFeaturePenalty) : kFeaturePenalty;
        } catch (const std::exception&) {
            return kFeaturePenalty;
        }
    };

    DeviceFit out;
    out.de = differential_evolution(objective, settings);
    out.params = device_from(out.de.best, hysteresis, drive.r_load);
    out.residual = out.de.best_value;
    out.seed = options.seed;
    return out;
}

// --- I/O ---------------------------------------------------------------------

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_number(const std::string& cell, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != cell.size())
        throw std::invalid_argument("R-T CSV line " + std::to_string(line) + ": bad number '" +
                                    cell + "'");
    return v;
}

}  // namespace

std::vector<RtSeries> read_rt_csv(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty())
            header = split_csv(line);
    }
    auto column = [&](const std::string& name) -> long {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<long>(it - header.begin());
    };
    const long ct = column("T_K"), cr = column("R_ohm"), cb = column("branch"),
               cs = column("series");
    if (ct < 0 || cr < 0 || cb < 0)
        throw std::invalid_argument("R-T CSV: header must contain T_K, R_ohm and branch");

    std::vector<RtSeries> data;
    std::map<std::string, std::size_t> by_name;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw std::invalid_argument("R-T CSV line " + std::to_string(lineno) +
                                        ": expected " + std::to_string(header.size()) +
                                        " fields");
        const RtPoint pt{parse_number(cells[static_cast<std::size_t>(ct)], lineno),
                         parse_number(cells[static_cast<std::size_t>(cr)], lineno)};
        Branch branch;
        try {
            branch = branch_from_string(cells[static_cast<std::size_t>(cb)]);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("R-T CSV line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
        if (cs >= 0) {
            const auto& name = cells[static_cast<std::size_t>(cs)];
            auto it = by_name.find(name);
            if (it == by_name.end()) {
                it = by_name.emplace(name, data.size()).first;
                data.push_back({branch, name, {}});
            }
            auto& series = data[it->second];
            if (series.branch != branch)
                throw std::invalid_argument("R-T CSV line " + std::to_string(lineno) +
                                            ": series '" + name + "' mixes branches");
            series.points.push_back(pt);
        } else {
            if (data.empty() || data.back().branch != branch)
                data.push_back({branch, "s" + std::to_string(data.size()), {}});
            data.back().points.push_back(pt);
        }
    }
    check_rt_data(data);
    return data;
}

std::vector<RtSeries> read_rt_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return read_rt_csv(in);
}

void write_rt_csv(std::ostream& out, const std::vector<RtSeries>& data)
{
    out << "T_K,R_ohm,branch,series\n" << std::setprecision(17);
    for (const auto& s : data)
        for (const auto& pt : s.points)
            out << pt.t << ',' << pt.r << ',' << to_string(s.branch) << ',' << s.name << '\n';
}

namespace {

json de_json(const DEResult& de, std::uint64_t seed)
{
    return {{"generations", de.generations},
            {"evaluations", de.evaluations},
            {"converged", de.converged},
            {"seed", seed}};
}

}  // namespace

json to_json(const HysteresisFit& fit)
{
    const auto& p = fit.params;
    json j = {{"kind", "hysteresis"},
              {"parameters",
               {{"r0_ohm", p.r0},
                {"rm_ohm", p.rm},
                {"ea_K", p.ea},
                {"beta_per_K", p.beta},
                {"w_K", p.w},
                {"tc_K", p.tc},
                {"gamma", p.gamma},
                {"reversal_form", to_string(p.reversal_form)}}},
              {"residual", fit.residual},
              {"width_low_confidence", fit.width_low_confidence}};
    j.update(de_json(fit.de, fit.seed));
    return j;
}

json to_json(const DeviceFit& fit)
{
    const auto& p = fit.params;
    json j = {{"kind", "device"},
              {"parameters",
               {{"c_F", p.c}, {"k", p.k}, {"s_th_W_per_K", p.s_th}, {"c_th_J_per_K", p.c_th}}},
              {"residual", fit.residual}};
    j.update(de_json(fit.de, fit.seed));
    return j;
}

json to_json(const SpikeFeatures& f)
{
    return {{"amplitudes_A", f.amplitudes},
            {"peak_times_s", f.times},
            {"mean_width_s", f.mean_width},
            {"frequency_Hz", f.frequency}};
}

SpikeFeatures features_from_json(const json& j)
{
    SpikeFeatures f;
    try {
        f.amplitudes = j.at("amplitudes_A").get<std::array<double, 3>>();
        f.times = j.at("peak_times_s").get<std::array<double, 3>>();
        f.mean_width = j.at("mean_width_s").get<double>();
        f.frequency = j.at("frequency_Hz").get<double>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("spike features: ") + e.what());
    }
    return f;
}

}  // namespace neuristor
