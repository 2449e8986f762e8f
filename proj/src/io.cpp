#include "neuristor/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace neuristor {

using nlohmann::json;

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_trace_csv(std::ostream& out, const Trace& trace)
{
    out << "time_s";
    for (std::size_t d = 0; d < trace.devices.size(); ++d) {
        const auto p = "dev" + std::to_string(d) + "_";
        out << ',' << p << "vin_V," << p << "v1_V," << p << "T_K," << p << "R_ohm," << p
            << "Idev_A," << p << "Iload_A";
    }
    out << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << format_number(trace.time(i));
        for (const auto& c : trace.devices)
            out << ',' << format_number(c.v_in[i]) << ',' << format_number(c.v1[i]) << ','
                << format_number(c.t[i]) << ',' << format_number(c.r[i]) << ','
                << format_number(c.i_device[i]) << ',' << format_number(c.i_load[i]);
        out << '\n';
    }
}

void write_spikes_csv(std::ostream& out, const SpikeTrain& train)
{
    out << "peak_time_s,amplitude_A,width_s\n";
    for (const auto& e : train.events)
        out << format_number(e.peak_time) << ',' << format_number(e.amplitude) << ','
            << format_number(e.width) << '\n';
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw std::out_of_range("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const
{
    const auto c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back(r[c]);
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return cells;
}

}  // namespace

CsvTable read_csv_table(std::istream& in)
{
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (t.columns.empty() && std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            t.columns = split(line);
    }
    if (t.columns.empty())
        throw std::invalid_argument("CSV: missing header");
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto cells = split(line);
        if (cells.size() != t.columns.size())
            throw std::invalid_argument("CSV line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(t.columns.size()) + " fields");
        std::vector<double> row;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size())
                throw std::invalid_argument("CSV line " + std::to_string(lineno) +
                                            ": bad number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return read_csv_table(in);
}

Trace trace_from_table(const CsvTable& table)
{
    Trace trace;
    const auto time = table.values("time_s");
    trace.t_start = time.empty() ? 0.0 : time.front();
    trace.dt = time.size() > 1 ? (time.back() - time.front()) / static_cast<double>(time.size() - 1)
                               : 0.0;
    for (std::size_t d = 0;; ++d) {
        const auto p = "dev" + std::to_string(d) + "_";
        if (std::find(table.columns.begin(), table.columns.end(), p + "v1_V") ==
            table.columns.end())
            break;
        DeviceChannels c;
        c.v_in = table.values(p + "vin_V");
        c.v1 = table.values(p + "v1_V");
        c.t = table.values(p + "T_K");
        c.r = table.values(p + "R_ohm");
        c.i_device = table.values(p + "Idev_A");
        c.i_load = table.values(p + "Iload_A");
        trace.devices.push_back(std::move(c));
    }
    if (trace.devices.empty())
        throw std::invalid_argument("CSV holds no device channels");
    return trace;
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const OperatingMode& m)
{
    return {{"mode", to_string(m.label)},
            {"low_confidence", m.low_confidence},
            {"spike_count", m.spike_count},
            {"mean_frequency_Hz", m.mean_frequency},
            {"final_current_A", m.final_current},
            {"final_fraction", m.final_fraction}};
}

json to_json(const SyncReport& s)
{
    return {{"ratio", s.ratio_label()},
            {"n", s.n},
            {"m", s.m},
            {"count_a", s.count_a},
            {"count_b", s.count_b},
            {"mixed", s.mixed},
            {"lock_defined", s.lock_defined},
            {"few_spikes", s.few_spikes},
            {"lock_fraction", s.lock_fraction},
            {"mean_lag_s", s.mean_lag}};
}

void write_rate_csv(std::ostream& out, const RateCodingCurve& curve)
{
    out << "v_in_V,mode,low_confidence,spike_count,frequency_Hz,final_current_A\n";
    for (const auto& p : curve.points)
        out << format_number(p.v_in) << ',' << to_string(p.mode.label) << ','
            << (p.mode.low_confidence ? 1 : 0) << ',' << p.mode.spike_count << ','
            << format_number(p.frequency) << ',' << format_number(p.mode.final_current) << '\n';
}

json rate_to_json(const RateCodingCurve& curve)
{
    json points = json::array();
    for (const auto& p : curve.points)
        points.push_back({{"v_in_V", p.v_in}, {"frequency_Hz", p.frequency}, {"mode", to_json(p.mode)}});
    return {{"kind", "rate"},
            {"threshold_low_V", number(curve.threshold_low)},
            {"cutoff_high_V", number(curve.cutoff_high)},
            {"spiking_intervals", curve.spiking_intervals},
            {"points", points}};
}

namespace {

void write_sync_cells(std::ostream& out, const SyncReport& s)
{
    out << s.ratio_label() << ',' << s.count_a << ',' << s.count_b << ','
        << format_number(s.lock_fraction) << ',' << format_number(s.mean_lag) << ','
        << (s.lock_defined ? 1 : 0) << ',' << (s.few_spikes ? 1 : 0);
}

constexpr const char* kSyncHeader =
    "ratio,count_a,count_b,lock_fraction,mean_lag_s,lock_defined,few_spikes";

}  // namespace

void write_coupling_csv(std::ostream& out, const std::vector<CouplingPoint>& points)
{
    out << "eta,mode_a,mode_b," << kSyncHeader << '\n';
    for (const auto& p : points) {
        out << format_number(p.eta) << ',' << to_string(p.mode_a.label) << ','
            << to_string(p.mode_b.label) << ',';
        write_sync_cells(out, p.sync);
        out << '\n';
    }
}

json coupling_to_json(const std::vector<CouplingPoint>& points)
{
    json arr = json::array();
    for (const auto& p : points)
        arr.push_back({{"eta", p.eta},
                       {"mode_a", to_json(p.mode_a)},
                       {"mode_b", to_json(p.mode_b)},
                       {"sync", to_json(p.sync)}});
    return {{"kind", "coupling"}, {"points", arr}};
}

void write_drive_csv(std::ostream& out, const std::vector<DrivePoint>& points)
{
    out << "v_a_V,mode_a,mode_b,label," << kSyncHeader << '\n';
    for (const auto& p : points) {
        out << format_number(p.v_a) << ',' << to_string(p.mode_a.label) << ','
            << to_string(p.mode_b.label) << ',' << p.label << ',';
        write_sync_cells(out, p.sync);
        out << '\n';
    }
}

json drive_to_json(const std::vector<DrivePoint>& points)
{
    json arr = json::array();
    for (const auto& p : points)
        arr.push_back({{"v_a_V", p.v_a},
                       {"label", p.label},
                       {"mode_a", to_json(p.mode_a)},
                       {"mode_b", to_json(p.mode_b)},
                       {"sync", to_json(p.sync)}});
    return {{"kind", "drive"}, {"points", arr}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace neuristor
