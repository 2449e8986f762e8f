#pragma once

// CSV and JSON writers for traces, spike lists and sweep results, plus a
// generic numeric CSV reader. Numbers use a fixed `%.12g` format so output
// is byte-stable across runs.

#include "neuristor/analysis.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace neuristor {

std::string format_number(double v);

/// Header `time_s,dev<i>_vin_V,dev<i>_v1_V,dev<i>_T_K,dev<i>_R_ohm,dev<i>_Idev_A,dev<i>_Iload_A`.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Header `peak_time_s,amplitude_A,width_s`.
void write_spikes_csv(std::ostream& out, const SpikeTrain& train);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Index of `name`; throws std::out_of_range when absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

/// Reads a numeric CSV with a header line. Throws std::invalid_argument on
/// ragged rows or non-numeric cells.
CsvTable read_csv_table(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Rebuilds a trace from a CSV written by write_trace_csv (params are left empty).
Trace trace_from_table(const CsvTable& table);

nlohmann::json to_json(const OperatingMode& m);
nlohmann::json to_json(const SyncReport& s);

void write_rate_csv(std::ostream& out, const RateCodingCurve& curve);
nlohmann::json rate_to_json(const RateCodingCurve& curve);

void write_coupling_csv(std::ostream& out, const std::vector<CouplingPoint>& points);
nlohmann::json coupling_to_json(const std::vector<CouplingPoint>& points);

void write_drive_csv(std::ostream& out, const std::vector<DrivePoint>& points);
nlohmann::json drive_to_json(const std::vector<DrivePoint>& points);

/// JSON with 2-space indentation and a trailing newline.
std::string dump(const nlohmann::json& j);

/// Writes `text` to `path`, creating parent directories. Throws std::runtime_error.
void write_file(const std::string& path, const std::string& text);

}  // namespace neuristor
