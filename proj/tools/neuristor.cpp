// neuristor: simulate, sweep and fit thermally coupled VO2 neuristors.
//
// Exit codes: 0 success, 1 usage or validation error, 2 runtime error.

#include "neuristor/config.hpp"
#include "neuristor/fit.hpp"
#include "neuristor/io.hpp"
#include "neuristor/parallel.hpp"
#include "neuristor/runner.hpp"
#include "neuristor/scenarios.hpp"
#include "neuristor/svg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace neuristor;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    int threads = 0;
};

void apply(const Overrides& o, RunConfig& cfg)
{
    if (o.dt)
        cfg.solver.dt = *o.dt;
    if (o.horizon)
        cfg.solver.horizon = *o.horizon;
    if (o.seed) {
        cfg.solver.seed = *o.seed;
        cfg.fit.seed = *o.seed;
    }
    if (o.out)
        cfg.output.dir = *o.out;
    else if (const char* env = std::getenv("NEURISTOR_OUT_DIR"); env && *env)
        cfg.output.dir = env;
    if (o.format)
        cfg.output.format = *o.format;

    auto issues = validate(cfg);
    if (!(cfg.solver.dt > 0.0) || !(cfg.solver.horizon > cfg.solver.dt))
        issues.push_back("solver: need 0 < dt < horizon");
    if (!issues.empty()) {
        std::string report = "invalid configuration";
        for (const auto& i : issues)
            report += "\n  " + i;
        throw ValidationFailure(report);
    }
}

void report(const RunOutputs& out)
{
    for (const auto& f : out.files)
        std::cout << f << '\n';
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

SpikeFeatures load_features(const std::string& path)
{
    if (ends_with(path, ".json")) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("", "cannot open '" + path + "'");
        return features_from_json(nlohmann::json::parse(in));
    }
    const auto trace = trace_from_table(read_csv_file(path));
    return extract_spike_features(trace);
}

std::string default_svg_path(const std::string& csv)
{
    return (ends_with(csv, ".csv") ? csv.substr(0, csv.size() - 4) : csv) + ".svg";
}

int run(int argc, char** argv)
{
    CLI::App app{"Thermally coupled VO2 neuristor simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides ov;
    app.add_option("--dt", ov.dt, "Integration step [s]")->check(CLI::PositiveNumber);
    app.add_option("--horizon", ov.horizon, "Simulated time [s]")->check(CLI::PositiveNumber);
    app.add_option("--seed", ov.seed, "Master seed for noise and fitting");
    app.add_option("--out", ov.out, "Output directory (default: $NEURISTOR_OUT_DIR or the config's)");
    app.add_option("--format", ov.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", ov.threads, "Worker threads (0: OpenMP default)")
        ->check(CLI::NonNegativeNumber);

    std::string config_path, data_path, sweep_kind, scenario_name, svg_input, svg_output;
    std::vector<std::string> svg_columns;
    bool dump_config = false, list_scenarios = false;

    auto* simulate = app.add_subcommand("simulate", "Integrate a configured network; writes a trace");
    simulate->add_option("config", config_path, "Run configuration (JSON)")->required();

    auto* sweep = app.add_subcommand("sweep", "Run a rate, coupling or drive sweep");
    sweep->add_option("kind", sweep_kind, "rate | coupling | drive")
        ->required()
        ->check(CLI::IsMember({"rate", "coupling", "drive"}));
    sweep->add_option("config", config_path, "Run configuration (JSON)")->required();

    auto* fit = app.add_subcommand("fit", "Fit model constants by differential evolution");
    fit->require_subcommand(1);
    auto* fit_h = fit->add_subcommand("hysteresis", "Fit hysteresis constants to R(T) CSV data");
    fit_h->add_option("data", data_path, "CSV with T_K,R_ohm,branch[,series]")->required();
    fit_h->add_option("config", config_path, "Run configuration (JSON)")->required();
    auto* fit_d = fit->add_subcommand("device", "Fit C, k, S_th, C_th to spike features");
    fit_d->add_option("data", data_path, "Feature JSON or trace CSV")->required();
    fit_d->add_option("config", config_path, "Run configuration (JSON)")->required();

    auto* scenario = app.add_subcommand("scenario", "Run a built-in scenario");
    scenario->add_option("name", scenario_name, "Scenario name");
    scenario->add_flag("--list", list_scenarios, "List built-in scenarios");
    scenario->add_flag("--dump-config", dump_config, "Print the scenario's configuration and exit");

    auto* svg = app.add_subcommand("export-svg", "Plot columns of a trace CSV as SVG");
    svg->add_option("trace", svg_input, "Trace CSV")->required();
    svg->add_option("-o,--output", svg_output, "SVG path (default: input with .svg)");
    svg->add_option("--columns", svg_columns, "Columns to plot (default: every *_Idev_A)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kInvalid;
    }

    try {
        set_thread_count(ov.threads);

        if (*simulate) {
            auto cfg = load_config(config_path);
            apply(ov, cfg);
            report(run_simulation(cfg));
        } else if (*sweep) {
            auto cfg = load_config(config_path);
            apply(ov, cfg);
            report(run_sweep(cfg, sweep_kind_from_string(sweep_kind)));
        } else if (*fit_h) {
            auto cfg = load_config(config_path);
            apply(ov, cfg);
            report(run_hysteresis_fit(cfg, read_rt_csv_file(data_path)));
        } else if (*fit_d) {
            auto cfg = load_config(config_path);
            apply(ov, cfg);
            report(run_device_fit(cfg, load_features(data_path)));
        } else if (*scenario) {
            if (list_scenarios) {
                for (const auto& n : scenarios::names())
                    std::cout << n << '\n';
                return kOk;
            }
            if (scenario_name.empty())
                throw ValidationFailure("scenario: a name is required (see --list)");
            auto cfg = scenarios::builtin(scenario_name);
            apply(ov, cfg);
            if (dump_config) {
                std::cout << dump(to_json(cfg));
                return kOk;
            }
            report(run_scenario(scenario_name, cfg));
        } else if (*svg) {
            const auto table = read_csv_file(svg_input);
            auto columns = svg_columns;
            if (columns.empty())
                for (const auto& c : table.columns)
                    if (ends_with(c, "_Idev_A"))
                        columns.push_back(c);
            if (columns.empty())
                throw ValidationFailure("export-svg: no columns selected");
            PlotOptions opts;
            opts.title = svg_input;
            const auto path = svg_output.empty() ? default_svg_path(svg_input) : svg_output;
            write_file(path, line_plot_svg(table, table.columns.front(), columns, opts));
            std::cout << path << '\n';
        }
        return kOk;
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const InsufficientData& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
