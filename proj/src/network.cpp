#include "neuristor/network.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace neuristor {

CouplingMatrix uncoupled(std::size_t n)
{
    return CouplingMatrix(n, std::vector<double>(n, 0.0));
}

CouplingMatrix pair_coupling(double eta)
{
    return {{0.0, eta}, {eta, 0.0}};
}

std::string ValidationReport::to_string() const
{
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.message;
        if (v.i >= 0 && v.j >= 0)
            os << " at (" << v.i << "," << v.j << ")";
        else if (v.i >= 0)
            os << " at row " << v.i;
        os << '\n';
    }
    return os.str();
}

ValidationReport validate_coupling(const NetworkConfig& cfg)
{
    ValidationReport report;
    const auto n = cfg.devices.size();
    if (n == 0)
        report.violations.push_back({"network has no devices"});
    if (!(cfg.t0 > 0.0) || !std::isfinite(cfg.t0))
        report.violations.push_back({"t0 must be finite and > 0"});
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& msg : validate(cfg.devices[i]))
            report.violations.push_back({"device " + msg, static_cast<int>(i)});

    if (cfg.eta.size() != n) {
        report.violations.push_back({"eta must have one row per device"});
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (cfg.eta[i].size() != n) {
            report.violations.push_back({"eta row has wrong length", static_cast<int>(i)});
            return report;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int ii = static_cast<int>(i);
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const int jj = static_cast<int>(j);
            const double e = cfg.eta[i][j];
            if (i == j) {
                if (e != 0.0)
                    report.violations.push_back({"eta diagonal must be zero", ii, jj});
                continue;
            }
            if (!(e >= 0.0 && e < 1.0))
                report.violations.push_back({"eta entry outside [0, 1)", ii, jj});
            if (j > i && e != cfg.eta[j][i])
                report.violations.push_back({"eta is not symmetric", ii, jj});
            row_sum += e;
        }
        if (!(row_sum < 1.0))
            report.violations.push_back({"eta row sum must be < 1", ii});
    }
    return report;
}

NetworkModel::NetworkModel(const NetworkConfig& cfg)
    : devices_(cfg.devices), g_env_(cfg.size()), g_couple_(cfg.size() * cfg.size()), t0_(cfg.t0)
{
    const auto n = cfg.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            row_sum += cfg.eta[i][j];
            g_couple_[i * n + j] = cfg.eta[i][j] * devices_[i].s_th;
        }
        g_env_[i] = (1.0 - row_sum) * devices_[i].s_th;
    }
}

void NetworkModel::rates(std::span<const double> v1, std::span<const double> t,
                         std::span<const double> r, std::span<const double> v_in,
                         std::span<Derivatives> out) const
{
    const auto n = devices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = devices_[i];
        const double v = p.zero_load() ? v_in[i] : v1[i];
        double coupled = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            coupled += g_couple_[i * n + j] * (t[i] - t[j]);
        // Same operation order as electro_thermal_rates so eta = 0 reproduces it bit for bit.
        out[i].dv1 = p.zero_load()
                         ? 0.0
                         : v_in[i] / (p.r_load * p.c) - v1[i] * (1.0 / (r[i] * p.c) + 1.0 / (p.r_load * p.c));
        out[i].dt = v * v / (r[i] * p.c_th) - g_env_[i] * (t[i] - t0_) / p.c_th - coupled / p.c_th;
    }
}

double NetworkModel::coupling_flow(std::size_t i, std::size_t j, std::span<const double> t) const
{
    return g_couple_[i * devices_.size() + j] * (t[i] - t[j]);
}

double NetworkModel::environment_flow(std::size_t i, double t_i) const
{
    return g_env_[i] * (t_i - t0_);
}

std::vector<Derivatives> network_derivatives(std::span<const DeviceState> states,
                                             std::span<const double> v_ins,
                                             const NetworkConfig& cfg)
{
    const auto n = cfg.size();
    if (states.size() != n || v_ins.size() != n)
        throw std::invalid_argument("network_derivatives: expected " + std::to_string(n) +
                                    " states and inputs");
    const auto report = validate_coupling(cfg);
    if (!report.ok())
        throw std::invalid_argument("network_derivatives: invalid network\n" + report.to_string());

    NetworkModel model(cfg);
    std::vector<double> v1(n), t(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        v1[i] = states[i].v1;
        t[i] = states[i].t;
        r[i] = device_resistance(states[i], cfg.devices[i]);
    }
    std::vector<Derivatives> out(n);
    model.rates(v1, t, r, v_ins, out);
    return out;
}

}  // namespace neuristor
