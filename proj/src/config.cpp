#include "neuristor/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace neuristor {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown fields.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object())
            throw ConfigError(path_, "expected an object");
    }

    std::string at(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    bool has(const std::string& key) const { return node_.contains(key) && !node_[key].is_null(); }

    /// Accepts `key` (typically an explicit null) without reading it.
    void mark(const std::string& key) { seen_.insert(key); }

    const json& raw(const std::string& key)
    {
        seen_.insert(key);
        return node_.at(key);
    }

    double number(const std::string& key, double fallback)
    {
        seen_.insert(key);
        if (!has(key))
            return fallback;
        const auto& v = node_[key];
        if (!v.is_number())
            throw ConfigError(at(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw ConfigError(at(key), "must be finite");
        return x;
    }

    double required_number(const std::string& key)
    {
        if (!has(key))
            throw ConfigError(at(key), "required field missing");
        return number(key, 0.0);
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback)
    {
        seen_.insert(key);
        if (!has(key))
            return fallback;
        const auto& v = node_[key];
        if (!v.is_number_unsigned())
            throw ConfigError(at(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key, const std::string& fallback)
    {
        seen_.insert(key);
        if (!has(key))
            return fallback;
        const auto& v = node_[key];
        if (!v.is_string())
            throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }

    void finish() const
    {
        for (const auto& [key, value] : node_.items())
            if (!seen_.count(key))
                throw ConfigError(at(key), "unknown field");
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string index_path(const std::string& base, std::size_t i)
{
    return base + "[" + std::to_string(i) + "]";
}

HysteresisParams read_hysteresis(const json& node, const std::string& path)
{
    ObjectReader r(node, path);
    const std::string preset = r.string("preset", "paper-fit-2023");
    if (preset != "paper-fit-2023")
        throw ConfigError(r.at("preset"), "unknown preset '" + preset + "'");
    HysteresisParams p = paper_fit_2023();
    p.r0 = r.number("r0_ohm", p.r0);
    p.rm = r.number("rm_ohm", p.rm);
    p.ea = r.number("ea_K", p.ea);
    p.beta = r.number("beta_per_K", p.beta);
    p.w = r.number("w_K", p.w);
    p.tc = r.number("tc_K", p.tc);
    p.gamma = r.number("gamma", p.gamma);
    const std::string form = r.string("reversal_form", to_string(p.reversal_form));
    try {
        p.reversal_form = reversal_form_from_string(form);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(r.at("reversal_form"), e.what());
    }
    r.finish();
    for (const auto& msg : validate(p))
        throw ConfigError(path, msg);
    return p;
}

DetectionSettings read_detection(const json& node, const std::string& path)
{
    ObjectReader r(node, path);
    DetectionSettings d;
    d.hi = r.number("hi_A", d.hi);
    d.lo = r.number("lo_A", d.lo);
    d.plateau_floor = r.number("plateau_floor_A", d.plateau_floor);
    r.finish();
    if (!(d.lo > 0.0))
        throw ConfigError(r.at("lo_A"), "must be > 0");
    if (!(d.hi > d.lo))
        throw ConfigError(r.at("hi_A"), "must exceed lo_A");
    if (!(d.plateau_floor >= 0.0))
        throw ConfigError(r.at("plateau_floor_A"), "must be >= 0");
    return d;
}

void read_device(const json& node, const std::string& path, RunConfig& cfg)
{
    ObjectReader r(node, path);
    const std::string preset = r.string("preset", "paper-fit-2023");
    if (preset != "paper-fit-2023")
        throw ConfigError(r.at("preset"), "unknown preset '" + preset + "'");
    DeviceParams p = paper_fit_device();
    const std::string name = r.string("name", "dev" + std::to_string(cfg.network.devices.size()));
    p.c = r.number("c_F", p.c);
    p.k = r.number("k", p.k);
    p.s_th = r.number("s_th_W_per_K", p.s_th);
    p.c_th = r.number("c_th_J_per_K", p.c_th);
    p.r_load = r.number("r_load_ohm", p.r_load);
    if (r.has("hysteresis"))
        p.hysteresis = read_hysteresis(r.raw("hysteresis"), r.at("hysteresis"));
    DetectionSettings d;
    if (r.has("detection"))
        d = read_detection(r.raw("detection"), r.at("detection"));
    r.finish();

    const auto issues = validate(p);
    if (!issues.empty())
        throw ConfigError(path, issues.front());
    cfg.network.devices.push_back(p);
    cfg.device_names.push_back(name);
    cfg.detection.push_back(d);
}

const char* waveform_key(const std::string& field)
{
    static const std::map<std::string, const char*> keys = {
        {"level", "level_V"}, {"start", "start_s"}, {"width", "width_s"},
        {"baseline", "baseline_V"}, {"high", "high_V"}, {"low", "low_V"},
        {"period", "period_s"}, {"duty", "duty"}, {"count", "count"}};
    auto it = keys.find(field);
    return it == keys.end() ? "?" : it->second;
}

Waveform read_waveform(const json& node, const std::string& path)
{
    ObjectReader r(node, path);
    const std::string type = r.string("type", "");
    Waveform w;
    if (type == "dc") {
        w = Dc{r.required_number("level_V")};
    } else if (type == "pulse") {
        Pulse p;
        p.level = r.required_number("level_V");
        p.start = r.number("start_s", 0.0);
        p.width = r.required_number("width_s");
        p.baseline = r.number("baseline_V", 0.0);
        w = p;
    } else if (type == "pulse_train") {
        PulseTrain p;
        p.high = r.required_number("high_V");
        p.low = r.number("low_V", 0.0);
        p.period = r.required_number("period_s");
        p.duty = r.required_number("duty");
        p.start = r.number("start_s", 0.0);
        if (r.has("count")) {
            const auto& c = r.raw("count");
            if (!c.is_number_integer())
                throw ConfigError(r.at("count"), "expected an integer or null");
            p.count = c.get<std::int64_t>();
        } else {
            r.mark("count");
        }
        w = p;
    } else {
        throw ConfigError(r.at("type"), "expected one of dc, pulse, pulse_train");
    }
    r.finish();
    for (const auto& [field, msg] : validate(w))
        throw ConfigError(path + "." + waveform_key(field), msg);
    return w;
}

std::pair<double, double> read_pair(const json& node, const std::string& path)
{
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number())
        throw ConfigError(path, "expected [low, high]");
    return {node[0].get<double>(), node[1].get<double>()};
}

std::vector<double> read_numbers(const json& node, const std::string& path)
{
    if (!node.is_array())
        throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number())
            throw ConfigError(index_path(path, i), "expected a number");
        out.push_back(node[i].get<double>());
    }
    return out;
}

void read_network(const json& node, RunConfig& cfg)
{
    ObjectReader r(node, "network");
    cfg.network.t0 = r.number("t0_K", 325.0);
    if (!(cfg.network.t0 > 0.0))
        throw ConfigError(r.at("t0_K"), "must be > 0");
    if (!r.has("devices"))
        throw ConfigError(r.at("devices"), "required field missing");
    const auto& devices = r.raw("devices");
    if (!devices.is_array() || devices.empty())
        throw ConfigError(r.at("devices"), "expected a non-empty array");
    for (std::size_t i = 0; i < devices.size(); ++i)
        read_device(devices[i], index_path(r.at("devices"), i), cfg);

    const auto n = cfg.network.devices.size();
    if (r.has("eta")) {
        const auto& eta = r.raw("eta");
        if (!eta.is_array() || eta.size() != n)
            throw ConfigError(r.at("eta"), "expected " + std::to_string(n) + " rows");
        for (std::size_t i = 0; i < n; ++i) {
            auto row = read_numbers(eta[i], index_path(r.at("eta"), i));
            if (row.size() != n)
                throw ConfigError(index_path(r.at("eta"), i),
                                  "expected " + std::to_string(n) + " entries");
            cfg.network.eta.push_back(std::move(row));
        }
    } else {
        cfg.network.eta = uncoupled(n);
    }
    r.finish();
}

void read_solver(const json& node, RunConfig& cfg)
{
    ObjectReader r(node, "solver");
    auto& s = cfg.solver;
    s.dt = r.number("dt_s", s.dt);
    s.horizon = r.number("horizon_s", s.horizon);
    s.seed = r.unsigned_integer("seed", s.seed);
    s.noise_sigma = r.number("noise_K_per_sqrt_s", s.noise_sigma);
    s.record_stride = r.unsigned_integer("record_stride", s.record_stride);
    s.reversal_eps = r.number("reversal_eps_K", s.reversal_eps);
    s.settle = r.number("settle_s", s.settle);
    r.finish();
    if (!(s.dt > 0.0))
        throw ConfigError(r.at("dt_s"), "must be > 0");
    if (!(s.horizon >= s.dt))
        throw ConfigError(r.at("horizon_s"), "must be >= dt_s");
    if (!(s.noise_sigma >= 0.0))
        throw ConfigError(r.at("noise_K_per_sqrt_s"), "must be >= 0");
    if (s.record_stride == 0)
        throw ConfigError(r.at("record_stride"), "must be >= 1");
    if (!(s.reversal_eps > 0.0))
        throw ConfigError(r.at("reversal_eps_K"), "must be > 0");
    if (!(s.settle >= 0.0) || (s.settle > 0.0 && s.settle >= s.horizon))
        throw ConfigError(r.at("settle_s"), "must lie in [0, horizon_s)");
}

void read_sweep(const json& node, RunConfig& cfg)
{
    ObjectReader r(node, "sweep");
    if (r.has("rate")) {
        ObjectReader s(r.raw("rate"), r.at("rate"));
        RateSweepSection rate;
        rate.device = s.unsigned_integer("device", rate.device);
        rate.v_min = s.number("v_min_V", rate.v_min);
        rate.v_max = s.number("v_max_V", rate.v_max);
        rate.step = s.number("step_V", rate.step);
        s.finish();
        if (rate.device >= cfg.network.devices.size())
            throw ConfigError(s.at("device"), "no such device");
        if (!(rate.step > 0.0))
            throw ConfigError(s.at("step_V"), "must be > 0");
        if (!(rate.v_max >= rate.v_min))
            throw ConfigError(s.at("v_max_V"), "must be >= v_min_V");
        cfg.sweep.rate = rate;
    }
    if (r.has("coupling")) {
        ObjectReader s(r.raw("coupling"), r.at("coupling"));
        CouplingSweepSection c;
        c.v_a = s.number("v_a_V", c.v_a);
        c.v_b = s.number("v_b_V", c.v_b);
        if (s.has("etas"))
            c.etas = read_numbers(s.raw("etas"), s.at("etas"));
        s.finish();
        if (c.etas.empty())
            throw ConfigError(s.at("etas"), "expected at least one coupling strength");
        for (std::size_t i = 0; i < c.etas.size(); ++i)
            if (!(c.etas[i] >= 0.0 && c.etas[i] < 1.0))
                throw ConfigError(index_path(s.at("etas"), i), "must lie in [0, 1)");
        cfg.sweep.coupling = c;
    }
    if (r.has("drive")) {
        ObjectReader s(r.raw("drive"), r.at("drive"));
        DriveMapSection d;
        d.v_b = s.number("v_b_V", d.v_b);
        d.v_a_min = s.number("v_a_min_V", d.v_a_min);
        d.v_a_max = s.number("v_a_max_V", d.v_a_max);
        d.step = s.number("step_V", d.step);
        d.eta = s.number("eta", d.eta);
        s.finish();
        if (!(d.step > 0.0))
            throw ConfigError(s.at("step_V"), "must be > 0");
        if (!(d.v_a_max >= d.v_a_min))
            throw ConfigError(s.at("v_a_max_V"), "must be >= v_a_min_V");
        if (!(d.eta >= 0.0 && d.eta < 1.0))
            throw ConfigError(s.at("eta"), "must lie in [0, 1)");
        cfg.sweep.drive = d;
    }
    r.finish();
    if ((cfg.sweep.coupling || cfg.sweep.drive) && cfg.network.devices.size() != 2)
        throw ConfigError("sweep", "coupling and drive sweeps need exactly two devices");
}

void read_fit(const json& node, RunConfig& cfg)
{
    ObjectReader r(node, "fit");
    auto& f = cfg.fit;
    f.population = r.unsigned_integer("population", f.population);
    f.f = r.number("f", f.f);
    f.cr = r.number("cr", f.cr);
    f.max_generations = r.unsigned_integer("max_generations", f.max_generations);
    f.tolerance = r.number("tolerance", f.tolerance);
    f.seed = r.unsigned_integer("seed", f.seed);
    if (r.has("bounds")) {
        ObjectReader b(r.raw("bounds"), r.at("bounds"));
        for (const auto& [key, value] : r.raw("bounds").items()) {
            b.raw(key);
            const auto pair = read_pair(value, b.at(key));
            if (!(pair.first < pair.second))
                throw ConfigError(b.at(key), "low must be < high");
            f.bounds[key] = pair;
        }
        b.finish();
    }
    f.v_in = r.number("v_in_V", f.v_in);
    f.r_load = r.number("r_load_ohm", f.r_load);
    f.t0 = r.number("t0_K", f.t0);
    f.horizon = r.number("horizon_s", f.horizon);
    r.finish();
    if (f.population != 0 && f.population < 4)
        throw ConfigError(r.at("population"), "must be >= 4");
    if (!(f.f > 0.0 && f.f <= 2.0))
        throw ConfigError(r.at("f"), "must lie in (0, 2]");
    if (!(f.cr >= 0.0 && f.cr <= 1.0))
        throw ConfigError(r.at("cr"), "must lie in [0, 1]");
}

void read_output(const json& node, RunConfig& cfg)
{
    ObjectReader r(node, "output");
    auto& o = cfg.output;
    o.dir = r.string("dir", o.dir);
    o.prefix = r.string("prefix", o.prefix);
    o.format = r.string("format", o.format);
    r.finish();
    if (o.format != "csv" && o.format != "json")
        throw ConfigError(r.at("format"), "expected csv or json");
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

RunConfig config_from_json(const json& doc)
{
    ObjectReader r(doc, "");
    RunConfig cfg;
    const auto version = r.unsigned_integer("schema_version", 0);
    if (version != static_cast<std::uint64_t>(kSchemaVersion))
        throw ConfigError("schema_version", "expected " + std::to_string(kSchemaVersion));
    cfg.name = r.string("name", cfg.name);
    if (!r.has("network"))
        throw ConfigError("network", "required field missing");
    read_network(r.raw("network"), cfg);

    if (!r.has("sources"))
        throw ConfigError("sources", "required field missing");
    const auto& sources = r.raw("sources");
    if (!sources.is_array())
        throw ConfigError("sources", "expected an array");
    for (std::size_t i = 0; i < sources.size(); ++i)
        cfg.sources.push_back(read_waveform(sources[i], index_path("sources", i)));
    if (cfg.sources.size() != cfg.network.devices.size())
        throw ConfigError("sources", "expected one source per device (" +
                                         std::to_string(cfg.network.devices.size()) + ")");

    if (r.has("solver"))
        read_solver(r.raw("solver"), cfg);
    if (r.has("sweep"))
        read_sweep(r.raw("sweep"), cfg);
    if (r.has("fit"))
        read_fit(r.raw("fit"), cfg);
    if (r.has("output"))
        read_output(r.raw("output"), cfg);
    for (const char* key : {"solver", "sweep", "fit", "output"})
        if (doc.contains(key) && doc[key].is_null())
            r.mark(key);
    r.finish();
    return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& origin)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": parse error: " << e.what();
        throw ConfigError("", os.str());
    }
    auto cfg = config_from_json(doc);
    const auto issues = validate(cfg);
    if (!issues.empty()) {
        std::string report = origin + ": invalid configuration";
        for (const auto& issue : issues)
            report += "\n  " + issue;
        throw ConfigError("", report);
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::vector<std::string> validate(const RunConfig& cfg)
{
    std::vector<std::string> issues;
    const auto report = validate_coupling(cfg.network);
    for (const auto& v : report.violations) {
        std::string where = "network";
        if (v.i >= 0 && v.j >= 0)
            where += ".eta[" + std::to_string(v.i) + "][" + std::to_string(v.j) + "]";
        else if (v.i >= 0)
            where += ".eta[" + std::to_string(v.i) + "]";
        issues.push_back(where + ": " + v.message);
    }
    if (cfg.sources.size() != cfg.network.size())
        issues.push_back("sources: expected one source per device");
    for (std::size_t i = 0; i < cfg.sources.size(); ++i)
        for (const auto& [field, msg] : validate(cfg.sources[i]))
            issues.push_back(index_path("sources", i) + "." + waveform_key(field) + ": " + msg);
    if (cfg.detection.size() != cfg.network.size())
        issues.push_back("detection: expected one setting per device");
    return issues;
}

json waveform_to_json(const Waveform& w)
{
    if (const auto* dc = std::get_if<Dc>(&w))
        return {{"type", "dc"}, {"level_V", dc->level}};
    if (const auto* p = std::get_if<Pulse>(&w))
        return {{"type", "pulse"},
                {"level_V", p->level},
                {"start_s", p->start},
                {"width_s", p->width},
                {"baseline_V", p->baseline}};
    const auto& t = std::get<PulseTrain>(w);
    json j = {{"type", "pulse_train"}, {"high_V", t.high},     {"low_V", t.low},
              {"period_s", t.period},  {"duty", t.duty},       {"start_s", t.start}};
    j["count"] = t.count ? json(*t.count) : json(nullptr);
    return j;
}

json device_to_json(const DeviceParams& p, const std::string& name,
                    const DetectionSettings& detection)
{
    const auto& h = p.hysteresis;
    return {{"name", name},
            {"c_F", p.c},
            {"k", p.k},
            {"s_th_W_per_K", p.s_th},
            {"c_th_J_per_K", p.c_th},
            {"r_load_ohm", p.r_load},
            {"hysteresis",
             {{"r0_ohm", h.r0},
              {"rm_ohm", h.rm},
              {"ea_K", h.ea},
              {"beta_per_K", h.beta},
              {"w_K", h.w},
              {"tc_K", h.tc},
              {"gamma", h.gamma},
              {"reversal_form", to_string(h.reversal_form)}}},
            {"detection",
             {{"hi_A", detection.hi},
              {"lo_A", detection.lo},
              {"plateau_floor_A", detection.plateau_floor}}}};
}

json to_json(const RunConfig& cfg)
{
    json devices = json::array();
    for (std::size_t i = 0; i < cfg.network.devices.size(); ++i)
        devices.push_back(device_to_json(cfg.network.devices[i], cfg.device_names.at(i),
                                         cfg.detection.at(i)));
    json sources = json::array();
    for (const auto& w : cfg.sources)
        sources.push_back(waveform_to_json(w));

    const auto& s = cfg.solver;
    json doc = {
        {"schema_version", cfg.schema_version},
        {"name", cfg.name},
        {"network", {{"t0_K", cfg.network.t0}, {"eta", cfg.network.eta}, {"devices", devices}}},
        {"sources", sources},
        {"solver",
         {{"dt_s", s.dt},
          {"horizon_s", s.horizon},
          {"seed", s.seed},
          {"noise_K_per_sqrt_s", s.noise_sigma},
          {"record_stride", s.record_stride},
          {"reversal_eps_K", s.reversal_eps},
          {"settle_s", s.settle}}},
        {"output",
         {{"dir", cfg.output.dir}, {"prefix", cfg.output.prefix}, {"format", cfg.output.format}}},
    };

    json sweep = json::object();
    if (const auto& r = cfg.sweep.rate)
        sweep["rate"] = {{"device", r->device},
                         {"v_min_V", r->v_min},
                         {"v_max_V", r->v_max},
                         {"step_V", r->step}};
    if (const auto& c = cfg.sweep.coupling)
        sweep["coupling"] = {{"v_a_V", c->v_a}, {"v_b_V", c->v_b}, {"etas", c->etas}};
    if (const auto& d = cfg.sweep.drive)
        sweep["drive"] = {{"v_b_V", d->v_b},
                          {"v_a_min_V", d->v_a_min},
                          {"v_a_max_V", d->v_a_max},
                          {"step_V", d->step},
                          {"eta", d->eta}};
    doc["sweep"] = sweep;

    const auto& f = cfg.fit;
    json bounds = json::object();
    for (const auto& [key, pair] : f.bounds)
        bounds[key] = {pair.first, pair.second};
    doc["fit"] = {{"population", f.population},
                  {"f", f.f},
                  {"cr", f.cr},
                  {"max_generations", f.max_generations},
                  {"tolerance", f.tolerance},
                  {"seed", f.seed},
                  {"bounds", bounds},
                  {"v_in_V", f.v_in},
                  {"r_load_ohm", f.r_load},
                  {"t0_K", f.t0},
                  {"horizon_s", f.horizon}};
    return doc;
}

IntegrateOptions integrate_options(const RunConfig& cfg)
{
    IntegrateOptions o;
    o.dt = cfg.solver.dt;
    o.horizon = cfg.solver.horizon;
    o.seed = cfg.solver.seed;
    if (cfg.solver.noise_sigma > 0.0)
        o.noise = NoiseSpec{cfg.solver.noise_sigma};
    o.reversal_eps = cfg.solver.reversal_eps;
    o.record_stride = cfg.solver.record_stride;
    return o;
}

}  // namespace neuristor
