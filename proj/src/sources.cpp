#include "neuristor/sources.hpp"

#include <cmath>

namespace neuristor {

namespace {

struct Sampler {
    double t;

    double operator()(const Dc& w) const { return w.level; }

    double operator()(const Pulse& w) const
    {
        return (t >= w.start && t < w.start + w.width) ? w.level : w.baseline;
    }

    double operator()(const PulseTrain& w) const
    {
        if (t < w.start)
            return w.low;
        const double n = std::floor((t - w.start) / w.period);
        if (w.count && n >= static_cast<double>(*w.count))
            return w.low;
        const double phase = (t - w.start) - n * w.period;
        return phase < w.duty * w.period ? w.high : w.low;
    }
};

struct Validator {
    std::vector<std::pair<std::string, std::string>>& out;

    void finite(double v, const char* field) const
    {
        if (!std::isfinite(v))
            out.emplace_back(field, "must be finite");
    }

    void operator()(const Dc& w) const { finite(w.level, "level"); }

    void operator()(const Pulse& w) const
    {
        finite(w.level, "level");
        finite(w.baseline, "baseline");
        if (!(w.start >= 0.0) || !std::isfinite(w.start))
            out.emplace_back("start", "must be >= 0");
        if (!(w.width > 0.0) || !std::isfinite(w.width))
            out.emplace_back("width", "must be > 0");
    }

    void operator()(const PulseTrain& w) const
    {
        finite(w.high, "high");
        finite(w.low, "low");
        if (!(w.period > 0.0) || !std::isfinite(w.period))
            out.emplace_back("period", "must be > 0");
        if (!(w.duty > 0.0 && w.duty < 1.0))
            out.emplace_back("duty", "must lie in (0, 1)");
        if (!(w.start >= 0.0) || !std::isfinite(w.start))
            out.emplace_back("start", "must be >= 0");
        if (w.count && *w.count < 0)
            out.emplace_back("count", "must be >= 0");
    }
};

}  // namespace

double sample(const Waveform& w, double t)
{
    return std::visit(Sampler{t}, w);
}

std::vector<std::pair<std::string, std::string>> validate(const Waveform& w)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::visit(Validator{out}, w);
    return out;
}

}  // namespace neuristor
