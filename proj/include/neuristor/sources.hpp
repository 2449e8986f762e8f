#pragma once

// Input-voltage waveforms with ideal (zero rise/fall) edges.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace neuristor {

struct Dc {
    double level = 0.0;  // V
    bool operator==(const Dc&) const = default;
};

/// Single rectangular pulse; `level` on [start, start + width), `baseline` elsewhere.
struct Pulse {
    double level = 0.0;
    double start = 0.0;
    double width = 0.0;
    double baseline = 0.0;
    bool operator==(const Pulse&) const = default;
};

/// `high` on [start + n*period, start + n*period + duty*period) for n < count,
/// `low` elsewhere. An empty count means the train never ends.
struct PulseTrain {
    double high = 0.0;
    double low = 0.0;
    double period = 0.0;
    double duty = 0.5;
    double start = 0.0;
    std::optional<std::int64_t> count;
    bool operator==(const PulseTrain&) const = default;
};

using Waveform = std::variant<Dc, Pulse, PulseTrain>;

double sample(const Waveform& w, double t);

/// Field-level problems as (field name, message) pairs; empty when valid.
std::vector<std::pair<std::string, std::string>> validate(const Waveform& w);

}  // namespace neuristor
