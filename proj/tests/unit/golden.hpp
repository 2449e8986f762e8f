#pragma once

#include "neuristor/io.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

// Compares a spike train with a stored `peak_time_s,amplitude_A,width_s` file.
inline void check_against_golden(const neuristor::SpikeTrain& train, const std::string& name)
{
    const auto table = neuristor::read_csv_file(std::string(NEURISTOR_GOLDEN_DIR) + "/" + name);
    const auto times = table.values("peak_time_s");
    const auto amps = table.values("amplitude_A");
    const auto widths = table.values("width_s");
    REQUIRE(train.size() == times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(train.events[k].peak_time - times[k]) < 1e-9);
        CHECK(std::abs(train.events[k].amplitude - amps[k]) < 1e-6 * amps[k]);
        CHECK(std::abs(train.events[k].width - widths[k]) < 1e-9);
    }
}
