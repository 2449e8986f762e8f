#pragma once

// DE/rand/1/bin global minimizer over a bounded box.

#include "neuristor/parallel.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace neuristor {

struct DESettings {
    std::size_t population = 0;  ///< 0 selects 15 x dimension
    double f = 0.5;              ///< mutation factor, (0, 2]
    double cr = 0.9;             ///< crossover rate, [0, 1]
    std::size_t max_generations = 300;
    double tolerance = 1e-12;    ///< stop when max - min population fitness falls below this
    std::uint64_t seed = 1;
    std::vector<std::pair<double, double>> bounds;  ///< (low, high) per dimension
    Execution execution = Execution::parallel;
};

struct DEResult {
    std::vector<double> best;
    double best_value = 0.0;
    std::size_t generations = 0;       ///< generations completed after initialization
    std::size_t evaluations = 0;
    std::vector<double> history;       ///< best value after initialization and each generation
    bool converged = false;            ///< stopped on the spread tolerance
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Every problem with `s`, empty when valid.
std::vector<std::string> validate(const DESettings& s);

/// Minimizes `objective`. Trial vectors are drawn serially from a seeded
/// generator and evaluated (optionally concurrently) before a synchronous
/// greedy selection, so results depend only on the settings. Non-finite
/// objective values are treated as +infinity. Throws std::invalid_argument
/// for invalid settings.
DEResult differential_evolution(const Objective& objective, const DESettings& settings);

}  // namespace neuristor
