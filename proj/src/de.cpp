#include "neuristor/de.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace neuristor {

std::vector<std::string> validate(const DESettings& s)
{
    std::vector<std::string> issues;
    if (s.bounds.empty())
        issues.emplace_back("bounds: at least one dimension required");
    for (std::size_t i = 0; i < s.bounds.size(); ++i) {
        const auto [lo, hi] = s.bounds[i];
        if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
            issues.push_back("bounds[" + std::to_string(i) + "]: need finite low < high");
    }
    if (s.population != 0 && s.population < 4)
        issues.emplace_back("population: must be >= 4");
    if (!(s.f > 0.0 && s.f <= 2.0))
        issues.emplace_back("f: must lie in (0, 2]");
    if (!(s.cr >= 0.0 && s.cr <= 1.0))
        issues.emplace_back("cr: must lie in [0, 1]");
    if (!(s.tolerance >= 0.0))
        issues.emplace_back("tolerance: must be >= 0");
    return issues;
}

DEResult differential_evolution(const Objective& objective, const DESettings& settings)
{
    if (const auto issues = validate(settings); !issues.empty())
        throw std::invalid_argument("differential_evolution: " + issues.front());

    const std::size_t dim = settings.bounds.size();
    const std::size_t np = settings.population ? settings.population : 15 * dim;
    const auto& bounds = settings.bounds;

    std::mt19937_64 rng(settings.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    std::uniform_int_distribution<std::size_t> pick_dim(0, dim - 1);

    auto evaluate = [&](const std::vector<std::vector<double>>& xs) {
        return parallel_map(
            xs.size(),
            [&](std::size_t i) {
                const double v = objective(xs[i]);
                return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
            },
            settings.execution);
    };

    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    for (auto& x : pop)
        for (std::size_t d = 0; d < dim; ++d)
            x[d] = bounds[d].first + unit(rng) * (bounds[d].second - bounds[d].first);
    std::vector<double> fit = evaluate(pop);

    DEResult out;
    out.evaluations = np;
    auto record = [&] {
        const auto best = std::min_element(fit.begin(), fit.end()) - fit.begin();
        out.best = pop[static_cast<std::size_t>(best)];
        out.best_value = fit[static_cast<std::size_t>(best)];
        out.history.push_back(out.best_value);
    };
    auto spread = [&] {
        const auto [lo, hi] = std::minmax_element(fit.begin(), fit.end());
        return *hi - *lo;
    };
    record();

    std::vector<std::vector<double>> trials(np, std::vector<double>(dim));
    while (out.generations < settings.max_generations) {
        if (spread() < settings.tolerance) {
            out.converged = true;
            break;
        }
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do r1 = pick(rng); while (r1 == i);
            do r2 = pick(rng); while (r2 == i || r2 == r1);
            do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t forced = pick_dim(rng);
            auto& t = trials[i];
            for (std::size_t d = 0; d < dim; ++d) {
                if (d == forced || unit(rng) < settings.cr) {
                    const double v = pop[r1][d] + settings.f * (pop[r2][d] - pop[r3][d]);
                    t[d] = std::clamp(v, bounds[d].first, bounds[d].second);
                } else {
                    t[d] = pop[i][d];
                }
            }
        }
        const auto trial_fit = evaluate(trials);
        out.evaluations += np;
        for (std::size_t i = 0; i < np; ++i) {
            if (trial_fit[i] <= fit[i]) {
                pop[i] = trials[i];
                fit[i] = trial_fit[i];
            }
        }
        ++out.generations;
        record();
    }
    if (!out.converged && spread() < settings.tolerance)
        out.converged = true;
    return out;
}

}  // namespace neuristor
