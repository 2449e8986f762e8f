#include "neuristor/de.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

using namespace neuristor;

namespace {

double sphere(const std::vector<double>& x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

double rosenbrock(const std::vector<double>& x)
{
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
}

DESettings box(std::size_t dim, double lo, double hi)
{
    DESettings s;
    s.bounds.assign(dim, {lo, hi});
    return s;
}

}  // namespace

TEST_CASE("sphere in five dimensions")
{
    auto s = box(5, -5.0, 5.0);
    s.population = 50;
    s.max_generations = 200;
    s.tolerance = 0.0;
    const auto r = differential_evolution(sphere, s);
    CHECK(r.best_value < 1e-6);
    CHECK(r.generations <= 200);
    CHECK(r.history.size() == r.generations + 1);
}

TEST_CASE("two-dimensional Rosenbrock")
{
    auto s = box(2, -2.0, 2.0);
    s.max_generations = 500;
    s.tolerance = 0.0;
    const auto r = differential_evolution(rosenbrock, s);
    CHECK(r.best_value < 1e-4);
    CHECK(std::abs(r.best[0] - 1.0) < 1e-2);
}

TEST_CASE("constant objective")
{
    auto s = box(3, -1.0, 2.0);
    const auto r = differential_evolution([](const std::vector<double>&) { return 4.25; }, s);
    CHECK(r.best_value == 4.25);
    CHECK(r.converged);
    for (double v : r.best) {
        CHECK(v >= -1.0);
        CHECK(v <= 2.0);
    }
}

TEST_CASE("evaluations stay in bounds and the best value never increases")
{
    auto s = box(4, -3.0, 1.0);
    s.bounds[2] = {10.0, 10.5};
    s.max_generations = 60;
    s.execution = Execution::serial;
    std::atomic<int> outside{0};
    const auto r = differential_evolution(
        [&](const std::vector<double>& x) {
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] < s.bounds[i].first || x[i] > s.bounds[i].second)
                    ++outside;
            return std::abs(x[0] - 0.7) + std::abs(x[2] - 10.1) + x[1] * x[1] + std::sin(5 * x[3]);
        },
        s);
    CHECK(outside.load() == 0);
    for (std::size_t g = 1; g < r.history.size(); ++g)
        CHECK(r.history[g] <= r.history[g - 1]);
    CHECK(r.evaluations == 60 * (r.generations + 1));
}

TEST_CASE("seed determinism across execution modes")
{
    auto s = box(3, -5.0, 5.0);
    s.max_generations = 40;
    s.seed = 99;
    s.execution = Execution::serial;
    const auto a = differential_evolution(sphere, s);
    s.execution = Execution::parallel;
    const auto b = differential_evolution(sphere, s);
    CHECK(a.history == b.history);
    CHECK(a.best == b.best);
    s.seed = 100;
    const auto c = differential_evolution(sphere, s);
    CHECK(a.history != c.history);
}

TEST_CASE("non-finite objective values lose selection")
{
    auto s = box(2, -1.0, 1.0);
    s.max_generations = 50;
    const auto r = differential_evolution(
        [](const std::vector<double>& x) { return x[0] > 0.0 ? std::nan("") : sphere(x); }, s);
    CHECK(std::isfinite(r.best_value));
    CHECK(r.best[0] <= 0.0);
}

TEST_CASE("invalid settings")
{
    auto s = box(2, -1.0, 1.0);
    CHECK(validate(s).empty());
    s.f = 0.0;
    CHECK_FALSE(validate(s).empty());
    CHECK_THROWS_AS(differential_evolution(sphere, s), std::invalid_argument);
    s = box(2, -1.0, 1.0);
    s.f = 2.5;
    CHECK_FALSE(validate(s).empty());
    s = box(2, -1.0, 1.0);
    s.cr = 1.5;
    CHECK_FALSE(validate(s).empty());
    s = box(2, -1.0, 1.0);
    s.population = 3;
    CHECK_FALSE(validate(s).empty());
    s = box(2, 1.0, 1.0);
    CHECK_FALSE(validate(s).empty());
    s.bounds.clear();
    CHECK_FALSE(validate(s).empty());
}
