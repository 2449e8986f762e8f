#include "neuristor/sources.hpp"

#include <doctest.h>

using namespace neuristor;
using doctest::Approx;

TEST_CASE("waveform samples")
{
    CHECK(sample(Dc{12.5}, 0.0) == 12.5);
    CHECK(sample(Dc{12.5}, 1.0) == 12.5);

    const Waveform pulse = Pulse{1.3, 0.0, 200e-9, 0.0};
    CHECK(sample(pulse, 100e-9) == 1.3);
    CHECK(sample(pulse, 300e-9) == 0.0);

    const Waveform train = PulseTrain{9.1, 0.0, 1e-6, 0.5, 0.0, std::nullopt};
    CHECK(sample(train, 0.25e-6) == 9.1);
    CHECK(sample(train, 0.75e-6) == 0.0);
    CHECK(sample(train, 57.25e-6) == 9.1);

    const Waveform finite = PulseTrain{5.0, 1.0, 1e-6, 0.5, 2e-6, 3};
    CHECK(sample(finite, 1e-6) == 1.0);
    CHECK(sample(finite, 2.1e-6) == 5.0);
    CHECK(sample(finite, 4.1e-6) == 5.0);
    CHECK(sample(finite, 5.1e-6) == 1.0);
}

TEST_CASE("pulse-train mean over whole periods")
{
    for (double duty : {0.2, 0.5, 0.8}) {
        const Waveform w = PulseTrain{9.0, 1.0, 1e-6, duty, 0.0, std::nullopt};
        const int n = 4000;
        const int periods = 5;
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += sample(w, (i + 0.5) * periods * 1e-6 / n);
        CHECK(sum / n == Approx(1.0 + duty * 8.0).epsilon(1e-9));
    }
}

TEST_CASE("waveform validation")
{
    CHECK(validate(Dc{1.0}).empty());
    CHECK(validate(Pulse{1.0, 0.0, 1e-6, 0.0}).empty());
    CHECK_FALSE(validate(Pulse{1.0, 0.0, 0.0, 0.0}).empty());

    const auto bad_duty = validate(PulseTrain{1.0, 0.0, 1e-6, 1.2, 0.0, std::nullopt});
    REQUIRE(bad_duty.size() == 1);
    CHECK(bad_duty.front().first == "duty");
    CHECK_FALSE(validate(PulseTrain{1.0, 0.0, 0.0, 0.5, 0.0, std::nullopt}).empty());
    CHECK_FALSE(validate(PulseTrain{1.0, 0.0, 1e-6, 0.0, 0.0, std::nullopt}).empty());
}
