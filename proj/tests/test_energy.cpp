#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bitsurf/energy.hpp"

#include <cmath>
#include <random>

using namespace bitsurf::energy;

TEST_CASE("minimal perpetual word sizes at 1 pJ and 16 pJ/s") {
    CHECK(min_word_size({1e-12, 16e-12, 1e3}) == 6);
    CHECK(min_word_size({1e-12, 16e-12, 1e6}) == 16);
    CHECK(min_word_size({1e-12, 16e-12, 1e9}) == 26);
    CHECK(min_word_size({1e-12, 16e-12, 1e12}) == 36);
}

TEST_CASE("perpetual cover time examples") {
    CHECK(perpetual_cover_time({1e-12, 16e-12, 1e6}) == doctest::Approx(0.065536).epsilon(1e-12));
    CHECK(perpetual_cover_time({1e-12, 16e-12, 1e3}) == doctest::Approx(0.064).epsilon(1e-12));
    // epsilon*r/h = 2^10 exactly
    CHECK(perpetual_cover_time({1.0, 1.0, 1024.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_word_size({1.0, 1.0, 1024.0}) == 10);
}

TEST_CASE("degenerate and invalid parameters are rejected") {
    CHECK_THROWS_AS(min_word_size({1e-12, 16e-12, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(min_word_size({0.0, 16e-12, 1e6}), std::invalid_argument);
    CHECK_THROWS_AS(min_word_size({1e-12, -1.0, 1e6}), std::invalid_argument);
    CHECK_THROWS_AS(perpetual_cover_time({1e-12, 16e-12, 0.0}), std::invalid_argument);
    CHECK(min_word_size({1.0, 1.0, 1.0}) == 0);
}

TEST_CASE("word size is monotone in each parameter") {
    const std::vector<double> eps = {1e-13, 1e-12, 5e-12, 1e-11};
    const std::vector<double> harvest = {1e-12, 8e-12, 16e-12, 1e-10};
    const std::vector<double> rates = {1e3, 1e4, 1e6, 3e7, 1e9, 1e12};
    for (double h : harvest) {
        for (double e : eps) {
            std::size_t prev = 0;
            for (double r : rates) {
                if (e * r / h < 1) continue;
                const std::size_t n = min_word_size({e, h, r});
                REQUIRE(n >= prev);
                prev = n;
            }
        }
    }
    for (double r : rates) {
        for (double e : eps) {
            std::size_t prev = 1000;
            for (double h : harvest) {
                if (e * r / h < 1) continue;
                const std::size_t n = min_word_size({e, h, r});
                REQUIRE(n <= prev);
                prev = n;
            }
        }
    }
}

TEST_CASE("perpetual cover time lies in [eps/h, 2 eps/h)") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> exponent(-3.0, 9.0);
    for (int i = 0; i < 10000; ++i) {
        const double e = 1e-12 * std::pow(10.0, exponent(rng) / 3);
        const double h = 1e-12 * std::pow(10.0, exponent(rng) / 3);
        const double r = std::pow(10.0, 3 + exponent(rng));
        if (e * r / h < 1) continue;
        const double ct = perpetual_cover_time({e, h, r});
        REQUIRE(ct >= e / h * (1 - 1e-9));
        REQUIRE(ct < 2 * e / h);
    }
}

TEST_CASE("ledger accounting") {
    const EnergyParams p{1e-12, 16e-12, 1e6};
    auto l = EnergyLedger::start(p);
    CHECK(l.budget == 0);
    CHECK(l.min_budget == 0);

    double prev = l.budget;
    for (int i = 0; i < 10; ++i) {
        l = ledger_advance(l, 0.5);
        CHECK(l.budget > prev);
        prev = l.budget;
    }
    CHECK(l.budget == doctest::Approx(16e-12 * 5.0));

    auto one = ledger_advance(EnergyLedger::start(p), 0.03);
    one = ledger_pulse(one);
    CHECK(one.budget == doctest::Approx(16e-12 * 0.03 - 1e-12));
    CHECK(one.min_budget == doctest::Approx(16e-12 * 0.03 - 1e-12));
    CHECK(one.min_budget < 0);
    CHECK(one.pulses_emitted == 1);

    const auto funded = ledger_pulse(EnergyLedger::start(p, 5e-12));
    CHECK(funded.budget == doctest::Approx(4e-12));
    CHECK(funded.min_budget <= funded.initial_energy);
    CHECK_THROWS(ledger_advance(l, -1.0));
}

TEST_CASE("pulsing at the perpetual interval keeps the budget from drifting down") {
    const EnergyParams p{1e-12, 16e-12, 1e6};
    const double interval = perpetual_cover_time(p);
    auto l = EnergyLedger::start(p);
    for (int i = 0; i < 1000; ++i) {
        l = ledger_pulse(ledger_advance(l, interval));
    }
    CHECK(l.budget >= 0);
    CHECK(l.min_budget >= -1e-12);
}
