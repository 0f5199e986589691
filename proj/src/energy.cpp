#include "bitsurf/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bitsurf::energy {

namespace {
// Ratios that are powers of two up to floating-point noise map to that power.
constexpr double kRelTolerance = 1e-12;
} // namespace

void EnergyParams::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon_joules must be > 0");
    if (!(harvest > 0.0)) throw std::invalid_argument("harvest_watts must be > 0");
    if (!(rate > 0.0)) throw std::invalid_argument("rate_bps must be > 0");
}

std::size_t min_word_size(const EnergyParams& p) {
    p.validate();
    const double ratio = p.epsilon * p.rate / p.harvest;
    if (ratio < 1.0 - kRelTolerance) {
        throw std::invalid_argument("epsilon*rate/harvest = " + std::to_string(ratio) +
                                    " < 1: any word size is already perpetual");
    }
    const double target = ratio * (1.0 - kRelTolerance);
    int n = std::max(0, static_cast<int>(std::ceil(std::log2(ratio))));
    while (n > 0 && std::ldexp(1.0, n - 1) >= target) --n;
    while (std::ldexp(1.0, n) < target) ++n;
    return static_cast<std::size_t>(n);
}

double perpetual_cover_time(const EnergyParams& p) {
    return std::ldexp(1.0, static_cast<int>(min_word_size(p))) / p.rate;
}

EnergyLedger EnergyLedger::start(const EnergyParams& p, double initial_energy) {
    EnergyLedger ledger;
    ledger.epsilon = p.epsilon;
    ledger.harvest = p.harvest;
    ledger.initial_energy = initial_energy;
    ledger.budget = initial_energy;
    ledger.min_budget = initial_energy;
    return ledger;
}

EnergyLedger ledger_advance(EnergyLedger ledger, double dt) {
    if (dt < 0.0) throw std::invalid_argument("ledger_advance: negative time step");
    ledger.budget += ledger.harvest * dt;
    ledger.elapsed += dt;
    return ledger;
}

EnergyLedger ledger_pulse(EnergyLedger ledger) {
    ledger.budget -= ledger.epsilon;
    ++ledger.pulses_emitted;
    ledger.min_budget = std::min(ledger.min_budget, ledger.budget);
    return ledger;
}

} // namespace bitsurf::energy
