#pragma once

#include <cstddef>
#include <cstdint>

namespace bitsurf::energy {

/// Energy model of a pulse-emitting node. All fields strictly positive.
struct EnergyParams {
    double epsilon = 1e-12;  ///< joules per pulse
    double harvest = 16e-12; ///< joules per second
    double rate = 1e6;       ///< source bits per second

    void validate() const;
};

/// Smallest word size whose mean pulse interval, 2^|w| / r, lets harvesting
/// keep up with emission: ceil(log2(epsilon * r / h)). Rejects ratios < 1.
std::size_t min_word_size(const EnergyParams& p);

/// Average cover time, in seconds, at the minimal perpetual word size.
/// Always within [epsilon/h, 2*epsilon/h).
double perpetual_cover_time(const EnergyParams& p);

/// Running energy budget of one node: initial + h*t - epsilon*pulses.
/// Receiving and processing cost nothing; only pulse emission drains.
struct EnergyLedger {
    double epsilon = 1e-12;
    double harvest = 16e-12;
    double initial_energy = 0.0;
    double budget = 0.0;
    double min_budget = 0.0;
    double elapsed = 0.0;
    std::uint64_t pulses_emitted = 0;

    static EnergyLedger start(const EnergyParams& p, double initial_energy = 0.0);

    friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;
};

/// Harvest for `dt` seconds (dt >= 0).
EnergyLedger ledger_advance(EnergyLedger ledger, double dt);
/// Spend one pulse. Negative budgets are recorded, not rejected.
EnergyLedger ledger_pulse(EnergyLedger ledger);

} // namespace bitsurf::energy
