#pragma once

#include "bitsurf/adapter.hpp"
#include "bitsurf/codebook.hpp"
#include "bitsurf/energy.hpp"
#include "bitsurf/symbol_source.hpp"
#include "bitsurf/topology.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace bitsurf::netsim {

/// Run configuration. Defaults reproduce the 32-node evaluation network:
/// 4x8 grid, sqrt(2) pulse range, prefix 1000 with 16-bit words, 30-bit
/// buffers, 10^6-bit timeouts, 1 Mbps source, 100 phases.
struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t congestion = 1;
    std::size_t phases = 100;
    double rate_bps = 1e6;

    std::size_t rows = 4;
    std::size_t cols = 8;
    double pulse_range = kDefaultPulseRange;
    std::size_t id_bits = 5;

    std::string prefix = "1000";
    std::size_t word_size = 16;
    std::size_t buffer_bits = 30;
    std::uint64_t timeout_bits = 1'000'000;
    adapter::RxPolicy rx_policy = adapter::RxPolicy::Aligned;
    /// Forwarders write their own id into the sender field instead of
    /// keeping the packet's origin.
    bool forwarder_as_sender = true;

    double epsilon_joules = 1e-12;
    double harvest_watts = 16e-12;
    double initial_energy_joules = 0.0;

    /// Deadlock guard: a phase longer than this many ticks aborts the run.
    std::uint64_t phase_tick_limit = 100'000'000;

    /// Throws std::invalid_argument naming the offending key.
    void validate() const;

    energy::EnergyParams energy_params() const { return {epsilon_joules, harvest_watts, rate_bps}; }

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Reads a JSON config; absent keys keep their defaults, unknown keys and
/// ill-typed values are rejected with the key name.
SimConfig parse_sim_config(const std::string& json_text);
SimConfig load_sim_config(const std::filesystem::path& path);
std::string sim_config_to_json(const SimConfig& config);

std::string to_string(adapter::RxPolicy policy);
adapter::RxPolicy parse_rx_policy(const std::string& text);

struct EnergySummary {
    std::uint64_t pulses = 0;
    double elapsed_seconds = 0;
    double final_budget = 0;
    double min_budget = 0;
    /// elapsed / pulses; 0 without pulses.
    double mean_pulse_interval = 0;
    friend bool operator==(const EnergySummary&, const EnergySummary&) = default;
};

/// Outcome counts and latency samples of a run (or of several pooled runs).
/// Every created packet ends in exactly one terminal category.
struct Metrics {
    std::uint64_t created = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost_busy = 0;      ///< pulse ignored by a busy intended recipient
    std::uint64_t lost_timeout = 0;   ///< Tx wait hit the timeout
    std::uint64_t lost_rxmiss = 0;    ///< intended recipient found no word in time
    std::uint64_t lost_misdecode = 0; ///< intended recipient decoded another word
    std::uint64_t lost_deadend = 0;   ///< non-gateway with no right-hand neighbour

    /// Words decoded by a node, addressed to it, that no neighbour pulsed for.
    std::uint64_t spurious_words = 0;

    std::vector<std::uint64_t> tx_cover_times; ///< ticks, one per emitted pulse
    std::vector<std::uint64_t> queue_delays;   ///< ticks, one per finished Tx wait
    std::vector<std::uint64_t> rx_busy_times;  ///< ticks, one per handled pulse

    std::vector<std::uint64_t> pulses_per_node;
    std::vector<EnergySummary> energy;
    /// Node sequence (origin .. gateway) of every delivered packet.
    std::vector<std::vector<NodeId>> delivered_paths;

    std::uint64_t phases = 0;
    std::uint64_t ticks_elapsed = 0;

    std::uint64_t lost() const noexcept {
        return lost_busy + lost_timeout + lost_rxmiss + lost_misdecode + lost_deadend;
    }
    bool conserved() const noexcept { return created == delivered + lost(); }
    double delivery_rate() const noexcept {
        return created == 0 ? 1.0 : static_cast<double>(delivered) / static_cast<double>(created);
    }

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Appends `other`'s counts and samples to `into` (used to pool seeds).
void merge_metrics(Metrics& into, const Metrics& other);

struct PhaseResult {
    std::uint64_t created = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost = 0;
    std::uint64_t start_tick = 0;
    std::uint64_t end_tick = 0;
};

class NetworkApp;

/// Event-driven simulator. Time is an integer symbol tick (one source bit).
/// Node buffers are delayed windows onto one shared counter-based stream, so
/// a Tx wait jumps straight to the tick at which its word completes.
class Engine {
public:
    explicit Engine(const SimConfig& config);
    ~Engine();
    Engine(Engine&&) noexcept;
    Engine& operator=(Engine&&) noexcept;

    /// Creates `n_packets` at tick 0 of a new phase and runs until every
    /// packet is delivered or lost.
    PhaseResult run_phase(std::size_t n_packets);

    /// Settles energy ledgers up to the current tick and returns the metrics.
    Metrics finish();

    std::uint64_t now() const noexcept;
    const Topology& topology() const noexcept;
    const Codebook& codebook() const noexcept;
    std::span<const std::uint64_t> node_delays() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Runs config.phases phases of config.congestion packets each.
Metrics run_simulation(const SimConfig& config);

/// Same model driven symbol by symbol through one adapter::Adapter per node.
/// Orders of magnitude slower; exists to cross-check the event engine.
Metrics run_reference_simulation(const SimConfig& config);

} // namespace bitsurf::netsim
