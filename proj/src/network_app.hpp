#pragma once

// Application layer and bookkeeping shared by the event engine and the
// symbol-by-symbol reference engine. Both engines must call into it in the
// same order for the same run; that is what makes them comparable.

#include "bitsurf/netsim.hpp"

#include <optional>
#include <random>

namespace bitsurf::netsim {

using PacketId = std::uint32_t;

/// What a pulse stands for, captured when it is emitted.
struct Pulse {
    PacketId packet;
    NodeId recipient;
    Word word;
};

struct SendRequest {
    NodeId node;
    PacketId packet;
    Word word;
};

class NetworkApp {
public:
    NetworkApp(const SimConfig& config, const Topology& topology, std::shared_ptr<const Codebook> codebook);

    /// One constant delay per node, uniform in [0, buffer - word size].
    std::vector<std::uint64_t> draw_delays();

    std::vector<SendRequest> create_packets(std::size_t n);

    /// `node` decoded `word` while handling `pulse`.
    std::optional<SendRequest> on_deliver(NodeId node, const Word& word, const Pulse& pulse);
    void on_busy(NodeId node, const Pulse& pulse);
    void on_rx_miss(NodeId node, const Pulse& pulse);
    void on_tx_timeout(PacketId packet, std::uint64_t queued);
    void on_pulse(NodeId node, std::uint64_t tick, std::uint64_t cover, std::uint64_t queued);
    void on_rx_done(std::uint64_t busy) { metrics_.rx_busy_times.push_back(busy); }

    Pulse pulse_for(PacketId packet) const;
    std::size_t live_packets() const noexcept { return live_; }
    std::uint64_t phase_created() const noexcept { return phase_created_; }

    void begin_phase();
    Metrics finish(std::uint64_t now);
    const Metrics& metrics() const noexcept { return metrics_; }

private:
    struct Packet {
        NodeId origin;
        NodeId holder;
        NodeId recipient;
        std::uint8_t data;
        Word word;
        std::vector<NodeId> path;
        bool live;
    };

    std::uint64_t uniform_below(std::uint64_t bound);
    NodeId pick_right_neighbor(NodeId node);
    Word word_for(NodeId sender, NodeId recipient, std::uint8_t data) const;
    void terminate(Packet& p);

    const SimConfig& config_;
    const Topology& topology_;
    std::shared_ptr<const Codebook> codebook_;
    std::mt19937_64 rng_;
    std::vector<Packet> packets_;
    std::size_t live_ = 0;
    std::uint64_t phase_created_ = 0;
    Metrics metrics_;
    std::vector<energy::EnergyLedger> ledgers_;
    std::vector<std::uint64_t> last_pulse_tick_;
};

/// Codebook selected by the config; throws if it cannot carry every packet
/// the topology can produce.
std::shared_ptr<const Codebook> make_codebook(const SimConfig& config, const Topology& topology);

/// First tick at which every node's buffer is full.
std::uint64_t warmup_ticks(const SimConfig& config);

} // namespace bitsurf::netsim
