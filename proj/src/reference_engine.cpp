#include "bitsurf/netsim.hpp"

#include "network_app.hpp"

#include <deque>
#include <optional>
#include <stdexcept>
#include <string>

namespace bitsurf::netsim {

namespace {

class ReferenceEngine {
public:
    explicit ReferenceEngine(const SimConfig& config)
        : config_((config.validate(), config)),
          topology_(Topology::build(config_.rows, config_.cols, config_.pulse_range, config_.id_bits)),
          codebook_(make_codebook(config_, topology_)),
          source_(config_.seed, config_.rate_bps),
          app_(config_, topology_, codebook_) {
        delays_ = app_.draw_delays();
        for (std::size_t n = 0; n < topology_.size(); ++n) {
            adapter::AdapterConfig ac;
            ac.codebook = codebook_;
            ac.buffer_capacity = config_.buffer_bits;
            ac.timeout_symbols = config_.timeout_bits;
            ac.node_delay = delays_[n];
            ac.rx_policy = config_.rx_policy;
            adapters_.emplace_back(ac);
        }
        tx_packets_.resize(topology_.size());
        rx_pulses_.resize(topology_.size());
    }

    void run_phase(std::size_t n_packets) {
        const std::uint64_t start = started_ ? now_ + 1 : warmup_ticks(config_);
        started_ = true;
        while (next_tick_ <= start) step();

        app_.begin_phase();
        for (const auto& req : app_.create_packets(n_packets)) submit(req);

        while (app_.live_packets() > 0) {
            if (next_tick_ - start > config_.phase_tick_limit) {
                throw std::runtime_error("reference phase exceeded " + std::to_string(config_.phase_tick_limit) +
                                         " ticks");
            }
            step();
        }
    }

    Metrics finish() { return app_.finish(now_); }

private:
    void submit(const SendRequest& req) {
        adapters_[req.node].send_data(req.word);
        tx_packets_[req.node].push_back(req.packet);
    }

    void deliver(NodeId node, const Word& word, const Pulse& pulse, std::uint64_t busy) {
        app_.on_rx_done(busy);
        if (auto send = app_.on_deliver(node, word, pulse)) submit(*send);
    }

    void step() {
        const std::uint64_t t = next_tick_++;
        now_ = t;
        const std::size_t n = topology_.size();
        std::vector<std::vector<adapter::AdapterEffect>> effects(n);
        for (std::size_t node = 0; node < n; ++node) {
            if (t < delays_[node]) continue;
            effects[node] = adapters_[node].on_symbol(static_cast<std::uint8_t>(source_.bit(t - delays_[node])));
        }

        for (std::size_t node = 0; node < n; ++node) {
            for (const auto& e : effects[node]) {
                if (const auto* d = std::get_if<adapter::DeliverWord>(&e)) {
                    deliver(static_cast<NodeId>(node), d->word, *rx_pulses_[node], d->busy_symbols);
                } else if (const auto* m = std::get_if<adapter::RxMiss>(&e)) {
                    app_.on_rx_done(m->busy_symbols);
                    app_.on_rx_miss(static_cast<NodeId>(node), *rx_pulses_[node]);
                }
            }
        }

        for (std::size_t node = 0; node < n; ++node) {
            for (const auto& e : effects[node]) {
                if (const auto* p = std::get_if<adapter::EmitPulse>(&e)) {
                    const PacketId packet = tx_packets_[node].front();
                    tx_packets_[node].pop_front();
                    const Pulse pulse = app_.pulse_for(packet);
                    app_.on_pulse(static_cast<NodeId>(node), t, p->symbols_waited, p->queued_symbols);
                    broadcast(static_cast<NodeId>(node), pulse);
                } else if (const auto* o = std::get_if<adapter::TxTimeout>(&e)) {
                    const PacketId packet = tx_packets_[node].front();
                    tx_packets_[node].pop_front();
                    app_.on_tx_timeout(packet, o->queued_symbols);
                }
            }
        }
    }

    void broadcast(NodeId sender, const Pulse& pulse) {
        for (NodeId nb : topology_.neighbors(sender)) {
            auto& a = adapters_[nb];
            if (a.rx_scanning()) {
                a.on_pulse();
                app_.on_busy(nb, pulse);
                continue;
            }
            const auto lead = static_cast<std::int64_t>(delays_[nb]) - static_cast<std::int64_t>(delays_[sender]);
            const auto effects = a.on_pulse(lead);
            if (effects.empty()) {
                rx_pulses_[nb] = pulse;
                continue;
            }
            const auto& d = std::get<adapter::DeliverWord>(effects.front());
            deliver(nb, d.word, pulse, d.busy_symbols);
        }
    }

    SimConfig config_;
    Topology topology_;
    std::shared_ptr<const Codebook> codebook_;
    SymbolSource source_;
    NetworkApp app_;
    std::vector<std::uint64_t> delays_;
    std::vector<adapter::Adapter> adapters_;
    std::vector<std::deque<PacketId>> tx_packets_;
    std::vector<std::optional<Pulse>> rx_pulses_;
    std::uint64_t next_tick_ = 0;
    std::uint64_t now_ = 0;
    bool started_ = false;
};

} // namespace

Metrics run_reference_simulation(const SimConfig& config) {
    ReferenceEngine engine(config);
    for (std::size_t p = 0; p < config.phases; ++p) engine.run_phase(config.congestion);
    return engine.finish();
}

} // namespace bitsurf::netsim
