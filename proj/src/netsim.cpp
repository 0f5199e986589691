#include "bitsurf/netsim.hpp"

#include "network_app.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace bitsurf::netsim {

// ---------------------------------------------------------------------------
// Shared application layer

std::shared_ptr<const Codebook> make_codebook(const SimConfig& config, const Topology& topology) {
    auto cb = std::make_shared<const Codebook>(Codebook::enumerate(Word::parse(config.prefix), config.word_size));
    // Largest packet index the run can produce: any origin with any
    // recipient outside the first column.
    std::uint64_t max_index = 0;
    for (NodeId origin : topology.sources()) {
        for (NodeId r = 0; r < topology.size(); ++r) {
            if (topology.position(r).col == 1) continue;
            max_index = std::max(max_index, AppPacket{origin, r, 1}.pack(topology.id_bits()));
        }
    }
    if (max_index >= cb->size()) {
        throw std::invalid_argument("codebook (prefix " + config.prefix + ", " + std::to_string(config.word_size) +
                                    " bits, " + std::to_string(cb->size()) + " words) cannot carry packet index " +
                                    std::to_string(max_index));
    }
    return cb;
}

std::uint64_t warmup_ticks(const SimConfig& config) {
    return config.buffer_bits + (config.buffer_bits - config.word_size);
}

NetworkApp::NetworkApp(const SimConfig& config, const Topology& topology, std::shared_ptr<const Codebook> codebook)
    : config_(config), topology_(topology), codebook_(std::move(codebook)), rng_(config.seed) {
    metrics_.pulses_per_node.assign(topology.size(), 0);
    ledgers_.assign(topology.size(), energy::EnergyLedger::start(config.energy_params(), config.initial_energy_joules));
    last_pulse_tick_.assign(topology.size(), 0);
}

std::uint64_t NetworkApp::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::logic_error("uniform_below(0)");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng_();
        if (r >= threshold) return r % bound;
    }
}

std::vector<std::uint64_t> NetworkApp::draw_delays() {
    std::vector<std::uint64_t> delays(topology_.size());
    const std::uint64_t span = config_.buffer_bits - config_.word_size + 1;
    for (auto& d : delays) d = uniform_below(span);
    return delays;
}

Word NetworkApp::word_for(NodeId sender, NodeId recipient, std::uint8_t data) const {
    return codebook_->word_at(AppPacket{sender, recipient, data}.pack(topology_.id_bits()));
}

NodeId NetworkApp::pick_right_neighbor(NodeId node) {
    const auto right = topology_.right_neighbors(node);
    return right[uniform_below(right.size())];
}

void NetworkApp::terminate(Packet& p) {
    p.live = false;
    --live_;
}

void NetworkApp::begin_phase() {
    phase_created_ = 0;
    ++metrics_.phases;
}

std::vector<SendRequest> NetworkApp::create_packets(std::size_t n) {
    std::vector<SendRequest> sends;
    const auto sources = topology_.sources();
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId origin = sources[uniform_below(sources.size())];
        const auto data = static_cast<std::uint8_t>(uniform_below(2));
        const auto id = static_cast<PacketId>(packets_.size());
        ++metrics_.created;
        ++phase_created_;
        ++live_;
        if (topology_.right_neighbors(origin).empty()) {
            packets_.push_back(Packet{origin, origin, origin, data, Word(0, 1), {origin}, true});
            ++metrics_.lost_deadend;
            terminate(packets_.back());
            continue;
        }
        const NodeId recipient = pick_right_neighbor(origin);
        const Word word = word_for(origin, recipient, data);
        packets_.push_back(Packet{origin, origin, recipient, data, word, {origin}, true});
        sends.push_back(SendRequest{origin, id, word});
    }
    return sends;
}

Pulse NetworkApp::pulse_for(PacketId packet) const {
    const Packet& p = packets_.at(packet);
    return Pulse{packet, p.recipient, p.word};
}

std::optional<SendRequest> NetworkApp::on_deliver(NodeId node, const Word& word, const Pulse& pulse) {
    if (word != pulse.word) {
        if (node == pulse.recipient) {
            Packet& p = packets_.at(pulse.packet);
            ++metrics_.lost_misdecode;
            terminate(p);
        }
        if (auto index = codebook_->index_of(word)) {
            const std::uint64_t limit = std::uint64_t{1} << (2 * topology_.id_bits() + 1);
            if (*index < limit && AppPacket::unpack(*index, topology_.id_bits()).recipient == node) {
                ++metrics_.spurious_words;
            }
        }
        return std::nullopt;
    }
    if (node != pulse.recipient) return std::nullopt;

    Packet& p = packets_.at(pulse.packet);
    p.holder = node;
    p.path.push_back(node);
    if (topology_.is_gateway(node)) {
        ++metrics_.delivered;
        metrics_.delivered_paths.push_back(p.path);
        terminate(p);
        return std::nullopt;
    }
    if (topology_.right_neighbors(node).empty()) {
        ++metrics_.lost_deadend;
        terminate(p);
        return std::nullopt;
    }
    p.recipient = pick_right_neighbor(node);
    p.word = word_for(config_.forwarder_as_sender ? node : p.origin, p.recipient, p.data);
    return SendRequest{node, pulse.packet, p.word};
}

void NetworkApp::on_busy(NodeId node, const Pulse& pulse) {
    if (node != pulse.recipient) return;
    ++metrics_.lost_busy;
    terminate(packets_.at(pulse.packet));
}

void NetworkApp::on_rx_miss(NodeId node, const Pulse& pulse) {
    if (node != pulse.recipient) return;
    ++metrics_.lost_rxmiss;
    terminate(packets_.at(pulse.packet));
}

void NetworkApp::on_tx_timeout(PacketId packet, std::uint64_t queued) {
    metrics_.queue_delays.push_back(queued);
    ++metrics_.lost_timeout;
    terminate(packets_.at(packet));
}

void NetworkApp::on_pulse(NodeId node, std::uint64_t tick, std::uint64_t cover, std::uint64_t queued) {
    metrics_.tx_cover_times.push_back(cover);
    metrics_.queue_delays.push_back(queued);
    ++metrics_.pulses_per_node[node];
    auto& ledger = ledgers_[node];
    ledger = energy::ledger_advance(ledger, static_cast<double>(tick - last_pulse_tick_[node]) / config_.rate_bps);
    ledger = energy::ledger_pulse(ledger);
    last_pulse_tick_[node] = tick;
}

Metrics NetworkApp::finish(std::uint64_t now) {
    Metrics out = metrics_;
    out.ticks_elapsed = now;
    out.energy.clear();
    for (std::size_t n = 0; n < ledgers_.size(); ++n) {
        const auto settled =
            energy::ledger_advance(ledgers_[n], static_cast<double>(now - last_pulse_tick_[n]) / config_.rate_bps);
        EnergySummary s;
        s.pulses = settled.pulses_emitted;
        s.elapsed_seconds = settled.elapsed;
        s.final_budget = settled.budget;
        s.min_budget = settled.min_budget;
        s.mean_pulse_interval = s.pulses == 0 ? 0.0 : settled.elapsed / static_cast<double>(s.pulses);
        out.energy.push_back(s);
    }
    return out;
}

void merge_metrics(Metrics& into, const Metrics& other) {
    into.created += other.created;
    into.delivered += other.delivered;
    into.lost_busy += other.lost_busy;
    into.lost_timeout += other.lost_timeout;
    into.lost_rxmiss += other.lost_rxmiss;
    into.lost_misdecode += other.lost_misdecode;
    into.lost_deadend += other.lost_deadend;
    into.spurious_words += other.spurious_words;
    auto append = [](auto& dst, const auto& src) { dst.insert(dst.end(), src.begin(), src.end()); };
    append(into.tx_cover_times, other.tx_cover_times);
    append(into.queue_delays, other.queue_delays);
    append(into.rx_busy_times, other.rx_busy_times);
    append(into.delivered_paths, other.delivered_paths);
    append(into.energy, other.energy);
    if (into.pulses_per_node.size() < other.pulses_per_node.size()) {
        into.pulses_per_node.resize(other.pulses_per_node.size(), 0);
    }
    for (std::size_t i = 0; i < other.pulses_per_node.size(); ++i) into.pulses_per_node[i] += other.pulses_per_node[i];
    into.phases += other.phases;
    into.ticks_elapsed += other.ticks_elapsed;
}

// ---------------------------------------------------------------------------
// Event engine

namespace {

enum class EventKind : int { RxDone = 0, TxDone = 1 };

struct Event {
    std::uint64_t tick;
    EventKind kind;
    NodeId node;
    friend bool operator>(const Event& a, const Event& b) {
        return std::tie(a.tick, a.kind, a.node) > std::tie(b.tick, b.kind, b.node);
    }
};

struct ActiveTx {
    PacketId packet;
    std::uint64_t start;
    std::uint64_t queued;
    std::uint64_t due;
    bool times_out;
};

struct QueuedTx {
    PacketId packet;
    Word word;
    std::uint64_t enqueued;
};

struct RxScan {
    Pulse pulse;
    std::optional<Word> word; // nullopt: the scan ends in a miss
    std::uint64_t busy;
};

} // namespace

struct Engine::Impl {
    SimConfig config;
    Topology topology;
    std::shared_ptr<const Codebook> codebook;
    SymbolSource source;
    NetworkApp app;
    std::vector<std::uint64_t> delays;

    std::vector<std::optional<ActiveTx>> tx_current;
    std::vector<std::deque<QueuedTx>> tx_queue;
    std::vector<std::optional<RxScan>> rx;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;

    std::uint64_t now = 0;
    bool started = false;

    explicit Impl(const SimConfig& cfg)
        : config((cfg.validate(), cfg)),
          topology(Topology::build(config.rows, config.cols, config.pulse_range, config.id_bits)),
          codebook(make_codebook(config, topology)),
          source(config.seed, config.rate_bps),
          app(config, topology, codebook) {
        delays = app.draw_delays();
        tx_current.resize(topology.size());
        tx_queue.resize(topology.size());
        rx.resize(topology.size());
    }

    void start_tx(NodeId node, PacketId packet, const Word& word, std::uint64_t tick, std::uint64_t queued) {
        const std::uint64_t d = delays[node];
        const std::uint64_t n = word.length();
        // Only bits arriving after `tick` count: the first fresh index is tick-d+1.
        const std::uint64_t earliest_end = tick - d + n;
        const std::uint64_t latest_end = tick - d + config.timeout_bits;
        ActiveTx tx{packet, tick, queued, tick + config.timeout_bits, true};
        if (earliest_end <= latest_end) {
            if (auto end = source.find_word_end(word, earliest_end, latest_end)) {
                tx.due = *end + d;
                tx.times_out = false;
            }
        }
        tx_current[node] = tx;
        events.push(Event{tx.due, EventKind::TxDone, node});
    }

    void submit(const SendRequest& req, std::uint64_t tick) {
        if (tx_current[req.node]) {
            tx_queue[req.node].push_back(QueuedTx{req.packet, req.word, tick});
        } else {
            start_tx(req.node, req.packet, req.word, tick, 0);
        }
    }

    void promote(NodeId node, std::uint64_t tick) {
        tx_current[node].reset();
        if (tx_queue[node].empty()) return;
        const QueuedTx next = tx_queue[node].front();
        tx_queue[node].pop_front();
        start_tx(node, next.packet, next.word, tick, tick - next.enqueued);
    }

    void deliver(NodeId node, const Word& word, const Pulse& pulse, std::uint64_t busy, std::uint64_t tick) {
        app.on_rx_done(busy);
        if (auto send = app.on_deliver(node, word, pulse)) submit(*send, tick);
    }

    void receive(NodeId node, const Pulse& pulse, std::uint64_t sender_word_end, std::uint64_t tick) {
        const std::uint64_t n = config.word_size;
        const std::uint64_t head = tick - delays[node];
        const std::uint64_t oldest = head + 1 - config.buffer_bits;
        std::uint64_t start = oldest;
        if (config.rx_policy == adapter::RxPolicy::Aligned) {
            start = std::max(oldest, sender_word_end + 1 - n);
        }
        const std::uint64_t horizon = config.buffer_bits + n;
        std::vector<std::uint8_t> bits;
        bits.reserve(horizon + config.buffer_bits);
        source.copy_bits(start, head + horizon, bits);

        if (auto hit = scan_first(bits, *codebook)) {
            const std::uint64_t end = start + hit->start_index + n - 1;
            const std::uint64_t busy = end > head ? end - head : 0;
            if (busy == 0) {
                deliver(node, hit->word, pulse, 0, tick);
            } else {
                rx[node] = RxScan{pulse, hit->word, busy};
                events.push(Event{tick + busy, EventKind::RxDone, node});
            }
        } else {
            rx[node] = RxScan{pulse, std::nullopt, horizon};
            events.push(Event{tick + horizon, EventKind::RxDone, node});
        }
    }

    void process(const Event& ev) {
        now = ev.tick;
        if (ev.kind == EventKind::RxDone) {
            RxScan scan = *rx[ev.node];
            rx[ev.node].reset();
            if (scan.word) {
                deliver(ev.node, *scan.word, scan.pulse, scan.busy, now);
            } else {
                app.on_rx_done(scan.busy);
                app.on_rx_miss(ev.node, scan.pulse);
            }
            return;
        }

        const ActiveTx tx = *tx_current[ev.node];
        if (tx.times_out) {
            app.on_tx_timeout(tx.packet, tx.queued);
            promote(ev.node, now);
            return;
        }
        const Pulse pulse = app.pulse_for(tx.packet);
        app.on_pulse(ev.node, now, now - tx.start, tx.queued);
        promote(ev.node, now);
        const std::uint64_t word_end = now - delays[ev.node];
        for (NodeId nb : topology.neighbors(ev.node)) {
            if (rx[nb]) {
                app.on_busy(nb, pulse);
            } else {
                receive(nb, pulse, word_end, now);
            }
        }
    }

    void drain_until(std::uint64_t tick) {
        while (!events.empty() && events.top().tick <= tick) {
            const Event ev = events.top();
            events.pop();
            process(ev);
        }
        now = tick;
    }

    PhaseResult run_phase(std::size_t n_packets) {
        const std::uint64_t start = started ? now + 1 : warmup_ticks(config);
        started = true;
        drain_until(start);

        const Metrics before = app.metrics();
        app.begin_phase();
        for (const auto& req : app.create_packets(n_packets)) submit(req, now);

        while (app.live_packets() > 0) {
            if (events.empty()) throw std::logic_error("live packets remain but no event is pending");
            const Event ev = events.top();
            if (ev.tick - start > config.phase_tick_limit) {
                throw std::runtime_error("phase " + std::to_string(app.metrics().phases) + " exceeded " +
                                         std::to_string(config.phase_tick_limit) + " ticks with " +
                                         std::to_string(app.live_packets()) + " packets still live");
            }
            events.pop();
            process(ev);
        }

        const Metrics& after = app.metrics();
        PhaseResult result;
        result.created = after.created - before.created;
        result.delivered = after.delivered - before.delivered;
        result.lost = after.lost() - before.lost();
        result.start_tick = start;
        result.end_tick = now;
        return result;
    }
};

Engine::Engine(const SimConfig& config) : impl_(std::make_unique<Impl>(config)) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

PhaseResult Engine::run_phase(std::size_t n_packets) { return impl_->run_phase(n_packets); }
Metrics Engine::finish() { return impl_->app.finish(impl_->now); }
std::uint64_t Engine::now() const noexcept { return impl_->now; }
const Topology& Engine::topology() const noexcept { return impl_->topology; }
const Codebook& Engine::codebook() const noexcept { return *impl_->codebook; }
std::span<const std::uint64_t> Engine::node_delays() const noexcept { return impl_->delays; }

Metrics run_simulation(const SimConfig& config) {
    Engine engine(config);
    for (std::size_t p = 0; p < config.phases; ++p) engine.run_phase(config.congestion);
    return engine.finish();
}

} // namespace bitsurf::netsim
