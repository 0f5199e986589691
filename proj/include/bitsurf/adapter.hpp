#pragma once

#include "bitsurf/codebook.hpp"
#include "bitsurf/word.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace bitsurf::adapter {

/// FIFO window over the most recent `capacity` stream bits seen by a node.
/// Index 0 is the oldest bit, size()-1 the newest.
class StreamBuffer {
public:
    explicit StreamBuffer(std::size_t capacity);

    void push(std::uint8_t bit);

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return size_; }
    bool full() const noexcept { return size_ == capacity_; }
    std::uint8_t at(std::size_t i) const;

    /// Value of the newest `n` bits (n <= size(), n <= 64), oldest first.
    std::uint64_t newest(std::size_t n) const;

    std::vector<std::uint8_t> contents() const;

private:
    std::size_t capacity_;
    std::vector<std::uint8_t> ring_;
    std::size_t head_ = 0; // slot of the oldest bit
    std::size_t size_ = 0;
};

/// How a receiver picks the word to decode when a pulse arrives.
enum class RxPolicy {
    /// Scan the whole buffer from its oldest bit and take the first valid
    /// word (forward detection), continuing over arriving bits if needed.
    FirstValid,
    /// Start the scan where the pulsing neighbour's word begins in this
    /// node's stream, given the link's relative shift. Models a receiver that
    /// is aligned to the sender, so only collisions can lose a word.
    Aligned,
};

struct AdapterConfig {
    std::shared_ptr<const Codebook> codebook;
    std::size_t buffer_capacity = 30;
    std::uint64_t timeout_symbols = 1'000'000;
    /// Constant lag, in symbol ticks, of this node's view of the source.
    std::uint64_t node_delay = 0;
    RxPolicy rx_policy = RxPolicy::Aligned;

    /// Requires a codebook, capacity >= word size, delay <= capacity - word size.
    void validate() const;
    std::size_t word_size() const { return codebook->word_size(); }
    /// Upper bound on one Rx scan, in symbols: capacity + word size.
    std::uint64_t rx_horizon() const { return buffer_capacity + word_size(); }
};

struct EmitPulse {
    Word word;
    std::uint64_t symbols_waited; ///< Tx cover time
    std::uint64_t queued_symbols; ///< time spent in the Tx queue before service
};
struct DeliverWord {
    Word word;
    std::uint64_t busy_symbols;
};
struct TxTimeout {
    Word word;
    std::uint64_t queued_symbols;
};
struct RxMiss {
    std::uint64_t busy_symbols;
};

using AdapterEffect = std::variant<EmitPulse, DeliverWord, TxTimeout, RxMiss>;

struct AdapterCounters {
    std::uint64_t pulses_emitted = 0;
    std::uint64_t tx_timeouts = 0;
    std::uint64_t pulses_received = 0;
    std::uint64_t pulses_ignored = 0;
    std::uint64_t words_delivered = 0;
    std::uint64_t rx_misses = 0;
    friend bool operator==(const AdapterCounters&, const AdapterCounters&) = default;
};

/// The per-node adapter state machine. It reacts to three events: a new
/// symbol, a send request from the application, and an incoming pulse.
/// Effects are returned as values; the adapter never touches other nodes.
class Adapter {
public:
    explicit Adapter(AdapterConfig config);

    /// Stores `bit`, then advances the Rx scan and the Tx wait. Rx effects
    /// precede the Tx effect in the returned list.
    std::vector<AdapterEffect> on_symbol(std::uint8_t bit);

    /// Queues `w` for transmission. Only symbols arriving after the word
    /// becomes current can complete it. Rejects words outside the codebook.
    void send_data(const Word& w);

    /// Handles an incoming pulse. `word_end_lead` is, for the Aligned policy,
    /// the number of symbols until the sender's word end reaches this node's
    /// newest buffer slot (zero or negative when already inside the buffer).
    std::vector<AdapterEffect> on_pulse(std::optional<std::int64_t> word_end_lead = std::nullopt);

    const AdapterConfig& config() const noexcept { return config_; }
    const StreamBuffer& buffer() const noexcept { return buffer_; }
    const AdapterCounters& counters() const noexcept { return counters_; }

    bool tx_busy() const noexcept { return tx_current_.has_value(); }
    std::size_t tx_queue_length() const noexcept { return tx_queue_.size(); }
    std::optional<Word> tx_current_word() const;
    bool rx_scanning() const noexcept { return rx_scan_.has_value(); }

private:
    struct TxWait {
        Word word;
        std::uint64_t waited = 0;
        std::uint64_t queued = 0;
    };
    struct QueuedWord {
        Word word;
        std::uint64_t enqueued_at;
    };
    struct RxScan {
        std::vector<std::uint8_t> pending;
        std::uint64_t skip = 0; // arriving bits to drop before `pending` starts
        std::uint64_t busy = 0;
    };

    void promote_next();
    std::optional<ScanHit> scan_pending(const RxScan& scan) const;

    AdapterConfig config_;
    StreamBuffer buffer_;
    std::uint64_t symbols_seen_ = 0;
    std::optional<TxWait> tx_current_;
    std::deque<QueuedWord> tx_queue_;
    std::optional<RxScan> rx_scan_;
    AdapterCounters counters_;
};

} // namespace bitsurf::adapter
