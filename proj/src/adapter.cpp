#include "bitsurf/adapter.hpp"

#include <stdexcept>
#include <string>

namespace bitsurf::adapter {

StreamBuffer::StreamBuffer(std::size_t capacity) : capacity_(capacity), ring_(capacity, 0) {
    if (capacity == 0) throw std::invalid_argument("stream buffer capacity must be positive");
}

void StreamBuffer::push(std::uint8_t bit) {
    if (size_ < capacity_) {
        ring_[(head_ + size_) % capacity_] = bit;
        ++size_;
    } else {
        ring_[head_] = bit;
        head_ = (head_ + 1) % capacity_;
    }
}

std::uint8_t StreamBuffer::at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("stream buffer index out of range");
    return ring_[(head_ + i) % capacity_];
}

std::uint64_t StreamBuffer::newest(std::size_t n) const {
    if (n > size_ || n > 64) throw std::out_of_range("stream buffer window larger than contents");
    std::uint64_t value = 0;
    for (std::size_t i = size_ - n; i < size_; ++i) value = (value << 1) | at(i);
    return value;
}

std::vector<std::uint8_t> StreamBuffer::contents() const {
    std::vector<std::uint8_t> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(at(i));
    return out;
}

void AdapterConfig::validate() const {
    if (!codebook) throw std::invalid_argument("adapter config needs a codebook");
    if (buffer_capacity < codebook->word_size()) {
        throw std::invalid_argument("buffer_bits (" + std::to_string(buffer_capacity) +
                                    ") must hold at least one word (" + std::to_string(codebook->word_size()) + ")");
    }
    if (node_delay > buffer_capacity - codebook->word_size()) {
        throw std::invalid_argument("node delay " + std::to_string(node_delay) +
                                    " exceeds buffer_bits - word_size");
    }
    if (timeout_symbols == 0) throw std::invalid_argument("timeout_bits must be positive");
}

Adapter::Adapter(AdapterConfig config) : config_(std::move(config)), buffer_(config_.buffer_capacity) {
    config_.validate();
}

std::optional<Word> Adapter::tx_current_word() const {
    if (!tx_current_) return std::nullopt;
    return tx_current_->word;
}

void Adapter::send_data(const Word& w) {
    if (!config_.codebook->contains(w)) {
        throw std::invalid_argument("send_data: word " + w.str() + " is not in the codebook");
    }
    if (!tx_current_) {
        tx_current_ = TxWait{w, 0, 0};
    } else {
        tx_queue_.push_back(QueuedWord{w, symbols_seen_});
    }
}

void Adapter::promote_next() {
    tx_current_.reset();
    if (tx_queue_.empty()) return;
    const QueuedWord next = tx_queue_.front();
    tx_queue_.pop_front();
    tx_current_ = TxWait{next.word, 0, symbols_seen_ - next.enqueued_at};
}

std::optional<ScanHit> Adapter::scan_pending(const RxScan& scan) const {
    return scan_first(scan.pending, *config_.codebook);
}

std::vector<AdapterEffect> Adapter::on_symbol(std::uint8_t bit) {
    std::vector<AdapterEffect> effects;
    buffer_.push(bit);
    ++symbols_seen_;

    if (rx_scan_) {
        RxScan& scan = *rx_scan_;
        ++scan.busy;
        if (scan.skip > 0) {
            --scan.skip;
        } else {
            scan.pending.push_back(bit);
        }
        if (auto hit = scan_pending(scan)) {
            effects.emplace_back(DeliverWord{hit->word, scan.busy});
            ++counters_.words_delivered;
            rx_scan_.reset();
        } else if (scan.busy >= config_.rx_horizon()) {
            effects.emplace_back(RxMiss{scan.busy});
            ++counters_.rx_misses;
            rx_scan_.reset();
        }
    }

    if (tx_current_) {
        TxWait& tx = *tx_current_;
        ++tx.waited;
        const std::size_t n = tx.word.length();
        if (tx.waited >= n && buffer_.size() >= n && buffer_.newest(n) == tx.word.bits()) {
            effects.emplace_back(EmitPulse{tx.word, tx.waited, tx.queued});
            ++counters_.pulses_emitted;
            promote_next();
        } else if (tx.waited >= config_.timeout_symbols) {
            effects.emplace_back(TxTimeout{tx.word, tx.queued});
            ++counters_.tx_timeouts;
            promote_next();
        }
    }
    return effects;
}

std::vector<AdapterEffect> Adapter::on_pulse(std::optional<std::int64_t> word_end_lead) {
    ++counters_.pulses_received;
    if (rx_scan_) {
        ++counters_.pulses_ignored;
        return {};
    }

    RxScan scan;
    std::int64_t start = 0;
    if (config_.rx_policy == RxPolicy::Aligned && word_end_lead) {
        start = static_cast<std::int64_t>(buffer_.size()) - static_cast<std::int64_t>(config_.word_size()) +
                *word_end_lead;
        if (start < 0) start = 0; // the word's head already left the buffer
    }
    const auto contents = buffer_.contents();
    if (start >= static_cast<std::int64_t>(contents.size())) {
        scan.skip = static_cast<std::uint64_t>(start) - contents.size();
    } else {
        scan.pending.assign(contents.begin() + start, contents.end());
    }

    if (auto hit = scan_pending(scan)) {
        ++counters_.words_delivered;
        return {DeliverWord{hit->word, 0}};
    }
    rx_scan_ = std::move(scan);
    return {};
}

} // namespace bitsurf::adapter
