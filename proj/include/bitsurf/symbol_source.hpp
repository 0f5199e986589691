#pragma once

#include "bitsurf/word.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bitsurf {

/// The external broadcaster of fair random bits shared by every node.
///
/// Bit k is a pure function of (seed, k): the stream is counter-based, so any
/// position can be read without generating its predecessors, and two readers
/// of the same seed always agree.
class SymbolSource {
public:
    explicit SymbolSource(std::uint64_t seed, double rate = 1e6);

    std::uint64_t seed() const noexcept { return seed_; }
    double rate() const noexcept { return rate_; }

    int bit(std::uint64_t k) const noexcept;

    /// Stream bits [64j, 64j+64), bit 64j in the most significant position.
    std::uint64_t block(std::uint64_t j) const noexcept;

    /// 64 consecutive bits starting at `start`, first bit most significant.
    std::uint64_t window(std::uint64_t start) const noexcept;

    /// Sequential reader: returns bit position() and advances.
    int next() noexcept { return bit(position_++); }
    std::uint64_t position() const noexcept { return position_; }

    /// Smallest e in [earliest_end, latest_end] with stream[e-|w|+1 .. e] == w.
    /// Requires earliest_end >= |w| - 1.
    std::optional<std::uint64_t> find_word_end(const Word& w, std::uint64_t earliest_end,
                                               std::uint64_t latest_end) const;

    /// Appends stream bits [first, last] to `out` as 0/1 values.
    void copy_bits(std::uint64_t first, std::uint64_t last, std::vector<std::uint8_t>& out) const;

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    double rate_;
    std::uint64_t position_ = 0;
};

} // namespace bitsurf
