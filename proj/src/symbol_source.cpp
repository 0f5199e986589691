#include "bitsurf/symbol_source.hpp"

#include <bit>
#include <stdexcept>

namespace bitsurf {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// 64 bits starting `offset` bits into the concatenation hi:lo.
constexpr std::uint64_t funnel(std::uint64_t hi, std::uint64_t lo, unsigned offset) noexcept {
    return offset == 0 ? hi : (hi << offset) | (lo >> (64 - offset));
}

} // namespace

SymbolSource::SymbolSource(std::uint64_t seed, double rate) : seed_(seed), key_(mix64(seed + kGolden)), rate_(rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("symbol rate must be > 0");
}

std::uint64_t SymbolSource::block(std::uint64_t j) const noexcept { return mix64(key_ + (j + 1) * kGolden); }

int SymbolSource::bit(std::uint64_t k) const noexcept {
    return static_cast<int>((block(k >> 6) >> (63 - (k & 63))) & 1U);
}

std::uint64_t SymbolSource::window(std::uint64_t start) const noexcept {
    const std::uint64_t j = start >> 6;
    const auto offset = static_cast<unsigned>(start & 63);
    return funnel(block(j), offset == 0 ? 0 : block(j + 1), offset);
}

std::optional<std::uint64_t> SymbolSource::find_word_end(const Word& w, std::uint64_t earliest_end,
                                                         std::uint64_t latest_end) const {
    const std::size_t n = w.length();
    if (earliest_end + 1 < n) throw std::invalid_argument("find_word_end: window starts before the stream");
    // Bit-sliced search over 64 candidate end positions at a time. Bit 63-i
    // of `hits` stands for end position `end + i`.
    for (std::uint64_t end = earliest_end; end <= latest_end; end += 64) {
        const std::uint64_t first = end + 1 - n; // start of the word ending at `end`
        const std::uint64_t base = first >> 6;
        const auto offset = static_cast<unsigned>(first & 63);
        const std::uint64_t b0 = block(base);
        const std::uint64_t b1 = block(base + 1);
        const std::uint64_t b2 = block(base + 2);

        std::uint64_t hits = ~std::uint64_t{0};
        for (std::size_t j = 0; j < n && hits != 0; ++j) {
            const unsigned shift = offset + static_cast<unsigned>(j);
            const std::uint64_t a = shift < 64 ? funnel(b0, b1, shift) : funnel(b1, b2, shift - 64);
            hits &= ((w.bits() >> (n - 1 - j)) & 1U) ? a : ~a;
        }
        const std::uint64_t span = latest_end - end;
        if (span < 63) hits &= ~std::uint64_t{0} << (63 - span);
        if (hits != 0) return end + static_cast<std::uint64_t>(std::countl_zero(hits));
        if (latest_end - end < 64) break;
    }
    return std::nullopt;
}

void SymbolSource::copy_bits(std::uint64_t first, std::uint64_t last, std::vector<std::uint8_t>& out) const {
    for (std::uint64_t k = first; k <= last; ++k) out.push_back(static_cast<std::uint8_t>(bit(k)));
}

} // namespace bitsurf
