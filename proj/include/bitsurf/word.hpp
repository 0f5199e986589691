#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bitsurf {

/// A fixed-length binary string of 1..64 symbols.
///
/// Symbols are stored most-significant first: symbol 0 (the first one to
/// appear in a stream) is bit `length-1` of `bits()`. "1000" therefore has
/// bits() == 0b1000 and length() == 4.
class Word {
public:
    static constexpr std::size_t kMaxLength = 64;

    /// Throws std::invalid_argument on length outside 1..64 or on set bits
    /// above `length`.
    Word(std::uint64_t bits, std::size_t length);

    /// Parses an ASCII string of '0'/'1'. Rejects empty input, any other
    /// character and strings longer than 64 symbols.
    static Word parse(std::string_view text);

    std::uint64_t bits() const noexcept { return bits_; }
    std::size_t length() const noexcept { return length_; }

    /// Symbol at stream position `i` (0 = first).
    int at(std::size_t i) const;

    /// First `n` symbols, 1 <= n <= length().
    Word prefix(std::size_t n) const;
    /// Last `n` symbols, 1 <= n <= length().
    Word suffix(std::size_t n) const;

    bool starts_with(const Word& other) const noexcept;

    /// Appends `other` after this word. Combined length must stay <= 64.
    Word concat(const Word& other) const;

    /// Mask covering the low `length()` bits.
    std::uint64_t mask() const noexcept;

    std::string str() const;

    friend bool operator==(const Word&, const Word&) = default;

    /// Shorter words order first; equal lengths compare lexicographically,
    /// which for a fixed length is numeric order of bits().
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept {
        if (auto c = a.length_ <=> b.length_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }

private:
    std::uint64_t bits_;
    std::size_t length_;
};

/// Longest proper prefix of `w` that is also a suffix of `w`; nullopt when
/// only the empty string qualifies.
std::optional<Word> failure(const Word& w);

/// Index of the last occurrence of `needle` inside `haystack`, or -1.
/// Mirrors the `wrdfind` helper used by the codebook-size procedure.
int last_occurrence(const Word& haystack, const Word& needle) noexcept;

/// Index of the first occurrence of `needle` at or after `from`, or -1.
int find_occurrence(const Word& haystack, const Word& needle, std::size_t from = 0) noexcept;

} // namespace bitsurf
