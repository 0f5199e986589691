#pragma once

#include "bitsurf/word.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bitsurf {

/// Exhaustive enumeration refuses suffix spaces above 2^28 candidates.
inline constexpr std::size_t kMaxEnumeratedSuffixBits = 28;
inline constexpr std::size_t kMaxEnumeratedWordSize = 32;

/// True iff `w` starts with `prefix` and `prefix` occurs nowhere else in `w`.
/// Throws std::invalid_argument when prefix.length() >= w.length().
bool is_valid_word(const Word& prefix, const Word& w);

/// A self-synchronizing prefix codebook: every word begins with the prefix
/// and the prefix appears in no word at any index >= 1. Immutable.
class Codebook {
public:
    /// All valid words for (prefix, word_size), sorted.
    static Codebook enumerate(const Word& prefix, std::size_t word_size);

    /// Validates and adopts an explicit word list (possibly a subset of the
    /// maximal codebook). Words are sorted; duplicates are rejected.
    static Codebook from_words(const Word& prefix, std::size_t word_size, std::vector<Word> words);

    const Word& prefix() const noexcept { return prefix_; }
    std::size_t word_size() const noexcept { return word_size_; }
    std::size_t size() const noexcept { return words_.size(); }
    std::span<const Word> words() const noexcept { return words_; }
    const Word& word_at(std::size_t index) const { return words_.at(index); }

    /// floor(log2(size())).
    std::size_t payload_bits() const noexcept { return payload_bits_; }

    /// Lexicographic position of `w`, if it belongs to the codebook.
    std::optional<std::size_t> index_of(const Word& w) const noexcept;
    std::optional<std::size_t> index_of_bits(std::uint64_t bits) const noexcept;
    bool contains(const Word& w) const noexcept { return index_of(w).has_value(); }

    friend bool operator==(const Codebook&, const Codebook&) = default;

private:
    Codebook(Word prefix, std::size_t word_size, std::vector<Word> words);

    Word prefix_;
    std::size_t word_size_;
    std::vector<Word> words_;
    std::vector<std::uint64_t> sorted_bits_;
    std::size_t payload_bits_;
};

/// Codebook size by the discard loop: start from 2^(n-|p|) candidates and
/// drop every prefix+suffix concatenation whose last prefix occurrence is
/// past index 0.
std::uint64_t codebook_size(const Word& prefix, std::size_t word_size);

inline Codebook enumerate_codebook(const Word& prefix, std::size_t word_size) {
    return Codebook::enumerate(prefix, word_size);
}

struct PrefixCount {
    Word prefix;
    std::uint64_t count;
    friend bool operator==(const PrefixCount&, const PrefixCount&) = default;
};

/// Every prefix of `prefix_size` bits with its codebook size for
/// `word_size`-bit words, largest first; ties in lexicographic prefix order.
std::vector<PrefixCount> best_prefixes(std::size_t word_size, std::size_t prefix_size);

/// Largest achievable codebook size for each prefix length 1..word_size-1
/// (element i is for prefix length i+1).
std::vector<std::uint64_t> best_size_per_prefix_length(std::size_t word_size);

/// Prefix length with the largest best codebook; smallest length on ties.
std::size_t optimal_prefix_size(std::size_t word_size);

/// Distribution of exact word cover times (in bits) over a codebook.
struct CoverStats {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0, variance = 0;
};

CoverStats codebook_cover_stats(const Codebook& cb);

/// Word at lexicographic index `payload`; payload must be < 2^payload_bits.
Word encode(std::uint64_t payload, const Codebook& cb);
/// Inverse of encode. Rejects foreign words and unused (index >= 2^payload_bits) words.
std::uint64_t decode(const Word& w, const Codebook& cb);

struct ScanHit {
    std::size_t start_index;
    Word word;
    friend bool operator==(const ScanHit&, const ScanHit&) = default;
};

/// Forward-detection scan over a bit sequence (one 0/1 value per element).
///
/// On locating the prefix at i the scan inspects the rest of the candidate
/// word. A prefix re-occurrence inside the candidate abandons i and restarts
/// at the re-occurrence. A complete codebook word is reported and the scan
/// resumes after it; a complete non-member resumes at i+1. Candidates that
/// run past the end of the input are dropped.
std::vector<ScanHit> scan_stream(std::span<const std::uint8_t> bits, const Codebook& cb);

/// First hit of scan_stream, without scanning the remainder.
std::optional<ScanHit> scan_first(std::span<const std::uint8_t> bits, const Codebook& cb);

/// Parses a '0'/'1' string into a bit sequence. Empty input is allowed.
std::vector<std::uint8_t> parse_bits(std::string_view text);

/// Text format: `prefix=<bits> word_size=<n> count=<k>` then one word per line.
void write_codebook(std::ostream& out, const Codebook& cb);
/// Reads the text format back; every codebook invariant is validated.
Codebook read_codebook(std::istream& in);

} // namespace bitsurf
