#include "bitsurf/codebook.hpp"

#include "bitsurf/cover_time.hpp"
#include "bitsurf/stats.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bitsurf {

namespace {

void check_enumeration_bounds(const Word& prefix, std::size_t word_size) {
    if (prefix.length() >= word_size) {
        throw std::invalid_argument("prefix length " + std::to_string(prefix.length()) +
                                    " must be shorter than word size " + std::to_string(word_size));
    }
    if (word_size > kMaxEnumeratedWordSize) {
        throw std::invalid_argument("word size " + std::to_string(word_size) +
                                    " exceeds the enumeration bound of 32 bits");
    }
    if (word_size - prefix.length() > kMaxEnumeratedSuffixBits) {
        throw std::invalid_argument("enumeration guard: word_size - prefix_length = " +
                                    std::to_string(word_size - prefix.length()) + " > 28");
    }
}

// wrdfind(candidate, prefix): index of the last occurrence, scanning from the
// right end. `candidate` holds `n` bits, `prefix` holds `m` bits.
int last_prefix_index(std::uint64_t candidate, std::size_t n, std::uint64_t prefix, std::size_t m) noexcept {
    const std::uint64_t pmask = (std::uint64_t{1} << m) - 1;
    for (std::size_t shift = 0; shift + m <= n; ++shift) {
        if (((candidate >> shift) & pmask) == prefix) return static_cast<int>(n - m - shift);
    }
    return -1;
}

template <typename Visit>
std::uint64_t run_discard_loop(const Word& prefix, std::size_t word_size, Visit&& keep) {
    check_enumeration_bounds(prefix, word_size);
    const std::size_t m = prefix.length();
    const std::size_t suffix_bits = word_size - m;
    const std::uint64_t candidates = std::uint64_t{1} << suffix_bits;
    std::uint64_t max_size = candidates;
    for (std::uint64_t suffix = 0; suffix < candidates; ++suffix) {
        const std::uint64_t candidate = (prefix.bits() << suffix_bits) | suffix;
        if (last_prefix_index(candidate, word_size, prefix.bits(), m) > 0) {
            --max_size;
        } else {
            keep(candidate);
        }
    }
    return max_size;
}

bool prefix_at(std::span<const std::uint8_t> bits, std::size_t i, const Word& prefix) {
    for (std::size_t k = 0; k < prefix.length(); ++k) {
        if (bits[i + k] != prefix.at(k)) return false;
    }
    return true;
}

// Shared scanning core; stops after the first hit when `first_only`.
std::vector<ScanHit> scan_impl(std::span<const std::uint8_t> bits, const Codebook& cb, bool first_only) {
    std::vector<ScanHit> hits;
    const std::size_t p = cb.prefix().length();
    const std::size_t n = cb.word_size();
    std::size_t i = 0;
    while (i + p <= bits.size()) {
        if (!prefix_at(bits, i, cb.prefix())) {
            ++i;
            continue;
        }
        std::optional<std::size_t> restart;
        bool truncated = false;
        for (std::size_t j = i + 1; j <= i + n - p; ++j) {
            if (j + p > bits.size()) {
                truncated = true;
                break;
            }
            if (prefix_at(bits, j, cb.prefix())) {
                restart = j;
                break;
            }
        }
        if (restart) {
            i = *restart;
            continue;
        }
        if (truncated || i + n > bits.size()) break;

        std::uint64_t value = 0;
        for (std::size_t k = 0; k < n; ++k) value = (value << 1) | bits[i + k];
        if (cb.index_of_bits(value)) {
            hits.push_back(ScanHit{i, Word(value, n)});
            if (first_only) break;
            i += n;
        } else {
            ++i;
        }
    }
    return hits;
}

} // namespace

bool is_valid_word(const Word& prefix, const Word& w) {
    if (prefix.length() >= w.length()) {
        throw std::invalid_argument("prefix must be shorter than the word");
    }
    return w.starts_with(prefix) && last_occurrence(w, prefix) == 0;
}

Codebook::Codebook(Word prefix, std::size_t word_size, std::vector<Word> words)
    : prefix_(prefix), word_size_(word_size), words_(std::move(words)) {
    sorted_bits_.reserve(words_.size());
    for (const auto& w : words_) sorted_bits_.push_back(w.bits());
    payload_bits_ = static_cast<std::size_t>(std::bit_width(words_.size())) - 1;
}

Codebook Codebook::enumerate(const Word& prefix, std::size_t word_size) {
    std::vector<Word> words;
    run_discard_loop(prefix, word_size, [&](std::uint64_t candidate) { words.emplace_back(candidate, word_size); });
    if (words.empty()) {
        throw std::invalid_argument("prefix " + prefix.str() + " admits no valid " + std::to_string(word_size) +
                                    "-bit words");
    }
    return Codebook(prefix, word_size, std::move(words));
}

Codebook Codebook::from_words(const Word& prefix, std::size_t word_size, std::vector<Word> words) {
    if (prefix.length() >= word_size) throw std::invalid_argument("prefix must be shorter than the word size");
    if (word_size > Word::kMaxLength) throw std::invalid_argument("word size exceeds 64 bits");
    if (words.empty()) throw std::invalid_argument("codebook must hold at least one word");
    const std::size_t suffix_bits = word_size - prefix.length();
    if (suffix_bits < 64 && words.size() > (std::uint64_t{1} << suffix_bits)) {
        throw std::invalid_argument("codebook holds more words than the suffix space allows");
    }
    for (const auto& w : words) {
        if (w.length() != word_size) {
            throw std::invalid_argument("word " + w.str() + " does not have length " + std::to_string(word_size));
        }
        if (!is_valid_word(prefix, w)) {
            throw std::invalid_argument("word " + w.str() + " is not valid for prefix " + prefix.str());
        }
    }
    std::sort(words.begin(), words.end());
    if (std::adjacent_find(words.begin(), words.end()) != words.end()) {
        throw std::invalid_argument("codebook words must be unique");
    }
    return Codebook(prefix, word_size, std::move(words));
}

std::optional<std::size_t> Codebook::index_of_bits(std::uint64_t bits) const noexcept {
    const auto it = std::lower_bound(sorted_bits_.begin(), sorted_bits_.end(), bits);
    if (it == sorted_bits_.end() || *it != bits) return std::nullopt;
    return static_cast<std::size_t>(it - sorted_bits_.begin());
}

std::optional<std::size_t> Codebook::index_of(const Word& w) const noexcept {
    if (w.length() != word_size_) return std::nullopt;
    return index_of_bits(w.bits());
}

std::uint64_t codebook_size(const Word& prefix, std::size_t word_size) {
    return run_discard_loop(prefix, word_size, [](std::uint64_t) {});
}

std::vector<PrefixCount> best_prefixes(std::size_t word_size, std::size_t prefix_size) {
    if (prefix_size < 1 || prefix_size >= word_size) {
        throw std::invalid_argument("prefix size must be in 1..word_size-1");
    }
    std::vector<PrefixCount> ranking;
    ranking.reserve(std::size_t{1} << prefix_size);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << prefix_size); ++bits) {
        const Word prefix(bits, prefix_size);
        ranking.push_back(PrefixCount{prefix, codebook_size(prefix, word_size)});
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const PrefixCount& a, const PrefixCount& b) { return a.count > b.count; });
    return ranking;
}

std::vector<std::uint64_t> best_size_per_prefix_length(std::size_t word_size) {
    if (word_size < 2) throw std::invalid_argument("word size must be at least 2");
    std::vector<std::uint64_t> best;
    for (std::size_t ps = 1; ps < word_size; ++ps) best.push_back(best_prefixes(word_size, ps).front().count);
    return best;
}

std::size_t optimal_prefix_size(std::size_t word_size) {
    if (word_size < 3) throw std::invalid_argument("optimal_prefix_size needs word size >= 3");
    const auto best = best_size_per_prefix_length(word_size);
    return static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin()) + 1;
}

CoverStats codebook_cover_stats(const Codebook& cb) {
    std::vector<double> cts;
    cts.reserve(cb.size());
    for (const auto& w : cb.words()) cts.push_back(cover_time(w).as_double());
    std::sort(cts.begin(), cts.end());
    const std::span<const double> s(cts);
    CoverStats out;
    out.min = cts.front();
    out.max = cts.back();
    out.q1 = stats::quantile_sorted(s, 0.25);
    out.median = stats::quantile_sorted(s, 0.5);
    out.q3 = stats::quantile_sorted(s, 0.75);
    out.mean = stats::mean(s);
    out.variance = stats::variance(s);
    return out;
}

Word encode(std::uint64_t payload, const Codebook& cb) {
    if (payload >= (std::uint64_t{1} << cb.payload_bits())) {
        throw std::out_of_range("payload " + std::to_string(payload) + " does not fit in " +
                                std::to_string(cb.payload_bits()) + " payload bits");
    }
    return cb.word_at(payload);
}

std::uint64_t decode(const Word& w, const Codebook& cb) {
    const auto index = cb.index_of(w);
    if (!index) throw std::invalid_argument("word " + w.str() + " is not in the codebook");
    if (*index >= (std::uint64_t{1} << cb.payload_bits())) {
        throw std::invalid_argument("word " + w.str() + " is outside the payload range");
    }
    return *index;
}

std::vector<ScanHit> scan_stream(std::span<const std::uint8_t> bits, const Codebook& cb) {
    return scan_impl(bits, cb, false);
}

std::optional<ScanHit> scan_first(std::span<const std::uint8_t> bits, const Codebook& cb) {
    auto hits = scan_impl(bits, cb, true);
    if (hits.empty()) return std::nullopt;
    return hits.front();
}

std::vector<std::uint8_t> parse_bits(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("invalid bit character '" + std::string(1, c) + "'");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return bits;
}

void write_codebook(std::ostream& out, const Codebook& cb) {
    out << "prefix=" << cb.prefix().str() << " word_size=" << cb.word_size() << " count=" << cb.size() << '\n';
    for (const auto& w : cb.words()) out << w.str() << '\n';
}

Codebook read_codebook(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("codebook file is empty");

    std::istringstream fields(header);
    std::string token;
    std::optional<Word> prefix;
    std::optional<std::size_t> word_size;
    std::optional<std::size_t> count;
    while (fields >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed header field '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "prefix") {
            prefix = Word::parse(value);
        } else if (key == "word_size") {
            word_size = std::stoul(value);
        } else if (key == "count") {
            count = std::stoul(value);
        } else {
            throw std::invalid_argument("unknown header field '" + key + "'");
        }
    }
    if (!prefix || !word_size || !count) throw std::invalid_argument("codebook header needs prefix, word_size, count");

    std::vector<Word> words;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        words.push_back(Word::parse(line));
    }
    if (words.size() != *count) {
        throw std::invalid_argument("codebook header declares " + std::to_string(*count) + " words, found " +
                                    std::to_string(words.size()));
    }
    if (!std::is_sorted(words.begin(), words.end())) throw std::invalid_argument("codebook words are not sorted");
    return Codebook::from_words(*prefix, *word_size, std::move(words));
}

} // namespace bitsurf
