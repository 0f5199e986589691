#include "bitsurf/word.hpp"

#include <stdexcept>

namespace bitsurf {

namespace {

constexpr std::uint64_t low_mask(std::size_t n) noexcept {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

bool window_matches(const Word& haystack, const Word& needle, std::size_t index) noexcept {
    const std::size_t shift = haystack.length() - needle.length() - index;
    return ((haystack.bits() >> shift) & needle.mask()) == needle.bits();
}

} // namespace

Word::Word(std::uint64_t bits, std::size_t length) : bits_(bits), length_(length) {
    if (length == 0 || length > kMaxLength) {
        throw std::invalid_argument("word length must be in 1..64, got " + std::to_string(length));
    }
    if ((bits & ~low_mask(length)) != 0) {
        throw std::invalid_argument("word bits exceed declared length " + std::to_string(length));
    }
}

Word Word::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty word");
    if (text.size() > kMaxLength) {
        throw std::invalid_argument("word longer than 64 bits: " + std::string(text));
    }
    std::uint64_t bits = 0;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("invalid character in word '" + std::string(text) + "'");
        }
        bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return Word(bits, text.size());
}

int Word::at(std::size_t i) const {
    if (i >= length_) throw std::out_of_range("word index out of range");
    return static_cast<int>((bits_ >> (length_ - 1 - i)) & 1U);
}

Word Word::prefix(std::size_t n) const {
    if (n == 0 || n > length_) throw std::out_of_range("prefix length out of range");
    return Word(bits_ >> (length_ - n), n);
}

Word Word::suffix(std::size_t n) const {
    if (n == 0 || n > length_) throw std::out_of_range("suffix length out of range");
    return Word(bits_ & low_mask(n), n);
}

bool Word::starts_with(const Word& other) const noexcept {
    return other.length_ <= length_ && (bits_ >> (length_ - other.length_)) == other.bits_;
}

Word Word::concat(const Word& other) const {
    if (length_ + other.length_ > kMaxLength) {
        throw std::invalid_argument("concatenation exceeds 64 bits");
    }
    const std::uint64_t high = other.length_ == 64 ? 0 : (bits_ << other.length_);
    return Word(high | other.bits_, length_ + other.length_);
}

std::uint64_t Word::mask() const noexcept { return low_mask(length_); }

std::string Word::str() const {
    std::string out(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if ((bits_ >> (length_ - 1 - i)) & 1U) out[i] = '1';
    }
    return out;
}

std::optional<Word> failure(const Word& w) {
    for (std::size_t n = w.length() - 1; n >= 1; --n) {
        if (w.prefix(n) == w.suffix(n)) return w.prefix(n);
    }
    return std::nullopt;
}

int last_occurrence(const Word& haystack, const Word& needle) noexcept {
    if (needle.length() > haystack.length()) return -1;
    for (std::size_t i = haystack.length() - needle.length() + 1; i-- > 0;) {
        if (window_matches(haystack, needle, i)) return static_cast<int>(i);
    }
    return -1;
}

int find_occurrence(const Word& haystack, const Word& needle, std::size_t from) noexcept {
    if (needle.length() > haystack.length()) return -1;
    for (std::size_t i = from; i + needle.length() <= haystack.length(); ++i) {
        if (window_matches(haystack, needle, i)) return static_cast<int>(i);
    }
    return -1;
}

} // namespace bitsurf
