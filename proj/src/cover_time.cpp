#include "bitsurf/cover_time.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bitsurf {

std::string to_string(u128 value) {
    if (value == 0) return "0";
    std::string out;
    while (value > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

CoverTimeResult cover_time(const Word& w) {
    CoverTimeResult result;
    result.expected_bits = u128{1} << w.length();
    for (auto border = failure(w); border; border = failure(*border)) {
        result.expected_bits += u128{1} << border->length();
        result.failure_chain.push_back(*border);
    }
    return result;
}

u128 avg_cover_time(std::size_t word_size) {
    if (word_size == 0 || word_size > Word::kMaxLength) {
        throw std::invalid_argument("word size must be in 1..64");
    }
    return u128{1} << word_size;
}

namespace {

// Pattern-matching automaton built straight from the definition: state s
// means the last s stream bits equal the first s bits of the word.
std::vector<std::array<std::uint8_t, 2>> build_automaton(const Word& w) {
    const std::size_t n = w.length();
    std::vector<std::array<std::uint8_t, 2>> next(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (int bit = 0; bit < 2; ++bit) {
            // seen = first s symbols of w, then `bit`
            std::vector<int> seen;
            for (std::size_t i = 0; i < s; ++i) seen.push_back(w.at(i));
            seen.push_back(bit);
            std::size_t k = std::min(seen.size(), n);
            for (; k > 0; --k) {
                bool match = true;
                for (std::size_t i = 0; i < k && match; ++i) {
                    match = seen[seen.size() - k + i] == w.at(i);
                }
                if (match) break;
            }
            next[s][bit] = static_cast<std::uint8_t>(k);
        }
    }
    return next;
}

} // namespace

EmpiricalCoverTime empirical_cover_time(const Word& w, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("empirical_cover_time needs at least one trial");
    if (w.length() > 24 && trials > 10'000) {
        throw std::invalid_argument("empirical_cover_time: words over 24 bits are limited to 1e4 trials");
    }
    const auto next = build_automaton(w);
    const std::size_t accept = w.length();

    std::mt19937_64 rng(seed);
    std::uint64_t pool = 0;
    int pool_left = 0;

    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::size_t state = 0;
        std::uint64_t steps = 0;
        while (state != accept) {
            if (pool_left == 0) {
                pool = rng();
                pool_left = 64;
            }
            const int bit = static_cast<int>(pool & 1U);
            pool >>= 1;
            --pool_left;
            state = next[state][bit];
            ++steps;
        }
        const auto x = static_cast<double>(steps);
        sum += x;
        sum_sq += x * x;
    }
    const auto n = static_cast<double>(trials);
    EmpiricalCoverTime out;
    out.trials = trials;
    out.mean = sum / n;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
        out.std_error = std::sqrt(var / n);
    }
    return out;
}

} // namespace bitsurf
