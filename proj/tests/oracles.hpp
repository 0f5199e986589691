#pragma once

// Reference computations that share no code with the library.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

inline std::string bits_of(std::uint64_t value, std::size_t length) {
    std::string s(length, '0');
    for (std::size_t i = 0; i < length; ++i) {
        if ((value >> (length - 1 - i)) & 1U) s[i] = '1';
    }
    return s;
}

/// Automaton state after reading `c` in state `k`: length of the longest
/// suffix of w[0..k) + c that is a prefix of w. Plain string comparison.
inline std::size_t next_state(const std::string& w, std::size_t k, char c) {
    const std::string read = w.substr(0, k) + c;
    for (std::size_t len = std::min(read.size(), w.size()); len > 0; --len) {
        if (read.compare(read.size() - len, len, w, 0, len) == 0) return len;
    }
    return 0;
}

/// Exact expected number of fair bits until `w` first appears, from the
/// absorbing chain E[k] = 1 + (E[next(k,0)] + E[next(k,1)]) / 2, E[n] = 0.
///
/// Every E[k] is written as A[k]*E[0] + B[k]. The matching transition from
/// k goes to k+1, so E[k+1] = 2E[k] - 2 - E[miss(k)] determines A and B
/// level by level; E[n] = 0 then fixes E[0]. Integer arithmetic throughout.
inline std::uint64_t markov_cover_time(const std::string& w) {
    using i128 = __int128;
    const std::size_t n = w.size();
    std::vector<i128> a(n + 1), b(n + 1);
    a[0] = 1;
    b[0] = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const char hit = w[k];
        const char miss = hit == '0' ? '1' : '0';
        if (next_state(w, k, hit) != k + 1) throw std::logic_error("automaton does not advance on a match");
        const std::size_t m = next_state(w, k, miss);
        a[k + 1] = 2 * a[k] - a[m];
        b[k + 1] = 2 * b[k] - 2 - b[m];
    }
    // a[n]*E0 + b[n] = 0
    if (a[n] == 0 || (-b[n]) % a[n] != 0) throw std::logic_error("non-integral cover time");
    return static_cast<std::uint64_t>(-b[n] / a[n]);
}

/// Codebook size by sliding-window substring search over all candidates.
inline std::uint64_t codebook_count(const std::string& prefix, std::size_t word_size) {
    const std::size_t free = word_size - prefix.size();
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << free); ++s) {
        const std::string w = prefix + bits_of(s, free);
        bool ok = true;
        for (std::size_t i = 1; i + prefix.size() <= w.size() && ok; ++i) {
            if (w.compare(i, prefix.size(), prefix) == 0) ok = false;
        }
        count += ok ? 1 : 0;
    }
    return count;
}

} // namespace oracle
