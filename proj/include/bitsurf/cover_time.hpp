#pragma once

#include "bitsurf/word.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bitsurf {

__extension__ typedef unsigned __int128 u128;

std::string to_string(u128 value);

/// Expected number of i.i.d. fair bits until a word first appears.
struct CoverTimeResult {
    /// Exact expectation, 2^|w| + sum of 2^|b| over the failure chain.
    u128 expected_bits = 0;
    /// Proper borders f(w), f(f(w)), ... in strictly decreasing length.
    /// The word itself is not included.
    std::vector<Word> failure_chain;

    double as_double() const noexcept { return static_cast<double>(expected_bits); }
};

CoverTimeResult cover_time(const Word& w);

/// Average cover time over all words of the given size, 2^word_size.
/// Valid for 1 <= word_size <= 64.
u128 avg_cover_time(std::size_t word_size);

struct EmpiricalCoverTime {
    double mean = 0.0;
    /// Standard error of the mean.
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

/// Monte Carlo estimate of the cover time: the mean position (1-based) at
/// which `w` first completes in a fresh stream of fair bits, over `trials`
/// independent streams drawn from a generator seeded with `seed`.
///
/// Rejects trials == 0, and words longer than 24 bits combined with more
/// than 10^4 trials.
EmpiricalCoverTime empirical_cover_time(const Word& w, std::uint64_t trials, std::uint64_t seed);

} // namespace bitsurf
