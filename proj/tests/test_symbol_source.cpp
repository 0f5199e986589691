#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bitsurf/symbol_source.hpp"

#include <random>

using namespace bitsurf;

TEST_CASE("bits are a pure function of seed and position") {
    const SymbolSource a(7), b(7), c(8);
    int differ = 0;
    for (std::uint64_t k = 0; k < 4096; ++k) {
        REQUIRE(a.bit(k) == b.bit(k));
        differ += a.bit(k) != c.bit(k);
    }
    CHECK(differ > 1800);
    CHECK(differ < 2300);
}

TEST_CASE("block, window and bit agree") {
    const SymbolSource s(3);
    for (std::uint64_t j = 0; j < 4; ++j) {
        const std::uint64_t block = s.block(j);
        for (int i = 0; i < 64; ++i) REQUIRE(((block >> (63 - i)) & 1U) == static_cast<unsigned>(s.bit(64 * j + i)));
    }
    for (std::uint64_t start : {0ULL, 1ULL, 63ULL, 64ULL, 100ULL, 1000ULL}) {
        const std::uint64_t w = s.window(start);
        for (int i = 0; i < 64; ++i) REQUIRE(((w >> (63 - i)) & 1U) == static_cast<unsigned>(s.bit(start + i)));
    }
    std::vector<std::uint8_t> out;
    s.copy_bits(10, 200, out);
    REQUIRE(out.size() == 191);
    for (std::size_t i = 0; i < out.size(); ++i) REQUIRE(out[i] == s.bit(10 + i));
}

TEST_CASE("sequential reader walks the same stream") {
    SymbolSource s(11);
    const SymbolSource ref(11);
    for (std::uint64_t k = 0; k < 300; ++k) REQUIRE(s.next() == ref.bit(k));
    CHECK(s.position() == 300);
}

TEST_CASE("stream is balanced") {
    const SymbolSource s(1);
    std::uint64_t ones = 0;
    const std::uint64_t n = 1 << 20;
    for (std::uint64_t j = 0; j < n / 64; ++j) ones += static_cast<std::uint64_t>(__builtin_popcountll(s.block(j)));
    const double frac = static_cast<double>(ones) / static_cast<double>(n);
    CHECK(frac == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("find_word_end matches a naive search") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const SymbolSource s(rng());
        const std::size_t n = 1 + rng() % 20;
        const Word w(rng() & ((std::uint64_t{1} << n) - 1), n);
        const std::uint64_t earliest = n - 1 + rng() % 500;
        const std::uint64_t latest = earliest + rng() % 5000;
        std::optional<std::uint64_t> naive;
        for (std::uint64_t e = earliest; e <= latest && !naive; ++e) {
            bool match = true;
            for (std::size_t i = 0; i < n && match; ++i) match = s.bit(e - n + 1 + i) == w.at(i);
            if (match) naive = e;
        }
        REQUIRE(s.find_word_end(w, earliest, latest) == naive);
    }
}
