#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bitsurf/cover_time.hpp"
#include "bitsurf/word.hpp"
#include "oracles.hpp"

#include <algorithm>

using namespace bitsurf;

TEST_CASE("word parsing and rendering") {
    const Word w = Word::parse("1000");
    CHECK(w.bits() == 0b1000);
    CHECK(w.length() == 4);
    CHECK(w.at(0) == 1);
    CHECK(w.at(3) == 0);
    CHECK(w.str() == "1000");
    CHECK(Word::parse("0001") != Word::parse("1"));
    CHECK(Word::parse("01") != Word::parse("001"));
    CHECK_THROWS_AS(Word::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Word::parse("2x"), std::invalid_argument);
    CHECK_THROWS_AS(Word::parse(std::string(65, '1')), std::invalid_argument);
    CHECK(Word::parse(std::string(64, '1')).length() == 64);
    CHECK_THROWS_AS(Word(0b100, 2), std::invalid_argument);
}

TEST_CASE("word slicing") {
    const Word w = Word::parse("110100");
    CHECK(w.prefix(3).str() == "110");
    CHECK(w.suffix(2).str() == "00");
    CHECK(w.starts_with(Word::parse("11")));
    CHECK_FALSE(w.starts_with(Word::parse("10")));
    CHECK(w.concat(Word::parse("1")).str() == "1101001");
    CHECK(last_occurrence(w, Word::parse("10")) == 3);
    CHECK(find_occurrence(w, Word::parse("1")) == 0);
    CHECK(find_occurrence(w, Word::parse("1"), 2) == 3);
    CHECK(last_occurrence(w, Word::parse("111")) == -1);
}

TEST_CASE("failure function examples") {
    CHECK_FALSE(failure(Word::parse("10")).has_value());
    CHECK(failure(Word::parse("11"))->str() == "1");
    CHECK(failure(Word::parse("1101"))->str() == "1");
    CHECK(failure(Word::parse("10101"))->str() == "101");
    CHECK_FALSE(failure(Word::parse("1")).has_value());
}

TEST_CASE("failure is strictly shorter and its chain ends within |w| steps") {
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            Word w(v, n);
            std::size_t steps = 0;
            std::optional<Word> cur = w;
            while (cur) {
                auto next = failure(*cur);
                if (next) REQUIRE(next->length() < cur->length());
                cur = next;
                ++steps;
            }
            REQUIRE(steps <= n);
        }
    }
}

TEST_CASE("cover time examples") {
    CHECK(cover_time(Word::parse("10")).expected_bits == 4);
    CHECK(cover_time(Word::parse("11")).expected_bits == 6);
    CHECK(cover_time(Word::parse("1111")).expected_bits == 30);
    CHECK(cover_time(Word::parse("1000")).expected_bits == 16);
    CHECK(cover_time(Word::parse("1000")).failure_chain.empty());

    const auto r = cover_time(Word::parse("10101"));
    REQUIRE(r.failure_chain.size() == 2);
    CHECK(r.failure_chain[0].str() == "101");
    CHECK(r.failure_chain[1].str() == "1");
    CHECK(r.expected_bits == 32 + 8 + 2);
}

TEST_CASE("cover time matches the absorbing chain for every word up to 9 bits") {
    for (std::size_t n = 1; n <= 9; ++n) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const Word w(v, n);
            const auto r = cover_time(w);
            REQUIRE(r.expected_bits == oracle::markov_cover_time(w.str()));
            u128 sum = u128{1} << n;
            for (std::size_t i = 0; i < r.failure_chain.size(); ++i) {
                sum += u128{1} << r.failure_chain[i].length();
                if (i > 0) REQUIRE(r.failure_chain[i].length() < r.failure_chain[i - 1].length());
            }
            REQUIRE(sum == r.expected_bits);
        }
    }
}

TEST_CASE("constant words cost 2^(n+1) - 2") {
    for (std::size_t n = 1; n <= 64; ++n) {
        const u128 expected = (u128{1} << (n + 1)) - 2;
        CHECK(cover_time(Word(0, n)).expected_bits == expected);
        CHECK(cover_time(Word(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1, n)).expected_bits == expected);
    }
    CHECK(to_string(cover_time(Word(0, 64)).expected_bits) == "36893488147419103230");
}

TEST_CASE("average cover time") {
    CHECK(avg_cover_time(16) == 65536);
    CHECK(avg_cover_time(1) == 2);
    CHECK(avg_cover_time(26) == 67108864);
    CHECK(to_string(avg_cover_time(64)) == "18446744073709551616");
    CHECK_THROWS(avg_cover_time(0));
    CHECK_THROWS(avg_cover_time(65));
}

TEST_CASE("average cover time is bracketed by the extreme words") {
    for (std::size_t n = 1; n <= 12; ++n) {
        u128 lo = ~u128{0}, hi = 0;
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const u128 ct = cover_time(Word(v, n)).expected_bits;
            lo = std::min(lo, ct);
            hi = std::max(hi, ct);
        }
        CHECK(lo <= avg_cover_time(n));
        CHECK(avg_cover_time(n) <= hi);
    }
}

TEST_CASE("empirical cover time") {
    const auto one = empirical_cover_time(Word::parse("1"), 1'000'000, 5);
    CHECK(one.mean == doctest::Approx(2.0).epsilon(0.01));
    CHECK(one.trials == 1'000'000);

    const auto a = empirical_cover_time(Word::parse("0110"), 20'000, 42);
    const auto b = empirical_cover_time(Word::parse("0110"), 20'000, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(empirical_cover_time(Word::parse("0110"), 20'000, 43).mean != a.mean);

    CHECK_THROWS_AS(empirical_cover_time(Word::parse("1"), 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(empirical_cover_time(Word(0, 25), 10'001, 1), std::invalid_argument);
    CHECK_NOTHROW(empirical_cover_time(Word(1, 25), 3, 1));
}

TEST_CASE("empirical means sit within three standard errors of the exact value") {
    for (const char* text : {"10", "11", "101", "0110", "11111", "100100"}) {
        const Word w = Word::parse(text);
        const auto e = empirical_cover_time(w, 200'000, 11);
        const double exact = cover_time(w).as_double();
        INFO(text);
        CHECK(std::abs(e.mean - exact) <= 3 * e.std_error);
    }
}
