#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "cryolink/errors.hpp"
#include "cryolink/pattern.hpp"
#include "cryolink/rng.hpp"

using namespace cryolink;

namespace {

// brute-force oracle: advance the x^7+x^6+1 recurrence over explicit bit
// arrays, independent of the Lfsr7State implementation
std::vector<int> reference_lfsr_bits(uint8_t seed, size_t n) {
    int reg[7];
    for (int i = 0; i < 7; ++i) reg[i] = (seed >> i) & 1;
    std::vector<int> bits;
    bits.reserve(n);
    for (size_t k = 0; k < n; ++k) {
        const int fb = reg[6] ^ reg[5];
        for (int i = 6; i > 0; --i) reg[i] = reg[i - 1];
        reg[0] = fb;
        bits.push_back(fb);
    }
    return bits;
}

} // namespace

TEST_CASE("prbs7 matches the recurrence oracle") {
    const auto got = prbs7_generate(Lfsr7State(0x7f), 300);
    const auto want = reference_lfsr_bits(0x7f, 300);
    CHECK(std::equal(got.begin(), got.end(), want.begin()));
}

TEST_CASE("prbs7 period is exactly 127 from every nonzero seed") {
    for (int seed = 1; seed < 128; ++seed) {
        const auto bits = prbs7_generate(Lfsr7State(static_cast<uint8_t>(seed)), 254);
        for (int k = 0; k < 127; ++k) {
            REQUIRE(bits[static_cast<size_t>(k)] == bits[static_cast<size_t>(k) + 127]);
        }
        // maximality: all 127 nonzero states visited
        Lfsr7State state(static_cast<uint8_t>(seed));
        std::set<uint8_t> visited;
        for (int k = 0; k < 127; ++k) {
            visited.insert(state.reg());
            state.step();
        }
        REQUIRE(visited.size() == 127);
        REQUIRE(state.reg() == seed);
    }
}

TEST_CASE("prbs7 one-period balance is 64 ones, 63 zeros") {
    const auto bits = prbs7_generate(Lfsr7State(0x55), 127);
    const int ones = std::accumulate(bits.begin(), bits.end(), 0);
    CHECK(ones == 64);
}

TEST_CASE("prbs7 edge cases") {
    CHECK(prbs7_generate(Lfsr7State(0x7f), 0).empty());
    CHECK_THROWS_AS(Lfsr7State(0), ConfigError);
}

TEST_CASE("gray map definition and adjacency") {
    CHECK(gray_map(0, 0) == 0);
    CHECK(gray_map(0, 1) == 1);
    CHECK(gray_map(1, 1) == 2);
    CHECK(gray_map(1, 0) == 3);
    for (uint8_t level = 0; level < 3; ++level) {
        int a0, a1, b0, b1;
        gray_unmap(level, a0, a1);
        gray_unmap(static_cast<uint8_t>(level + 1), b0, b1);
        CHECK((a0 != b0) + (a1 != b1) == 1);
    }
    for (int b0 = 0; b0 < 2; ++b0) {
        for (int b1 = 0; b1 < 2; ++b1) {
            int r0, r1;
            gray_unmap(gray_map(b0, b1), r0, r1);
            CHECK(r0 == b0);
            CHECK(r1 == b1);
        }
    }
}

TEST_CASE("prbs7q symbol period is exactly 127") {
    for (uint8_t seed : {uint8_t{0x7f}, uint8_t{0x01}, uint8_t{0x2a}}) {
        const auto symbols = prbs7q_generate(Lfsr7State(seed), 254);
        for (size_t k = 0; k < 127; ++k) REQUIRE(symbols[k] == symbols[k + 127]);
        bool all_same = true;
        for (size_t k = 1; k < 127; ++k) all_same &= symbols[k] == symbols[0];
        REQUIRE_FALSE(all_same);
    }
}

TEST_CASE("prbs7q level histogram over one period is nearly balanced") {
    const auto symbols = prbs7q_generate(Lfsr7State(0x7f), 127);
    int counts[4] = {0, 0, 0, 0};
    for (uint8_t s : symbols) ++counts[s];
    for (int c : counts) {
        CHECK(c >= 28);
        CHECK(c <= 36);
    }
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == 127);
}

TEST_CASE("prbs7q matches pairwise gray mapping of the bit stream") {
    const auto bits = prbs7_generate(Lfsr7State(0x13), 200);
    const auto symbols = prbs7q_generate(Lfsr7State(0x13), 100);
    for (size_t k = 0; k < 100; ++k) {
        CHECK(symbols[k] == gray_map(bits[2 * k], bits[2 * k + 1]));
    }
}

TEST_CASE("ber_check identity") {
    const auto ref = prbs7q_generate(Lfsr7State(), 1000);
    const auto rep = ber_check(ref, ref);
    CHECK(rep.ber == 0.0);
    CHECK(rep.symbol_errors == 0);
    CHECK(rep.alignment_offset == 0);
}

TEST_CASE("ber_check counts injected adjacent-level errors exactly") {
    const auto ref = prbs7q_generate(Lfsr7State(), 1000);
    auto received = ref;
    // flip 10 occurrences of level 2 to level 1: one Gray bit each
    int flipped = 0;
    for (auto& s : received) {
        if (s == 2 && flipped < 10) {
            s = 1;
            ++flipped;
        }
    }
    REQUIRE(flipped == 10);
    const auto rep = ber_check(ref, received, Alignment::fixed(0));
    CHECK(rep.symbol_errors == 10);
    CHECK(rep.bit_errors == 10);
    CHECK(rep.ber == doctest::Approx(10.0 / 2000.0));
}

TEST_CASE("ber_check checker soundness for k random injected errors") {
    Rng rng(7);
    const auto ref = prbs7q_generate(Lfsr7State(), 10000);
    for (uint64_t k : {uint64_t{1}, uint64_t{10}, uint64_t{100}}) {
        auto received = ref;
        std::set<size_t> positions;
        while (positions.size() < k) {
            positions.insert(static_cast<size_t>(rng.uniform() * static_cast<double>(received.size())));
        }
        for (size_t pos : positions) received[pos] = static_cast<uint8_t>((received[pos] + 2) & 3);
        const auto rep = ber_check(ref, received, Alignment::fixed(0));
        CHECK(rep.symbol_errors == k);
        CHECK(rep.bit_errors <= 2 * rep.symbol_errors);
    }
}

TEST_CASE("ber_check auto alignment recovers a rotation") {
    const auto ref = prbs7q_generate(Lfsr7State(), 127 * 8);
    SymbolStream rotated(ref.size());
    for (size_t k = 0; k < ref.size(); ++k) rotated[k] = ref[(k + 13) % ref.size()];
    const auto rep = ber_check(ref, rotated);
    CHECK(rep.alignment_offset == 13);
    CHECK(rep.ber == 0.0);
}

TEST_CASE("ber_check auto alignment needs two periods") {
    const auto ref = prbs7q_generate(Lfsr7State(), 300);
    const SymbolStream received(ref.begin(), ref.begin() + 200);
    CHECK_THROWS_AS(ber_check(ref, received), StatsError);
    CHECK_THROWS_AS(ber_check(ref, {}), ConfigError);
}
