#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cryolink/errors.hpp"
#include "cryolink/rng.hpp"
#include "cryolink/rx_chain.hpp"
#include "cryolink/tx_chain.hpp"

using namespace cryolink;

namespace {

// independent 3-tap convolution oracle over the +-1/3 alphabet, same IDAC
// quantization rule as the production path
std::vector<double> ffe_oracle(const SymbolStream& symbols, double pre, double main, double post,
                               int idac_bits) {
    const double step = 1.0 / ((1 << idac_bits) - 1);
    auto q = [&](double t) { return step * std::round(t / step); };
    pre = q(pre);
    main = q(main);
    post = q(post);
    std::vector<double> out(symbols.size());
    auto a = [&](long k) {
        k = std::clamp<long>(k, 0, static_cast<long>(symbols.size()) - 1);
        return (2.0 * symbols[static_cast<size_t>(k)] - 3.0) / 3.0;
    };
    for (long k = 0; k < static_cast<long>(symbols.size()); ++k) {
        out[static_cast<size_t>(k)] = pre * a(k + 1) + main * a(k) + post * a(k - 1);
    }
    return out;
}

SymbolStream random_symbols(size_t n, uint64_t seed) {
    Rng rng(seed);
    SymbolStream s(n);
    for (auto& v : s) v = static_cast<uint8_t>(rng.uniform() * 4.0);
    return s;
}

} // namespace

TEST_CASE("serialize_lanes interleaves round-robin") {
    LaneGroup g;
    for (size_t i = 0; i < 8; ++i) g.lanes[i] = {static_cast<uint8_t>(i % 4)};
    const SymbolStream serial = serialize_lanes(g);
    CHECK(serial == SymbolStream{0, 1, 2, 3, 0, 1, 2, 3});

    LaneGroup constant;
    for (auto& lane : constant.lanes) lane = SymbolStream(5, 2);
    for (uint8_t s : serialize_lanes(constant)) CHECK(s == 2);
}

TEST_CASE("serialize/deserialize round-trip is the identity") {
    const SymbolStream serial = random_symbols(8 * 100, 42);
    const LaneGroup lanes = deserialize_lanes(serial);
    CHECK(serialize_lanes(lanes) == serial);

    const LaneGroup lanes2 = lanes_from_serial(serial);
    CHECK(serialize_lanes(lanes2) == serial);
}

TEST_CASE("deserialize truncates a ragged tail") {
    const SymbolStream nine = {0, 1, 2, 3, 0, 1, 2, 3, 1};
    const LaneGroup lanes = deserialize_lanes(nine);
    for (size_t i = 0; i < 8; ++i) {
        REQUIRE(lanes.lanes[i].size() == 1);
        CHECK(lanes.lanes[i][0] == nine[i]);
    }
}

TEST_CASE("unequal lanes are rejected") {
    LaneGroup g;
    for (auto& lane : g.lanes) lane = {1, 2};
    g.lanes[3].push_back(0);
    CHECK_THROWS_AS(serialize_lanes(g), ConfigError);
}

TEST_CASE("ffe identity taps pass amplitudes through") {
    const SymbolStream s = {0, 1, 2, 3, 3, 0};
    const auto out = apply_ffe(s, FfeTaps{0.0, 1.0, 0.0, 6});
    for (size_t k = 0; k < s.size(); ++k) {
        CHECK(out[k] == doctest::Approx(level_amplitude(s[k])));
    }
}

TEST_CASE("ffe step response matches the convolution oracle") {
    SymbolStream step;
    for (int i = 0; i < 6; ++i) step.push_back(0);
    for (int i = 0; i < 6; ++i) step.push_back(3);
    const FfeTaps taps{-0.1, 0.8, -0.1, 6};
    const auto got = apply_ffe(step, taps);
    const auto want = ffe_oracle(step, -0.1, 0.8, -0.1, 6);
    for (size_t k = 0; k < got.size(); ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));

    // nominal (unquantized) values: -0.8 at the last low, +0.8 at the first
    // high, +-0.6 in steady state; 6-bit IDAC moves them by < 0.01
    CHECK(got[5] == doctest::Approx(-0.8).epsilon(0.02));
    CHECK(got[6] == doctest::Approx(0.8).epsilon(0.02));
    CHECK(got[2] == doctest::Approx(-0.6).epsilon(0.02));
    CHECK(got[9] == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("ffe random streams match the oracle") {
    const SymbolStream s = random_symbols(500, 9);
    const FfeTaps taps{-0.15, 0.7, -0.05, 6};
    const auto got = apply_ffe(s, taps);
    const auto want = ffe_oracle(s, -0.15, 0.7, -0.05, 6);
    for (size_t k = 0; k < got.size(); ++k) REQUIRE(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
}

TEST_CASE("ffe dc preservation and swing overflow") {
    const SymbolStream constant(64, 3);
    const FfeTaps taps{-0.125, 0.75, -0.125, 6};
    const auto out = apply_ffe(constant, taps);
    const FfeTaps q = taps.quantized();
    for (double v : out) CHECK(v == doctest::Approx((q.pre + q.main + q.post) * 1.0));

    CHECK_THROWS_AS(apply_ffe(constant, FfeTaps{-0.4, 0.5, -0.2, 6}), ConfigError);
    CHECK_THROWS_AS(apply_ffe(constant, FfeTaps{0.0, -0.5, 0.0, 6}), ConfigError);
}

TEST_CASE("tap quantization is idempotent") {
    const FfeTaps taps{-0.1, 0.8, -0.1, 6};
    const FfeTaps once = taps.quantized();
    const FfeTaps twice = once.quantized();
    CHECK(once.pre == twice.pre);
    CHECK(once.main == twice.main);
    CHECK(once.post == twice.post);
}

TEST_CASE("driver settles to +-diff_swing/2") {
    DriverConfig cfg;
    const std::vector<double> high(20, 1.0);
    const Waveform wave = drive_waveform(high, cfg, 28e9, 16);
    CHECK(wave.unit == SignalUnit::Volts);
    CHECK(wave.samples.back() == doctest::Approx(0.65).epsilon(1e-9));

    const std::vector<double> low(20, -1.0);
    CHECK(drive_waveform(low, cfg, 28e9, 16).samples.back() == doctest::Approx(-0.65).epsilon(1e-9));
}

TEST_CASE("driver single-UI pulse peak follows the single-pole step response") {
    DriverConfig cfg;
    cfg.bandwidth_hz = 0.75 * 28e9;
    std::vector<double> amps(9, 0.0);
    amps[4] = 1.0;
    const Waveform wave = drive_waveform(amps, cfg, 28e9, 16);
    const double peak = *std::max_element(wave.samples.begin(), wave.samples.end());
    // oracle: 0.65 * (1 - exp(-2*pi*0.75)) at the end of the driven UI
    const double expected = 0.65 * (1.0 - std::exp(-2.0 * M_PI * 0.75));
    CHECK(peak == doctest::Approx(expected).epsilon(1e-6));
    CHECK(peak < 0.65);
    CHECK(peak > 0.40);
}

TEST_CASE("driver is linear in the input for |alpha| <= 1") {
    Rng rng(3);
    std::vector<double> amps(40);
    for (auto& a : amps) a = 2.0 * rng.uniform() - 1.0;
    DriverConfig cfg;
    const Waveform full = drive_waveform(amps, cfg, 28e9, 16);
    std::vector<double> half = amps;
    for (auto& a : half) a *= 0.5;
    const Waveform scaled = drive_waveform(half, cfg, 28e9, 16);
    for (size_t i = 0; i < full.samples.size(); ++i) {
        REQUIRE(scaled.samples[i] == doctest::Approx(0.5 * full.samples[i]).epsilon(1e-12));
    }
}

TEST_CASE("driver rejects a low oversampling ratio") {
    CHECK_THROWS_AS(drive_waveform({1.0}, DriverConfig{}, 28e9, 4), ConfigError);
}
