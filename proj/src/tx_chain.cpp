#include "cryolink/tx_chain.hpp"

#include <cmath>

#include "cryolink/errors.hpp"

namespace cryolink {

FfeTaps FfeTaps::quantized() const {
    if (idac_bits < 1 || idac_bits > 16) throw ConfigError("ffe.idac_bits out of [1,16]");
    const double step = 1.0 / static_cast<double>((1 << idac_bits) - 1);
    FfeTaps q = *this;
    q.pre = step * std::round(pre / step);
    q.main = step * std::round(main / step);
    q.post = step * std::round(post / step);
    return q;
}

void FfeTaps::validate() const {
    if (std::abs(pre) + std::abs(main) + std::abs(post) > 1.0 + 1e-12) {
        throw ConfigError("swing overflow: |pre|+|main|+|post| exceeds full scale");
    }
    if (main <= 0.0) throw ConfigError("ffe.main must be positive");
}

void LaneGroup::validate() const {
    const size_t len = lanes[0].size();
    for (const auto& lane : lanes) {
        if (lane.size() != len) throw ConfigError("lane group: lanes have unequal lengths");
    }
}

void DriverConfig::validate() const {
    if (diff_swing_v <= 0.0) throw ConfigError("driver.diff_swing must be positive");
    if (bandwidth_hz <= 0.0) throw ConfigError("driver.bandwidth must be positive");
}

SymbolStream serialize_lanes(const LaneGroup& group) {
    group.validate();
    if (group.lane_length() == 0) throw ConfigError("serialize_lanes: lanes are empty");
    SymbolStream serial(group.lane_length() * LaneGroup::kLanes);
    for (size_t k = 0; k < serial.size(); ++k) {
        serial[k] = group.lanes[k % LaneGroup::kLanes][k / LaneGroup::kLanes];
    }
    return serial;
}

LaneGroup lanes_from_serial(const SymbolStream& serial) {
    LaneGroup group;
    const size_t lane_len = serial.size() / LaneGroup::kLanes;
    for (auto& lane : group.lanes) lane.resize(lane_len);
    for (size_t j = 0; j < lane_len; ++j) {
        for (size_t i = 0; i < LaneGroup::kLanes; ++i) {
            group.lanes[i][j] = serial[LaneGroup::kLanes * j + i];
        }
    }
    return group;
}

std::vector<double> apply_ffe(const SymbolStream& symbols, const FfeTaps& taps) {
    const FfeTaps q = taps.quantized();
    q.validate();
    const size_t n = symbols.size();
    std::vector<double> out(n);
    if (n == 0) return out;
    auto amp = [&](size_t k) { return level_amplitude(symbols[k]); };
    for (size_t k = 0; k < n; ++k) {
        const double next = amp(k + 1 < n ? k + 1 : n - 1); // edge-hold
        const double prev = amp(k > 0 ? k - 1 : 0);
        out[k] = q.pre * next + q.main * amp(k) + q.post * prev;
    }
    return out;
}

Waveform drive_waveform(const std::vector<double>& amplitudes, const DriverConfig& cfg, double baud_hz,
                        double osr) {
    cfg.validate();
    if (osr < 8.0) throw ConfigError("osr must be >= 8 samples per UI");
    const auto n_per_ui = static_cast<size_t>(osr);
    std::vector<double> held(amplitudes.size() * n_per_ui);
    const double half_swing = cfg.diff_swing_v / 2.0;
    for (size_t k = 0; k < amplitudes.size(); ++k) {
        const double v = amplitudes[k] * half_swing;
        for (size_t s = 0; s < n_per_ui; ++s) held[k * n_per_ui + s] = v;
    }
    Waveform wave;
    wave.unit = SignalUnit::Volts;
    wave.baud_hz = baud_hz;
    wave.samples_per_ui = static_cast<double>(n_per_ui);
    wave.samples = single_pole_lowpass(held, cfg.bandwidth_hz, baud_hz * static_cast<double>(n_per_ui));
    return wave;
}

} // namespace cryolink
