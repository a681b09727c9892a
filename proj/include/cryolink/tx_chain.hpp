#pragma once

#include <array>
#include <vector>

#include "cryolink/pattern.hpp"
#include "cryolink/waveform.hpp"

namespace cryolink {

// 3-tap FFE weights in full-scale fractions. |pre|+|main|+|post| must not
// exceed 1: a source-series-terminated driver cannot swing past full scale.
// Weights are quantized to the IDAC resolution before use. The default is
// one IDAC step of post-cursor de-emphasis, cancelling the front-end pole
// tails at nearly full swing.
struct FfeTaps {
    double pre = 0.0;
    double main = 62.0 / 63.0;
    double post = -1.0 / 63.0;
    int idac_bits = 6;

    FfeTaps quantized() const;
    void validate() const;
};

// Eight parallel symbol lanes of equal length, each running at baud/8.
struct LaneGroup {
    static constexpr size_t kLanes = 8;
    std::array<SymbolStream, kLanes> lanes;

    size_t lane_length() const { return lanes[0].size(); }
    void validate() const;
};

struct DriverConfig {
    double diff_swing_v = 1.3;
    double bandwidth_hz = 21e9; // single pole, 0.75 x baud at 28 GBaud

    void validate() const;
};

// 2:1 MUX tree, round-robin order: serial[k] = lanes[k mod 8][k div 8].
SymbolStream serialize_lanes(const LaneGroup& group);

// Inverse chunking, lanes[i][j] = serial[8*j + i]. Convenience for feeding
// a serial test pattern through the MUX path.
LaneGroup lanes_from_serial(const SymbolStream& serial);

// Maps levels 0..3 to amplitudes {-1,-1/3,+1/3,+1} and applies the 3-tap
// FIR: out[k] = pre*a[k+1] + main*a[k] + post*a[k-1], edge-hold at the
// boundaries. Taps are IDAC-quantized first.
std::vector<double> apply_ffe(const SymbolStream& symbols, const FfeTaps& taps);

// Zero-order hold at osr samples per UI scaled to +-diff_swing/2, then a
// single-pole low-pass at the driver bandwidth.
Waveform drive_waveform(const std::vector<double>& amplitudes, const DriverConfig& cfg, double baud_hz,
                        double osr);

inline double level_amplitude(uint8_t level) { return (2.0 * static_cast<double>(level) - 3.0) / 3.0; }

} // namespace cryolink
