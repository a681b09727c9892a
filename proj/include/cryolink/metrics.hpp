#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cryolink/rx_chain.hpp"
#include "cryolink/waveform.hpp"

namespace cryolink {

// Gaussian tail probability Q(x) = 0.5*erfc(x/sqrt(2)).
double qfunc(double x);

struct EyeRaster {
    size_t phase_bins = 0;     // columns over 2 UI
    size_t amplitude_bins = 0; // rows
    std::vector<uint64_t> counts; // row-major, counts[row*phase_bins + col]
    double amp_min = 0.0;
    double amp_max = 0.0;
    SignalUnit unit = SignalUnit::Volts;

    uint64_t at(size_t row, size_t col) const { return counts[row * phase_bins + col]; }
    uint64_t total() const;
};

// Folds sample times modulo 2 UI relative to phase_ref and accumulates the
// 2-D histogram.
EyeRaster eye_raster(const Waveform& signal, double phase_ref_ui, size_t phase_bins, size_t amplitude_bins);

struct OmaEr {
    double oma_dbm = 0.0;
    double er_db = 0.0;
    bool degenerate = false; // P3 == P0, no modulation
};

// Outer OMA/ER from the four sorted optical level powers (mW).
OmaEr oma_er(const std::array<double, 4>& levels_mw);

// Sorted quartile means of a sample set: the four PAM level estimates.
std::array<double, 4> quartile_level_means(std::vector<double> samples);

enum class BathtubMethod { Counted, Extrapolated };

struct LevelSample {
    uint8_t tx_level;
    double volts;
};

// Produces, for a given sampling phase offset, the slicer-input voltage of
// each transmitted symbol paired with its level. The harness binds this to
// a full link run in external-clock mode.
using PhaseSampler = std::function<std::vector<LevelSample>(double phase_ui)>;

struct BathtubPoint {
    double phase_ui = 0.0;
    double ber = 0.0;
    BathtubMethod method = BathtubMethod::Counted;
    std::array<double, 4> level_mean{};  // filled in extrapolated mode
    std::array<double, 4> level_sigma{};
};

struct BathtubCurve {
    std::vector<BathtubPoint> points;
    double oma_dbm = 0.0;
};

// Counted mode slices every sample against the thresholds and counts
// Gray-decoded bit errors. Extrapolated mode fits a per-level Gaussian and
// evaluates SER as the mean over the six threshold tail terms; BER = SER/2
// (Gray: dominant errors are adjacent-level, one bit of two).
BathtubCurve bathtub(const PhaseSampler& sampler, const std::vector<double>& phases, BathtubMethod method,
                     const SlicerThresholds& thresholds);

struct UiOpening {
    double width_ui = 0.0;
    bool reaches_target = false;
};

// Width of the contiguous phase interval around the curve minimum where
// ber <= target, log-linear interpolated between points.
UiOpening ui_opening(const BathtubCurve& curve, double target_ber);

// power_mW / rate_Gbps = pJ/bit.
double energy_efficiency(double power_mw, double rate_gbps);

enum class LinkMedium { Coax, Fiber };

struct HeatLoad {
    double load_4k_mw = 0.0;
    double load_50k_mw = 0.0;
};

// Static per-cable arithmetic: each coax lane conducts 0.35 mW to the 4K
// stage and 7 mW to 50K; fiber defaults to zero thermal conduction.
HeatLoad heat_load_compare(LinkMedium medium, int lanes, double fiber_4k_mw_per_lane = 0.0,
                           double fiber_50k_mw_per_lane = 0.0);

struct PowerEntry {
    std::string label;
    double power_mw = 0.0;
    double rate_gbps = 0.0;
    double pj_per_bit = 0.0;
};

struct HeatEntry {
    std::string medium;
    int lanes = 0;
    HeatLoad load;
};

struct BudgetReport {
    std::vector<PowerEntry> power;
    std::vector<HeatEntry> heat;
};

struct CalibrationTarget {
    double oma_dbm = -1.0;
    double ui_opening = 0.18;
    double ber = 1e-8;
};

struct CalibrationResult {
    double density_pa_rthz = 0.0;
    double achieved_opening_ui = 0.0;
    BathtubCurve curve;
};

// Bisection on the rx input noise density until the extrapolated bathtub
// opening at the target BER matches the requested UI opening. `run` maps a
// candidate density to its bathtub curve; opening is monotone decreasing in
// the density, which provides the bracket.
CalibrationResult calibrate_noise(const std::function<BathtubCurve(double density_pa_rthz)>& run,
                                  const CalibrationTarget& target, double tol_ui = 0.01);

} // namespace cryolink
