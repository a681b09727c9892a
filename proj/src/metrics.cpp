#include "cryolink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cryolink/errors.hpp"
#include "cryolink/pattern.hpp"

namespace cryolink {

double qfunc(double x) { return 0.5 * std::erfc(x / M_SQRT2); }

uint64_t EyeRaster::total() const {
    uint64_t sum = 0;
    for (uint64_t c : counts) sum += c;
    return sum;
}

EyeRaster eye_raster(const Waveform& signal, double phase_ref_ui, size_t phase_bins, size_t amplitude_bins) {
    if (phase_bins < 8 || amplitude_bins < 8) throw ConfigError("eye_raster: need at least 8 bins per axis");
    if (signal.duration_ui() < 100.0) throw ConfigError("eye_raster: signal shorter than 100 UI");

    EyeRaster raster;
    raster.phase_bins = phase_bins;
    raster.amplitude_bins = amplitude_bins;
    raster.unit = signal.unit;
    raster.counts.assign(phase_bins * amplitude_bins, 0);

    const auto [mn, mx] = std::minmax_element(signal.samples.begin(), signal.samples.end());
    raster.amp_min = *mn;
    raster.amp_max = *mx;
    const double amp_span = raster.amp_max - raster.amp_min;

    for (size_t i = 0; i < signal.samples.size(); ++i) {
        const double t_ui = static_cast<double>(i) / signal.samples_per_ui;
        double folded = std::fmod(t_ui - phase_ref_ui, 2.0);
        if (folded < 0.0) folded += 2.0;
        auto col = static_cast<size_t>(folded / 2.0 * static_cast<double>(phase_bins));
        if (col >= phase_bins) col = phase_bins - 1;
        size_t row = 0;
        if (amp_span > 0.0) {
            row = static_cast<size_t>((signal.samples[i] - raster.amp_min) / amp_span *
                                      static_cast<double>(amplitude_bins));
            if (row >= amplitude_bins) row = amplitude_bins - 1;
        }
        ++raster.counts[row * phase_bins + col];
    }
    return raster;
}

OmaEr oma_er(const std::array<double, 4>& levels_mw) {
    for (size_t i = 1; i < levels_mw.size(); ++i) {
        if (levels_mw[i] < levels_mw[i - 1]) throw ConfigError("oma_er: levels must be sorted ascending");
    }
    if (levels_mw[0] <= 0.0) throw ConfigError("extinction undefined: lowest level power is not positive");
    OmaEr result;
    if (levels_mw[3] == levels_mw[0]) {
        result.degenerate = true;
        result.oma_dbm = -std::numeric_limits<double>::infinity();
        result.er_db = 0.0;
        return result;
    }
    result.oma_dbm = 10.0 * std::log10(levels_mw[3] - levels_mw[0]);
    result.er_db = 10.0 * std::log10(levels_mw[3] / levels_mw[0]);
    return result;
}

std::array<double, 4> quartile_level_means(std::vector<double> samples) {
    if (samples.size() < 4) throw StatsError("quartile_level_means: need at least 4 samples");
    std::sort(samples.begin(), samples.end());
    std::array<double, 4> means{};
    const size_t n = samples.size();
    for (size_t c = 0; c < 4; ++c) {
        const size_t lo = n * c / 4;
        const size_t hi = n * (c + 1) / 4;
        double sum = 0.0;
        for (size_t i = lo; i < hi; ++i) sum += samples[i];
        means[c] = sum / static_cast<double>(hi - lo);
    }
    return means;
}

namespace {

// tail probability of a level mean falling past a threshold
double tail(double margin, double sigma) {
    if (sigma <= 0.0) return margin > 0.0 ? 0.0 : (margin < 0.0 ? 1.0 : 0.5);
    return qfunc(margin / sigma);
}

BathtubPoint evaluate_phase(double phase, const std::vector<LevelSample>& samples, BathtubMethod method,
                            const SlicerThresholds& th) {
    std::array<std::vector<double>, 4> by_level;
    for (const auto& s : samples) by_level[s.tx_level & 3].push_back(s.volts);
    for (const auto& v : by_level) {
        if (v.size() < 50) {
            throw StatsError("insufficient statistics: a level has fewer than 50 samples at phase " +
                             std::to_string(phase));
        }
    }

    BathtubPoint point;
    point.phase_ui = phase;
    point.method = method;

    if (method == BathtubMethod::Counted) {
        uint64_t bit_errors = 0;
        for (const auto& s : samples) {
            uint8_t level = 0;
            if (s.volts >= th.t_low) level = 1;
            if (s.volts >= th.t_mid) level = 2;
            if (s.volts >= th.t_high) level = 3;
            if (level != s.tx_level) {
                int wb0, wb1, gb0, gb1;
                gray_unmap(s.tx_level, wb0, wb1);
                gray_unmap(level, gb0, gb1);
                bit_errors += static_cast<uint64_t>(wb0 != gb0) + static_cast<uint64_t>(wb1 != gb1);
            }
        }
        point.ber =
            std::min(0.5, static_cast<double>(bit_errors) / (2.0 * static_cast<double>(samples.size())));
        return point;
    }

    for (size_t l = 0; l < 4; ++l) {
        double mean = 0.0;
        for (double v : by_level[l]) mean += v;
        mean /= static_cast<double>(by_level[l].size());
        double var = 0.0;
        for (double v : by_level[l]) var += (v - mean) * (v - mean);
        var /= static_cast<double>(by_level[l].size() - 1);
        point.level_mean[l] = mean;
        point.level_sigma[l] = std::sqrt(var);
    }

    const double thresholds[3] = {th.t_low, th.t_mid, th.t_high};
    double ser = 0.0;
    for (int b = 0; b < 3; ++b) {
        ser += tail(thresholds[b] - point.level_mean[b], point.level_sigma[b]);
        ser += tail(point.level_mean[b + 1] - thresholds[b], point.level_sigma[b + 1]);
    }
    ser /= 4.0; // equiprobable levels
    point.ber = std::min(0.5, ser / 2.0);
    return point;
}

} // namespace

BathtubCurve bathtub(const PhaseSampler& sampler, const std::vector<double>& phases, BathtubMethod method,
                     const SlicerThresholds& thresholds) {
    thresholds.validate();
    BathtubCurve curve;
    curve.points.reserve(phases.size());
    for (double phase : phases) {
        curve.points.push_back(evaluate_phase(phase, sampler(phase), method, thresholds));
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const BathtubPoint& a, const BathtubPoint& b) { return a.phase_ui < b.phase_ui; });
    return curve;
}

namespace {

constexpr double kLogFloor = 1e-30;

double log_ber(double ber) { return std::log10(std::max(ber, kLogFloor)); }

// phase where log-interpolated ber crosses the target, between two points
double cross_phase(const BathtubPoint& inside, const BathtubPoint& outside, double target) {
    const double li = log_ber(inside.ber);
    const double lo = log_ber(outside.ber);
    const double lt = std::log10(target);
    if (lo == li) return outside.phase_ui;
    const double f = (lt - li) / (lo - li);
    return inside.phase_ui + f * (outside.phase_ui - inside.phase_ui);
}

} // namespace

UiOpening ui_opening(const BathtubCurve& curve, double target_ber) {
    if (curve.points.size() < 2) throw ConfigError("ui_opening: curve needs at least 2 points");
    if (target_ber <= 0.0) throw ConfigError("ui_opening: target BER must be positive");

    size_t min_idx = 0;
    for (size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].ber < curve.points[min_idx].ber) min_idx = i;
    }
    if (curve.points[min_idx].ber > target_ber) return {0.0, false};

    size_t left = min_idx;
    while (left > 0 && curve.points[left - 1].ber <= target_ber) --left;
    size_t right = min_idx;
    while (right + 1 < curve.points.size() && curve.points[right + 1].ber <= target_ber) ++right;

    double left_phase = curve.points[left].phase_ui;
    if (left > 0) left_phase = cross_phase(curve.points[left], curve.points[left - 1], target_ber);
    double right_phase = curve.points[right].phase_ui;
    if (right + 1 < curve.points.size()) {
        right_phase = cross_phase(curve.points[right], curve.points[right + 1], target_ber);
    }
    return {right_phase - left_phase, true};
}

double energy_efficiency(double power_mw, double rate_gbps) {
    if (rate_gbps <= 0.0) throw ConfigError("energy_efficiency: rate must be positive");
    return power_mw / rate_gbps;
}

HeatLoad heat_load_compare(LinkMedium medium, int lanes, double fiber_4k_mw_per_lane,
                           double fiber_50k_mw_per_lane) {
    if (lanes < 1) throw ConfigError("heat_load_compare: lanes must be >= 1");
    constexpr double kCoax4kMwPerLane = 0.35;
    constexpr double kCoax50kMwPerLane = 7.0;
    const double n = static_cast<double>(lanes);
    if (medium == LinkMedium::Coax) return {kCoax4kMwPerLane * n, kCoax50kMwPerLane * n};
    return {fiber_4k_mw_per_lane * n, fiber_50k_mw_per_lane * n};
}

CalibrationResult calibrate_noise(const std::function<BathtubCurve(double density_pa_rthz)>& run,
                                  const CalibrationTarget& target, double tol_ui) {
    auto opening_at = [&](double density) {
        BathtubCurve curve = run(density);
        return std::make_pair(ui_opening(curve, target.ber).width_ui, std::move(curve));
    };

    double lo = 0.0;
    auto [lo_open, lo_curve] = opening_at(lo);
    if (lo_open < target.ui_opening - tol_ui) {
        throw ConfigError("target unreachable with current link settings: opening too small even without noise");
    }
    if (std::abs(lo_open - target.ui_opening) <= tol_ui) return {lo, lo_open, std::move(lo_curve)};

    double hi = 10.0;
    double hi_open = 0.0;
    BathtubCurve hi_curve;
    for (int i = 0; i < 24; ++i) {
        std::tie(hi_open, hi_curve) = opening_at(hi);
        if (hi_open < target.ui_opening) break;
        hi *= 2.0;
        if (i == 23) throw ConfigError("target unreachable: opening stays above target at extreme noise");
    }

    CalibrationResult best{hi, hi_open, std::move(hi_curve)};
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        auto [mid_open, mid_curve] = opening_at(mid);
        if (std::abs(mid_open - target.ui_opening) < std::abs(best.achieved_opening_ui - target.ui_opening)) {
            best = {mid, mid_open, std::move(mid_curve)};
        }
        if (std::abs(mid_open - target.ui_opening) <= tol_ui || (hi - lo) < 1e-4 * hi) break;
        if (mid_open > target.ui_opening) {
            lo = mid; // more noise needed to shrink the opening
        } else {
            hi = mid;
        }
    }
    return best;
}

} // namespace cryolink
