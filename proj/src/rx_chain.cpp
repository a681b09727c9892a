#include "cryolink/rx_chain.hpp"

#include <algorithm>
#include <cmath>

#include "cryolink/errors.hpp"
#include "cryolink/rng.hpp"

namespace cryolink {

void TiaConfig::validate() const {
    if (transimpedance_ohm <= 0.0) throw ConfigError("tia.transimpedance must be positive");
    if (bandwidth_hz <= 0.0) throw ConfigError("tia.bandwidth must be positive");
    if (input_noise_density_pa_rthz < 0.0) throw ConfigError("tia.input_noise_density must be >= 0");
    if (dc_comp_enabled && dc_comp_cutoff_hz >= bandwidth_hz / 100.0) {
        throw ConfigError("tia.dc_comp_cutoff must sit far below the front-end bandwidth");
    }
}

void SlicerThresholds::validate() const {
    if (!(t_low < t_mid && t_mid < t_high)) throw ConfigError("slicer thresholds must be ordered");
}

Waveform tia_amplify(const Waveform& current, const TiaConfig& cfg, bool noise_enabled, uint64_t rng_seed) {
    cfg.validate();
    if (current.unit != SignalUnit::MilliAmps) throw ConfigError("tia_amplify: waveform must be a current");
    const double fs = current.sample_rate_hz();

    std::vector<double> in = current.samples;
    if (noise_enabled && cfg.input_noise_density_pa_rthz > 0.0) {
        // white density integrated over the Nyquist band, pA/rtHz -> mA
        const double sigma_ma = cfg.input_noise_density_pa_rthz * 1e-12 * std::sqrt(fs / 2.0) * 1e3;
        Rng rng(rng_seed);
        for (auto& s : in) s += sigma_ma * rng.gaussian();
    }

    std::vector<double> filtered = single_pole_lowpass(in, cfg.bandwidth_hz, fs);
    const double zt_v_per_ma = cfg.transimpedance_ohm * 1e-3;
    for (auto& s : filtered) s *= zt_v_per_ma;
    if (cfg.dc_comp_enabled) filtered = single_pole_highpass(filtered, cfg.dc_comp_cutoff_hz, fs);

    Waveform out = current;
    out.unit = SignalUnit::Volts;
    out.samples = std::move(filtered);
    return out;
}

SlicerThresholds thresholds_from_samples(std::vector<double> eye_center_samples) {
    std::sort(eye_center_samples.begin(), eye_center_samples.end());

    double means[4];
    const size_t n = eye_center_samples.size();
    for (size_t c = 0; c < 4; ++c) {
        const size_t lo = n * c / 4;
        const size_t hi = n * (c + 1) / 4;
        double sum = 0.0;
        for (size_t i = lo; i < hi; ++i) sum += eye_center_samples[i];
        means[c] = sum / static_cast<double>(hi - lo);
    }

    const double span = means[3] - means[0];
    const double min_gap = std::min({means[1] - means[0], means[2] - means[1], means[3] - means[2]});
    if (span <= 0.0 || min_gap < 0.05 * span) {
        throw StatsError("insufficient level coverage: fewer than four distinct levels in training data");
    }

    SlicerThresholds th;
    th.t_low = 0.5 * (means[0] + means[1]);
    th.t_mid = 0.5 * (means[1] + means[2]);
    th.t_high = 0.5 * (means[2] + means[3]);
    th.validate();
    return th;
}

SlicerThresholds adapt_thresholds(const Waveform& training, double phase_ui) {
    const auto n_symbols = static_cast<size_t>(training.duration_ui() - std::max(phase_ui, 0.0));
    if (n_symbols < 500) throw StatsError("adapt_thresholds: need at least 500 training symbols");

    std::vector<double> sampled;
    sampled.reserve(n_symbols);
    for (size_t k = 0; k < n_symbols; ++k) {
        sampled.push_back(training.value_at_ui(static_cast<double>(k) + phase_ui));
    }
    return thresholds_from_samples(std::move(sampled));
}

SymbolStream slice_pam4(const Waveform& signal, const SlicerThresholds& thresholds,
                        const std::vector<double>& sample_instants_ui) {
    thresholds.validate();
    SymbolStream out(sample_instants_ui.size());
    for (size_t i = 0; i < sample_instants_ui.size(); ++i) {
        const double v = signal.value_at_ui(sample_instants_ui[i]);
        uint8_t level = 0;
        if (v >= thresholds.t_low) level = 1;
        if (v >= thresholds.t_mid) level = 2;
        if (v >= thresholds.t_high) level = 3;
        out[i] = level;
    }
    return out;
}

LaneGroup deserialize_lanes(const SymbolStream& serial) {
    const size_t lane_len = serial.size() / LaneGroup::kLanes;
    LaneGroup group;
    for (auto& lane : group.lanes) lane.resize(lane_len);
    for (size_t j = 0; j < lane_len; ++j) {
        for (size_t i = 0; i < LaneGroup::kLanes; ++i) {
            group.lanes[i][j] = serial[LaneGroup::kLanes * j + i];
        }
    }
    return group;
}

} // namespace cryolink
