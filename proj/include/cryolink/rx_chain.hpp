#pragma once

#include <cstdint>
#include <vector>

#include "cryolink/pattern.hpp"
#include "cryolink/tx_chain.hpp"
#include "cryolink/waveform.hpp"

namespace cryolink {

// Front end: one pole at 0.7 x baud absorbs the PD RC, T-coil peaking and
// the TIA stages; only the composite bandwidth is observable downstream.
struct TiaConfig {
    double transimpedance_ohm = 2100.0;
    double bandwidth_hz = 19.6e9;
    double input_noise_density_pa_rthz = 13.41; // calibrated, see config report
    double dc_comp_cutoff_hz = 1e6;
    bool dc_comp_enabled = true;

    void validate() const;
};

struct SlicerThresholds {
    double t_low = 0.0;
    double t_mid = 0.0;
    double t_high = 0.0;

    void validate() const;
};

// v = Z_T * LP(i + n_in); n_in is white Gaussian current noise at the
// configured density; DC compensation subtracts a slow tracker of the
// signal (first-order high-pass at dc_comp_cutoff).
Waveform tia_amplify(const Waveform& current, const TiaConfig& cfg, bool noise_enabled, uint64_t rng_seed);

// Quartile clustering of eye-center samples: thresholds at the midpoints
// of adjacent cluster means. Throws when a level is missing (cluster gap
// collapses below 5% of the span).
SlicerThresholds thresholds_from_samples(std::vector<double> eye_center_samples);

// Samples the training waveform at eye centers (k + phase_ui per symbol),
// splits the sorted samples into four quartile clusters and places the
// thresholds at adjacent cluster-mean midpoints.
SlicerThresholds adapt_thresholds(const Waveform& training, double phase_ui);

// Per instant (waveform-UI units): linear-interpolate, compare against the
// three thresholds. Ties break upward (>= threshold maps to the upper level).
SymbolStream slice_pam4(const Waveform& signal, const SlicerThresholds& thresholds,
                        const std::vector<double>& sample_instants_ui);

// Inverse of serialize_lanes; a tail shorter than 8 symbols is dropped.
LaneGroup deserialize_lanes(const SymbolStream& serial);

} // namespace cryolink
