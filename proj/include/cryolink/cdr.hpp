#pragma once

#include <cstdint>
#include <vector>

#include "cryolink/errors.hpp"
#include "cryolink/waveform.hpp"

namespace cryolink {

// Half-rate LC VCO: 5-bit capacitance bank for coarse tuning plus a linear
// varactor term, f = f_min + code*(f_max-f_min)/(2^bits-1) + kvco*vctrl.
struct VcoConfig {
    double f_min_hz = 13.5e9;
    double f_max_hz = 14.6e9;
    int bank_bits = 5;
    double kvco_hz_per_v = 100e6;

    int max_code() const { return (1 << bank_bits) - 1; }
    double code_step_hz() const { return (f_max_hz - f_min_hz) / max_code(); }
    void validate() const;
};

double vco_frequency(const VcoConfig& cfg, int code, double vctrl_v);

// Coarse tuning: code minimizing |f(code, 0) - target|, ties toward the
// lower code; the residual is absorbed by vctrl.
int band_select(double target_hz, const VcoConfig& cfg);

enum class Vote : int { Early = -1, Hold = 0, Late = +1 };

// Alexander rule on mid-slicer (MSB) decisions. EARLY/LATE name the data
// edge's timing relative to the edge clock: edge sample already equal to
// the new bit means the crossing preceded the edge clock (vote EARLY, the
// sampling phase has advanced too far); edge sample still equal to the old
// bit votes LATE.
Vote bbpd_vote(bool d_prev, bool edge, bool d_curr);

struct LoopState {
    double phase_ui = 0.0;    // sampling-phase accumulator, nominal UI
    double integrator_v = 0.0;
    double vctrl_v = 0.0;
    double kp_v_per_vote = 0.3;
    double ki_v_per_vote = 2e-4;
    bool saturated = false;
    bool locked = false;

    void validate() const;
};

// Discrete PI per vote: integrator += ki*s (clamped to +-1 V), then
// vctrl = integrator + kp*s with s in {-1, 0, +1}.
void loop_update(LoopState& state, Vote vote);

struct CdrConfig {
    VcoConfig vco;
    double baud_nominal_hz = 28e9;
    double kp_v_per_vote = 0.3;
    double ki_v_per_vote = 2e-4;
    double reset_phase_ui = 0.9; // near the front-end group-delay eye center
    double bbpd_threshold_v = 0.0; // mid-rail after DC compensation
    size_t lock_budget_symbols = 8000;
    size_t lock_window_symbols = 500;
    double lock_vote_threshold = 0.3;  // |mean vote| over the trailing window
    double lock_wander_ui = 0.1;       // peak-to-peak phase over the window
    double jitter_rw_ui = 0.0;         // optional VCO random-walk, off by default
    uint64_t seed = 0;

    void validate() const;
};

struct CdrTraceRow {
    double phase_ui;
    double vctrl_v;
    int vote;
};

struct CdrMode {
    bool external = false;
    double external_phase_ui = 0.0;

    static CdrMode closed_loop() { return {false, 0.0}; }
    static CdrMode external_clock(double phase_ui) { return {true, phase_ui}; }
};

struct CdrResult {
    std::vector<double> data_instants_ui; // one per symbol, waveform-UI units
    std::vector<CdrTraceRow> trace;
    bool locked = false;
    size_t lock_symbol = 0;
    int band_code = 0;
    double locked_phase_ui = 0.0; // mean data-sampling phase mod 1, trailing window
};

class CdrAcquisitionError : public AcquisitionError {
public:
    CdrAcquisitionError(const std::string& what, std::vector<CdrTraceRow> trace)
        : AcquisitionError(what), trace(std::move(trace)) {}
    std::vector<CdrTraceRow> trace;
};

// Closed loop: band-select to baud/2, then per-symbol BBPD votes through
// the PI filter steer the sampling instants; per half-rate period the phase
// advances by (f_vco/f_half - 1) UI. Declared locked once the trailing
// window shows |mean vote| below threshold and bounded phase wander.
// External mode pins instants to the given UI phase, mirroring a bathtub
// sweep driven from an off-chip clock with the loop disabled.
CdrResult recover_clock(const Waveform& signal, const CdrConfig& cfg, const CdrMode& mode);

// Open-loop S-curve probe: average BBPD vote with the sampling phase held
// fixed. The zero crossing of the S-curve marks the eye center.
double bbpd_mean_vote(const Waveform& signal, double phase_ui, size_t n_symbols, double threshold_v);

} // namespace cryolink
