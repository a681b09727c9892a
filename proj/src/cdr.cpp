#include "cryolink/cdr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cryolink/rng.hpp"

namespace cryolink {

void VcoConfig::validate() const {
    if (f_min_hz <= 0.0 || f_max_hz <= f_min_hz) throw ConfigError("vco: need 0 < f_min < f_max");
    if (bank_bits < 1 || bank_bits > 8) throw ConfigError("vco.bank_bits out of [1,8]");
    if (kvco_hz_per_v <= 0.0) throw ConfigError("vco.kvco must be positive");
}

double vco_frequency(const VcoConfig& cfg, int code, double vctrl_v) {
    cfg.validate();
    if (code < 0 || code > cfg.max_code()) {
        throw ConfigError("vco code out of range 0.." + std::to_string(cfg.max_code()));
    }
    return cfg.f_min_hz + static_cast<double>(code) * cfg.code_step_hz() + cfg.kvco_hz_per_v * vctrl_v;
}

int band_select(double target_hz, const VcoConfig& cfg) {
    cfg.validate();
    const double step = cfg.code_step_hz();
    if (target_hz < cfg.f_min_hz - step / 2.0 || target_hz > cfg.f_max_hz + step / 2.0) {
        throw ConfigError("band unreachable: target outside the VCO tuning range");
    }
    int best = 0;
    double best_err = std::abs(vco_frequency(cfg, 0, 0.0) - target_hz);
    for (int code = 1; code <= cfg.max_code(); ++code) {
        const double err = std::abs(vco_frequency(cfg, code, 0.0) - target_hz);
        if (err < best_err) { // strict: ties keep the lower code
            best_err = err;
            best = code;
        }
    }
    return best;
}

Vote bbpd_vote(bool d_prev, bool edge, bool d_curr) {
    if (d_prev == d_curr) return Vote::Hold;
    return edge == d_curr ? Vote::Early : Vote::Late;
}

void LoopState::validate() const {
    if (kp_v_per_vote <= 0.0 || ki_v_per_vote <= 0.0) throw ConfigError("cdr gains must be positive");
    if (kp_v_per_vote / ki_v_per_vote < 50.0) throw ConfigError("cdr: kp/ki must be >= 50");
}

void loop_update(LoopState& state, Vote vote) {
    const double s = static_cast<double>(static_cast<int>(vote));
    state.integrator_v += state.ki_v_per_vote * s;
    if (state.integrator_v > 1.0) {
        state.integrator_v = 1.0;
        state.saturated = true;
    } else if (state.integrator_v < -1.0) {
        state.integrator_v = -1.0;
        state.saturated = true;
    }
    state.vctrl_v = state.integrator_v + state.kp_v_per_vote * s;
}

void CdrConfig::validate() const {
    vco.validate();
    if (baud_nominal_hz <= 0.0) throw ConfigError("cdr: nominal baud must be positive");
    LoopState gains;
    gains.kp_v_per_vote = kp_v_per_vote;
    gains.ki_v_per_vote = ki_v_per_vote;
    gains.validate();
    if (lock_window_symbols < 2) throw ConfigError("cdr.lock_window too small");
}

namespace {

bool slice_msb(const Waveform& wave, double t_ui, double threshold) {
    return wave.value_at_ui(t_ui) >= threshold;
}

} // namespace

CdrResult recover_clock(const Waveform& signal, const CdrConfig& cfg, const CdrMode& mode) {
    cfg.validate();
    const double duration = signal.duration_ui();
    const auto n_symbols = static_cast<size_t>(std::max(0.0, duration - 2.0));

    CdrResult result;
    if (mode.external) {
        // off-chip reference: exact frequency, fixed phase
        result.locked = true;
        result.band_code = band_select(cfg.baud_nominal_hz / 2.0, cfg.vco);
        result.locked_phase_ui = mode.external_phase_ui - std::floor(mode.external_phase_ui);
        for (size_t k = 0; k < n_symbols; ++k) {
            const double t = static_cast<double>(k) + mode.external_phase_ui;
            if (t < 0.0) continue;
            if (t > duration - 1.0) break;
            result.data_instants_ui.push_back(t);
        }
        return result;
    }

    if (n_symbols < 2000) {
        throw ConfigError("recover_clock: closed loop needs at least 2000 symbols");
    }

    const double f_half = cfg.baud_nominal_hz / 2.0;
    result.band_code = band_select(f_half, cfg.vco);
    const double f_band = vco_frequency(cfg.vco, result.band_code, 0.0);
    const double ui_scale = signal.baud_hz / cfg.baud_nominal_hz; // nominal UI -> waveform UI

    LoopState state;
    state.kp_v_per_vote = cfg.kp_v_per_vote;
    state.ki_v_per_vote = cfg.ki_v_per_vote;
    state.phase_ui = cfg.reset_phase_ui;

    Rng jitter_rng(Rng::derive(cfg.seed, 0xcd7));

    std::deque<int> votes;
    std::deque<double> phases;
    double vote_sum = 0.0;

    result.trace.reserve(n_symbols);
    result.data_instants_ui.reserve(n_symbols);

    bool have_prev = false;
    bool d_prev = false;
    double prev_data_t = 0.0;

    for (size_t k = 0; k < n_symbols; ++k) {
        const double data_t = (static_cast<double>(k) + state.phase_ui) * ui_scale;
        if (data_t > duration - 1.0) break;
        result.data_instants_ui.push_back(data_t);

        Vote vote = Vote::Hold;
        if (have_prev) {
            const double edge_t = 0.5 * (prev_data_t + data_t);
            const bool edge = slice_msb(signal, edge_t, cfg.bbpd_threshold_v);
            const bool d_curr = slice_msb(signal, data_t, cfg.bbpd_threshold_v);
            vote = bbpd_vote(d_prev, edge, d_curr);
            d_prev = d_curr;
        } else {
            d_prev = slice_msb(signal, data_t, cfg.bbpd_threshold_v);
            have_prev = true;
        }
        prev_data_t = data_t;

        loop_update(state, vote);
        double f_vco = f_band + cfg.vco.kvco_hz_per_v * state.vctrl_v;
        // half-rate period covers two UI; integrate half the advance per symbol
        state.phase_ui += 0.5 * (f_vco / f_half - 1.0);
        if (cfg.jitter_rw_ui > 0.0) state.phase_ui += cfg.jitter_rw_ui * jitter_rng.gaussian();

        result.trace.push_back({data_t - static_cast<double>(k), state.vctrl_v, static_cast<int>(vote)});

        votes.push_back(static_cast<int>(vote));
        vote_sum += static_cast<double>(static_cast<int>(vote));
        phases.push_back(data_t - static_cast<double>(k));
        if (votes.size() > cfg.lock_window_symbols) {
            vote_sum -= votes.front();
            votes.pop_front();
            phases.pop_front();
        }

        if (!result.locked && votes.size() == cfg.lock_window_symbols) {
            const auto [mn, mx] = std::minmax_element(phases.begin(), phases.end());
            const double mean_vote = vote_sum / static_cast<double>(votes.size());
            if (std::abs(mean_vote) < cfg.lock_vote_threshold && (*mx - *mn) < cfg.lock_wander_ui) {
                result.locked = true;
                result.lock_symbol = k;
            }
        }
        if (!result.locked && k >= cfg.lock_budget_symbols) {
            throw CdrAcquisitionError(
                "no lock within " + std::to_string(cfg.lock_budget_symbols) + " symbols",
                std::move(result.trace));
        }
    }

    if (!result.locked) {
        throw CdrAcquisitionError("waveform ended before lock", std::move(result.trace));
    }

    double phase_acc = 0.0;
    for (double p : phases) phase_acc += p - std::floor(p);
    result.locked_phase_ui = phase_acc / static_cast<double>(phases.size());
    return result;
}

double bbpd_mean_vote(const Waveform& signal, double phase_ui, size_t n_symbols, double threshold_v) {
    double sum = 0.0;
    size_t count = 0;
    bool d_prev = slice_msb(signal, phase_ui, threshold_v);
    for (size_t k = 1; k < n_symbols; ++k) {
        const double data_t = static_cast<double>(k) + phase_ui;
        const double edge_t = data_t - 0.5;
        const bool d_curr = slice_msb(signal, data_t, threshold_v);
        const bool edge = slice_msb(signal, edge_t, threshold_v);
        sum += static_cast<double>(static_cast<int>(bbpd_vote(d_prev, edge, d_curr)));
        ++count;
        d_prev = d_curr;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

} // namespace cryolink
