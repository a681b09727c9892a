#include "cryolink/optics.hpp"

#include <cmath>

#include "cryolink/errors.hpp"
#include "cryolink/rng.hpp"

namespace cryolink {

void MzmConfig::validate() const {
    if (v_pi_v <= 0.0) throw ConfigError("mzm.v_pi must be positive");
    if (static_er_db <= 0.0) throw ConfigError("mzm.static_er must be positive");
    if (insertion_loss_db < 0.0) throw ConfigError("mzm.insertion_loss must be >= 0");
}

void OpticalPath::validate() const {
    if (laser_power_mw <= 0.0) throw ConfigError("path.laser_power out of (0, inf)");
    if (fiber_loss_db < 0.0 || voa_atten_db < 0.0) throw ConfigError("path losses must be >= 0");
}

void PdConfig::validate() const {
    if (responsivity_a_per_w <= 0.0 || responsivity_a_per_w > 1.2) {
        throw ConfigError("pd.responsivity out of (0,1.2]");
    }
    if (capacitance_ff <= 0.0) throw ConfigError("pd.capacitance must be positive");
    if (dark_current_na < 0.0) throw ConfigError("pd.dark_current must be >= 0");
}

Waveform mzm_modulate(const Waveform& drive, const MzmConfig& cfg, double laser_power_mw) {
    cfg.validate();
    if (drive.unit != SignalUnit::Volts) throw ConfigError("mzm_modulate: drive waveform must be in volts");
    const double p_max = laser_power_mw / db_to_linear(cfg.insertion_loss_db);
    const double p_floor = p_max / db_to_linear(cfg.static_er_db);
    const double p_span = p_max - p_floor;
    const double bias = cfg.bias_phase_rad + M_PI / 2.0; // quadrature default cancels to sin(pi*v/v_pi)

    Waveform out = drive;
    out.unit = SignalUnit::MilliWatts;
    for (auto& s : out.samples) {
        s = p_floor + 0.5 * p_span * (1.0 + std::sin(M_PI * s / cfg.v_pi_v + bias));
    }
    return out;
}

Waveform propagate(const Waveform& optical, const OpticalPath& path) {
    path.validate();
    if (optical.unit != SignalUnit::MilliWatts) throw ConfigError("propagate: waveform must be optical power");
    const double gain = 1.0 / db_to_linear(path.fiber_loss_db + path.voa_atten_db);
    Waveform out = optical;
    for (auto& s : out.samples) {
        if (s < 0.0) throw std::logic_error("propagate: negative optical power sample");
        s *= gain;
    }
    return out;
}

Waveform photodetect(const Waveform& optical, const PdConfig& pd, const NoiseConfig& noise, uint64_t rng_seed) {
    pd.validate();
    if (optical.unit != SignalUnit::MilliWatts) throw ConfigError("photodetect: waveform must be optical power");
    constexpr double kElectronCharge = 1.602176634e-19;
    const double dark_ma = pd.dark_current_na * 1e-6;
    const double b_noise_hz = optical.sample_rate_hz() / 2.0;

    Waveform out = optical;
    out.unit = SignalUnit::MilliAmps;
    Rng rng(rng_seed);
    for (auto& s : out.samples) {
        // responsivity in A/W maps mW to mA directly
        double i_ma = pd.responsivity_a_per_w * s + dark_ma;
        if (noise.shot && i_ma > 0.0) {
            const double var_a2 = 2.0 * kElectronCharge * (i_ma * 1e-3) * b_noise_hz;
            i_ma += std::sqrt(var_a2) * 1e3 * rng.gaussian();
        }
        s = i_ma;
    }
    return out;
}

} // namespace cryolink
