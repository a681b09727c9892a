#pragma once

#include <cmath>
#include <cstdint>

#include "cryolink/waveform.hpp"

namespace cryolink {

// Dual-drive MZM folded into one effective differential drive; push-pull
// phase efficiency is absorbed into v_pi. static_er_db floors the minimum
// output power (finite interferometer extinction).
struct MzmConfig {
    double v_pi_v = 4.3;           // calibrated so a 1.3 V swing gives ~4.3 dB outer ER
    double bias_phase_rad = -M_PI / 2.0; // quadrature
    double insertion_loss_db = 4.0;
    double static_er_db = 25.0;

    void validate() const;
};

struct OpticalPath {
    double laser_power_mw = 10.0; // 1530 nm launch, stand-in with VOA headroom to +2 dBm OMA
    double fiber_loss_db = 0.2;  // 5 m patch plus connectors
    double voa_atten_db = 0.0;

    void validate() const;
};

struct PdConfig {
    double responsivity_a_per_w = 0.35;
    double capacitance_ff = 80.0; // absorbed into the rx front-end pole
    double dark_current_na = 0.0;

    void validate() const;
};

struct NoiseConfig {
    bool shot = true;
    bool tia = true;
};

// Interferometric transfer: P = P_floor + (P_span/2) * (1 + sin(pi*v/v_pi + bias + pi/2))
// with P_max = laser * 10^(-IL/10), P_floor = P_max * 10^(-ER_static/10).
Waveform mzm_modulate(const Waveform& drive, const MzmConfig& cfg, double laser_power_mw);

// Pure attenuation by fiber_loss + voa_atten dB; dispersion is negligible
// over a 5 m patch at 28 GBaud.
Waveform propagate(const Waveform& optical, const OpticalPath& path);

// i = R*P + dark + shot. Shot noise per sample is Gaussian with variance
// 2*q*i(t)*B, B = half the sample rate; the PD pole is folded into the rx
// front-end bandwidth.
Waveform photodetect(const Waveform& optical, const PdConfig& pd, const NoiseConfig& noise, uint64_t rng_seed);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

} // namespace cryolink
