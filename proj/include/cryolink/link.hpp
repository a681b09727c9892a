#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cryolink/cdr.hpp"
#include "cryolink/config.hpp"
#include "cryolink/metrics.hpp"
#include "cryolink/pattern.hpp"
#include "cryolink/rx_chain.hpp"

namespace cryolink {

// Intermediate waveforms of one transmit-to-front-end pass. Stage names for
// tap requests: ffe, driver, mzm, fiber, pd, tia.
struct ChainRun {
    SymbolStream tx_symbols;
    Waveform tia_out;                     // slicer input
    std::map<std::string, Waveform> taps; // requested intermediates
};

// pattern -> lanes -> MUX -> FFE -> driver -> MZM -> fiber -> PD -> TIA.
ChainRun run_chain(const LinkConfig& cfg, size_t n_symbols, const std::vector<std::string>& tap_points = {});

struct E2eResult {
    BerReport ber;
    CdrResult cdr;
    SlicerThresholds thresholds;
    size_t symbols_transmitted = 0;
    size_t symbols_counted = 0; // post-acquisition
    std::map<std::string, Waveform> taps;
};

// Full pipeline with closed-loop clock recovery; BER is counted on the
// post-acquisition stream through the DEMUX path.
E2eResult run_link_e2e(const LinkConfig& cfg, size_t n_symbols, const std::vector<std::string>& tap_points = {});

// Sampling phase (UI, in [0,1)) maximizing the minimum adjacent gap of the
// quartile level means: the brute-force eye center.
double find_eye_center(const Waveform& signal, size_t n_train_symbols, size_t n_phases = 41);

struct BathtubRun {
    double oma_dbm_requested = 0.0;
    double oma_dbm_actual = 0.0;
    double voa_db = 0.0;
    BathtubCurve curve;
    UiOpening opening;
};

struct BathtubExperiment {
    std::vector<BathtubRun> runs;
    double center_phase_ui = 0.0;
    double target_ber = 0.0;
};

// Fig-style bathtub sweep: per OMA point the VOA is adjusted, thresholds
// adapt once at the eye center, and sampling instants sweep phase offsets
// around it with the loop replaced by an exact external clock.
BathtubExperiment experiment_bathtub(const LinkConfig& cfg, const std::vector<double>& oma_dbm_list,
                                     double target_ber, BathtubMethod method, size_t n_symbols = 200000,
                                     size_t n_phases = 41);

enum class EyeStage { TxOptical, RxElectrical };

struct EyeExperiment {
    EyeRaster raster;
    double center_phase_ui = 0.0;
    std::array<double, 4> level_means{};
    std::optional<OmaEr> oma;        // tx_optical only
    double inner_eye_height = 0.0;   // worst adjacent-level gap at the eye center
};

EyeExperiment experiment_eye(const LinkConfig& cfg, EyeStage stage, size_t n_symbols = 4096,
                             size_t phase_bins = 128, size_t amplitude_bins = 128);

struct OmaSweepPoint {
    double oma_dbm = 0.0;
    double voa_db = 0.0;
    double center_ber_counted = 0.0;
    double opening_ui = 0.0;
};

std::vector<OmaSweepPoint> experiment_oma_sweep(const LinkConfig& cfg, const std::vector<double>& oma_dbm_list,
                                                double target_ber, size_t n_symbols = 200000);

struct RabiPoint {
    double amplitude = 0.0;
    double nrmse = 0.0;     // envelope reconstruction error, full-scale fraction
    double p_excited = 0.0; // idealized two-level response
    bool corrupted = false;
};

struct QuantumDemo {
    std::vector<RabiPoint> points;
    double sin2_fit_coeff = 0.0; // b in p = sin^2(b*A)
    double sin2_fit_r2 = 0.0;
};

// Gaussian-envelope frames (8-bit codes, 4 PAM-4 symbols per code) through
// the full link; reconstruction error plus an idealized two-level Rabi
// response over the amplitude sweep.
QuantumDemo demo_quantum_control(const LinkConfig& cfg, const std::vector<double>& amplitudes,
                                 double sigma_ui = 12.0, double induced_symbol_error_rate = 0.0);

// 8-bit Gaussian envelope frame payload; codes are symmetric about the
// center sample.
std::vector<uint8_t> envelope_codes(double amplitude, double sigma_ui, size_t length);
SymbolStream codes_to_symbols(const std::vector<uint8_t>& codes);
std::vector<uint8_t> symbols_to_codes(const SymbolStream& symbols);

// Reference transceiver power breakdown plus per-medium heat loads.
BudgetReport budget_report(int lanes);

struct LinkCalibration {
    CalibrationResult result;
    LinkConfig calibrated_config;
};

// Root-finds tia.input_noise_density so the extrapolated bathtub at the
// target OMA reaches the requested UI opening at the target BER.
LinkCalibration calibrate_link_noise(const LinkConfig& cfg, const CalibrationTarget& target,
                                     size_t n_symbols = 20000, size_t n_phases = 41);

// VOA setting (dB) that brings the link's received OMA to the requested
// value; measured from the fitted optical level means at the eye center.
double voa_for_oma(const LinkConfig& cfg, double oma_dbm_target, size_t n_train_symbols = 2048);

} // namespace cryolink
