#include "cryolink/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cryolink/emit.hpp"
#include "cryolink/optics.hpp"
#include "cryolink/rng.hpp"

namespace cryolink {

namespace {

enum SeedStream : uint64_t { kSeedShot = 1, kSeedTia = 2, kSeedCdr = 3, kSeedInduced = 4 };

CdrConfig make_cdr_config(const LinkConfig& cfg) {
    CdrConfig c = cfg.cdr;
    c.baud_nominal_hz = cfg.baud_hz;
    c.seed = Rng::derive(cfg.seed, kSeedCdr);
    return c;
}

ChainRun run_chain_symbols(const LinkConfig& cfg, SymbolStream symbols,
                           const std::vector<std::string>& tap_points) {
    cfg.validate();
    LaneGroup lanes = lanes_from_serial(symbols);
    SymbolStream serial = serialize_lanes(lanes);

    const std::vector<double> shaped = apply_ffe(serial, cfg.ffe);
    const double baud_actual = cfg.actual_baud_hz();
    Waveform drive = drive_waveform(shaped, cfg.driver, baud_actual, cfg.osr);
    Waveform mzm = mzm_modulate(drive, cfg.mzm, cfg.path.laser_power_mw);
    Waveform fiber = propagate(mzm, cfg.path);
    NoiseConfig pd_noise{cfg.noise.shot, false};
    Waveform pd = photodetect(fiber, cfg.pd, pd_noise, Rng::derive(cfg.seed, kSeedShot));
    Waveform tia = tia_amplify(pd, cfg.tia, cfg.noise.tia, Rng::derive(cfg.seed, kSeedTia));

    ChainRun run;
    run.tx_symbols = std::move(serial);
    for (const auto& name : tap_points) {
        if (name == "ffe") {
            Waveform w;
            w.unit = SignalUnit::Volts;
            w.baud_hz = baud_actual;
            w.samples_per_ui = 1.0;
            w.samples = shaped;
            run.taps.emplace(name, std::move(w));
        } else if (name == "driver") {
            run.taps.emplace(name, drive);
        } else if (name == "mzm") {
            run.taps.emplace(name, mzm);
        } else if (name == "fiber") {
            run.taps.emplace(name, fiber);
        } else if (name == "pd") {
            run.taps.emplace(name, pd);
        } else if (name == "tia") {
            run.taps.emplace(name, tia);
        } else {
            throw ConfigError("unknown tap point '" + name + "'");
        }
    }
    run.tia_out = std::move(tia);
    return run;
}

// tx symbol index sampled by instant j is j + tx_offset
struct AlignedSampling {
    double center_phase_ui = 0.0;
    SlicerThresholds thresholds;
    int tx_offset = 0;
};

AlignedSampling align_to_pattern(const Waveform& wave, const SymbolStream& tx, size_t n_train) {
    AlignedSampling out;
    out.center_phase_ui = find_eye_center(wave, n_train);

    const size_t k0 = 2;
    const size_t k_max = std::min(static_cast<size_t>(wave.duration_ui() - 2.0), k0 + n_train);
    std::vector<double> training;
    training.reserve(k_max - k0);
    for (size_t k = k0; k < k_max; ++k) {
        training.push_back(wave.value_at_ui(static_cast<double>(k) + out.center_phase_ui));
    }
    out.thresholds = thresholds_from_samples(training);

    std::vector<double> instants;
    instants.reserve(k_max - k0);
    for (size_t k = k0; k < k_max; ++k) instants.push_back(static_cast<double>(k) + out.center_phase_ui);
    const SymbolStream decided = slice_pam4(wave, out.thresholds, instants);
    const BerReport rep = ber_check(tx, decided, Alignment::auto_search());
    // decided[j] sat at instant (j + k0 + center), so instant k samples tx[k - k0 + offset]
    out.tx_offset = rep.alignment_offset - static_cast<int>(k0);
    return out;
}

} // namespace

ChainRun run_chain(const LinkConfig& cfg, size_t n_symbols, const std::vector<std::string>& tap_points) {
    const size_t n8 = (n_symbols + 7) / 8 * 8;
    return run_chain_symbols(cfg, prbs7q_generate(Lfsr7State(), n8), tap_points);
}

E2eResult run_link_e2e(const LinkConfig& cfg, size_t n_symbols, const std::vector<std::string>& tap_points) {
    ChainRun chain = run_chain(cfg, n_symbols, tap_points);

    E2eResult result;
    result.symbols_transmitted = chain.tx_symbols.size();
    result.cdr = recover_clock(chain.tia_out, make_cdr_config(cfg), CdrMode::closed_loop());

    const auto& instants = result.cdr.data_instants_ui;
    const size_t first = result.cdr.lock_symbol;
    const size_t train_end = std::min(first + 4000, instants.size());
    std::vector<double> training(instants.begin() + static_cast<long>(first),
                                 instants.begin() + static_cast<long>(train_end));
    for (auto& t : training) t = chain.tia_out.value_at_ui(t);
    result.thresholds = thresholds_from_samples(std::move(training));

    const std::vector<double> post_lock(instants.begin() + static_cast<long>(first), instants.end());
    SymbolStream received = slice_pam4(chain.tia_out, result.thresholds, post_lock);

    // through the DEMUX/MUX pair, tail cut to a lane multiple
    received.resize(received.size() / LaneGroup::kLanes * LaneGroup::kLanes);
    received = serialize_lanes(deserialize_lanes(received));

    result.ber = ber_check(chain.tx_symbols, received, Alignment::auto_search());
    result.symbols_counted = result.ber.symbols_compared;
    result.taps = std::move(chain.taps);
    return result;
}

double find_eye_center(const Waveform& signal, size_t n_train_symbols, size_t n_phases) {
    const size_t k0 = 2;
    const size_t k_max =
        std::min(static_cast<size_t>(std::max(0.0, signal.duration_ui() - 2.0)), k0 + n_train_symbols);
    if (k_max <= k0 + 4) throw ConfigError("find_eye_center: waveform too short");

    double best_phase = 0.0;
    double best_score = -std::numeric_limits<double>::infinity();
    std::vector<double> samples(k_max - k0);
    for (size_t i = 0; i < n_phases; ++i) {
        const double phase = static_cast<double>(i) / static_cast<double>(n_phases);
        for (size_t k = k0; k < k_max; ++k) {
            samples[k - k0] = signal.value_at_ui(static_cast<double>(k) + phase);
        }
        const auto means = quartile_level_means(samples);
        const double score =
            std::min({means[1] - means[0], means[2] - means[1], means[3] - means[2]});
        if (score > best_score) {
            best_score = score;
            best_phase = phase;
        }
    }
    return best_phase;
}

double voa_for_oma(const LinkConfig& cfg, double oma_dbm_target, size_t n_train_symbols) {
    LinkConfig probe = cfg;
    probe.path.voa_atten_db = 0.0;
    ChainRun chain = run_chain(probe, n_train_symbols, {"fiber"});
    const Waveform& fiber = chain.taps.at("fiber");

    const double center = find_eye_center(fiber, n_train_symbols);
    const size_t k0 = 2;
    const size_t k_max = std::min(static_cast<size_t>(fiber.duration_ui() - 2.0), k0 + n_train_symbols);
    std::vector<double> samples;
    samples.reserve(k_max - k0);
    for (size_t k = k0; k < k_max; ++k) samples.push_back(fiber.value_at_ui(static_cast<double>(k) + center));
    const auto means = quartile_level_means(samples);
    const OmaEr current = oma_er({means[0], means[1], means[2], means[3]});

    const double voa = current.oma_dbm - oma_dbm_target;
    if (voa < -1e-9) {
        throw ConfigError("requested OMA " + std::to_string(oma_dbm_target) +
                          " dBm exceeds the available " + std::to_string(current.oma_dbm) + " dBm");
    }
    return std::max(0.0, voa);
}

namespace {

struct PreparedLink {
    ChainRun chain;
    AlignedSampling align;
    double oma_dbm_actual = 0.0;
    double voa_db = 0.0;
};

PreparedLink prepare_link_at_oma(const LinkConfig& cfg, double oma_dbm, size_t n_symbols) {
    PreparedLink prep;
    prep.voa_db = voa_for_oma(cfg, oma_dbm);
    prep.oma_dbm_actual = oma_dbm;
    LinkConfig run_cfg = cfg;
    run_cfg.path.voa_atten_db = prep.voa_db;
    prep.chain = run_chain(run_cfg, n_symbols);
    prep.align = align_to_pattern(prep.chain.tia_out, prep.chain.tx_symbols, 4000);
    return prep;
}

PhaseSampler make_phase_sampler(const PreparedLink& prep, const CdrConfig& cdr_cfg) {
    // captures by reference; prep must outlive the sampler
    return [&prep, cdr_cfg](double offset_ui) {
        const Waveform& wave = prep.chain.tia_out;
        const SymbolStream& tx = prep.chain.tx_symbols;
        // +2 UI keeps instants positive on the left edge of the sweep
        const double phase = prep.align.center_phase_ui + offset_ui + 2.0;
        const CdrResult clock = recover_clock(wave, cdr_cfg, CdrMode::external_clock(phase));

        std::vector<LevelSample> out;
        out.reserve(clock.data_instants_ui.size());
        for (size_t j = 0; j < clock.data_instants_ui.size(); ++j) {
            const long tx_idx = static_cast<long>(j) + prep.align.tx_offset + 2;
            if (tx_idx < 0) continue;
            if (tx_idx >= static_cast<long>(tx.size())) break;
            out.push_back({tx[static_cast<size_t>(tx_idx)], wave.value_at_ui(clock.data_instants_ui[j])});
        }
        return out;
    };
}

std::vector<double> phase_offsets(size_t n_phases) {
    std::vector<double> offsets(n_phases);
    for (size_t i = 0; i < n_phases; ++i) {
        offsets[i] = -0.5 + static_cast<double>(i) / static_cast<double>(n_phases - 1);
    }
    return offsets;
}

} // namespace

BathtubExperiment experiment_bathtub(const LinkConfig& cfg, const std::vector<double>& oma_dbm_list,
                                     double target_ber, BathtubMethod method, size_t n_symbols,
                                     size_t n_phases) {
    if (oma_dbm_list.empty()) throw ConfigError("experiment_bathtub: OMA list is empty");
    if (n_phases < 5) throw ConfigError("experiment_bathtub: need at least 5 phases");

    BathtubExperiment experiment;
    experiment.target_ber = target_ber;
    const CdrConfig cdr_cfg = make_cdr_config(cfg);
    const std::vector<double> offsets = phase_offsets(n_phases);

    for (double oma : oma_dbm_list) {
        PreparedLink prep = prepare_link_at_oma(cfg, oma, n_symbols);
        experiment.center_phase_ui = prep.align.center_phase_ui;

        BathtubRun run;
        run.oma_dbm_requested = oma;
        run.oma_dbm_actual = prep.oma_dbm_actual;
        run.voa_db = prep.voa_db;
        run.curve = bathtub(make_phase_sampler(prep, cdr_cfg), offsets, method, prep.align.thresholds);
        run.curve.oma_dbm = prep.oma_dbm_actual;
        run.opening = ui_opening(run.curve, target_ber);
        experiment.runs.push_back(std::move(run));
    }
    return experiment;
}

EyeExperiment experiment_eye(const LinkConfig& cfg, EyeStage stage, size_t n_symbols, size_t phase_bins,
                             size_t amplitude_bins) {
    ChainRun chain = run_chain(cfg, n_symbols, {"mzm"});
    const Waveform& wave = stage == EyeStage::TxOptical ? chain.taps.at("mzm") : chain.tia_out;

    EyeExperiment eye;
    AlignedSampling align = align_to_pattern(wave, chain.tx_symbols, std::min<size_t>(n_symbols, 4000));
    eye.center_phase_ui = align.center_phase_ui;
    eye.raster = eye_raster(wave, align.center_phase_ui - 1.0, phase_bins, amplitude_bins);

    // per-level voltage clusters at the eye center
    std::array<std::vector<double>, 4> clusters;
    const size_t k0 = 2;
    const auto k_max = static_cast<size_t>(wave.duration_ui() - 2.0);
    for (size_t k = k0; k < k_max; ++k) {
        const long tx_idx = static_cast<long>(k) - static_cast<long>(k0) + align.tx_offset + 2;
        if (tx_idx < 0 || tx_idx >= static_cast<long>(chain.tx_symbols.size())) continue;
        const double v = wave.value_at_ui(static_cast<double>(k) + align.center_phase_ui);
        clusters[chain.tx_symbols[static_cast<size_t>(tx_idx)] & 3].push_back(v);
    }

    double inner = std::numeric_limits<double>::infinity();
    for (size_t l = 0; l < 4; ++l) {
        if (clusters[l].empty()) throw StatsError("experiment_eye: level " + std::to_string(l) + " unseen");
        double mean = 0.0;
        for (double v : clusters[l]) mean += v;
        eye.level_means[l] = mean / static_cast<double>(clusters[l].size());
        if (l > 0) {
            const double lo_top = *std::max_element(clusters[l - 1].begin(), clusters[l - 1].end());
            const double hi_bot = *std::min_element(clusters[l].begin(), clusters[l].end());
            inner = std::min(inner, hi_bot - lo_top);
        }
    }
    eye.inner_eye_height = inner;

    if (stage == EyeStage::TxOptical) {
        eye.oma = oma_er({eye.level_means[0], eye.level_means[1], eye.level_means[2], eye.level_means[3]});
    }
    return eye;
}

std::vector<OmaSweepPoint> experiment_oma_sweep(const LinkConfig& cfg, const std::vector<double>& oma_dbm_list,
                                                double target_ber, size_t n_symbols) {
    std::vector<OmaSweepPoint> points;
    const CdrConfig cdr_cfg = make_cdr_config(cfg);
    const std::vector<double> offsets = phase_offsets(41);
    for (double oma : oma_dbm_list) {
        PreparedLink prep = prepare_link_at_oma(cfg, oma, n_symbols);
        const PhaseSampler sampler = make_phase_sampler(prep, cdr_cfg);

        OmaSweepPoint point;
        point.oma_dbm = oma;
        point.voa_db = prep.voa_db;
        const BathtubCurve center =
            bathtub(sampler, {0.0}, BathtubMethod::Counted, prep.align.thresholds);
        point.center_ber_counted = center.points.front().ber;
        const BathtubCurve curve =
            bathtub(sampler, offsets, BathtubMethod::Extrapolated, prep.align.thresholds);
        point.opening_ui = ui_opening(curve, target_ber).width_ui;
        points.push_back(point);
    }
    return points;
}

std::vector<uint8_t> envelope_codes(double amplitude, double sigma_ui, size_t length) {
    if (amplitude < 0.0 || amplitude > 1.0) throw ConfigError("envelope amplitude out of [0,1]");
    if (sigma_ui <= 0.0) throw ConfigError("envelope sigma must be positive");
    if (length == 0 || length > 255) throw ConfigError("envelope length out of 1..255");
    std::vector<uint8_t> codes(length);
    const double center = static_cast<double>(length - 1) / 2.0;
    for (size_t i = 0; i < length; ++i) {
        const double x = (static_cast<double>(i) - center) / sigma_ui;
        const double v = amplitude * std::exp(-0.5 * x * x);
        codes[i] = static_cast<uint8_t>(std::lround(255.0 * v));
    }
    return codes;
}

SymbolStream codes_to_symbols(const std::vector<uint8_t>& codes) {
    SymbolStream symbols;
    symbols.reserve(codes.size() * 4);
    for (uint8_t code : codes) {
        for (int p = 0; p < 4; ++p) {
            const int b0 = (code >> (7 - 2 * p)) & 1;
            const int b1 = (code >> (6 - 2 * p)) & 1;
            symbols.push_back(gray_map(b0, b1));
        }
    }
    return symbols;
}

std::vector<uint8_t> symbols_to_codes(const SymbolStream& symbols) {
    std::vector<uint8_t> codes(symbols.size() / 4);
    for (size_t c = 0; c < codes.size(); ++c) {
        int code = 0;
        for (int p = 0; p < 4; ++p) {
            int b0, b1;
            gray_unmap(symbols[c * 4 + static_cast<size_t>(p)], b0, b1);
            code |= (b0 << (7 - 2 * p)) | (b1 << (6 - 2 * p));
        }
        codes[c] = static_cast<uint8_t>(code);
    }
    return codes;
}

namespace {

// The sync word must never occur inside the PRBS7Q filler: an alternating
// 0/3 run is not a valid LFSR trajectory, so an exact scan is unambiguous.
const SymbolStream kSyncWord = {0, 3, 0, 3, 0, 3, 0, 3};
constexpr size_t kWarmupSymbols = 4096;

struct DecodedFrame {
    bool ok = false;
    std::vector<uint8_t> payload;
};

DecodedFrame decode_frame(const SymbolStream& decided, size_t expected_len) {
    DecodedFrame frame;
    for (size_t s = 0; s + kSyncWord.size() + 4 <= decided.size(); ++s) {
        if (!std::equal(kSyncWord.begin(), kSyncWord.end(), decided.begin() + static_cast<long>(s))) {
            continue;
        }
        const size_t len_at = s + kSyncWord.size();
        const SymbolStream len_sym(decided.begin() + static_cast<long>(len_at),
                                   decided.begin() + static_cast<long>(len_at + 4));
        const size_t len = symbols_to_codes(len_sym)[0];
        if (len != expected_len) continue;
        const size_t payload_at = len_at + 4;
        if (payload_at + 4 * len > decided.size()) return frame;
        const SymbolStream payload_sym(decided.begin() + static_cast<long>(payload_at),
                                       decided.begin() + static_cast<long>(payload_at + 4 * len));
        frame.payload = symbols_to_codes(payload_sym);
        frame.ok = true;
        return frame;
    }
    return frame;
}

double fit_sin_squared(const std::vector<double>& amps, const std::vector<double>& probs, double& r2) {
    double mean = 0.0;
    for (double p : probs) mean += p;
    mean /= static_cast<double>(probs.size());
    double ss_tot = 0.0;
    for (double p : probs) ss_tot += (p - mean) * (p - mean);

    const double a_max = *std::max_element(amps.begin(), amps.end());
    auto residual = [&](double b) {
        double ss = 0.0;
        for (size_t i = 0; i < amps.size(); ++i) {
            const double m = std::sin(b * amps[i]);
            ss += (probs[i] - m * m) * (probs[i] - m * m);
        }
        return ss;
    };

    double best_b = 0.0;
    double best_ss = std::numeric_limits<double>::infinity();
    const double b_hi = 1.5 * M_PI / std::max(a_max, 1e-9);
    for (int i = 1; i <= 3000; ++i) {
        const double b = b_hi * static_cast<double>(i) / 3000.0;
        const double ss = residual(b);
        if (ss < best_ss) {
            best_ss = ss;
            best_b = b;
        }
    }
    double lo = best_b - b_hi / 3000.0, hi = best_b + b_hi / 3000.0;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (residual(m1) < residual(m2)) hi = m2; else lo = m1;
    }
    best_b = 0.5 * (lo + hi);
    r2 = ss_tot > 0.0 ? 1.0 - residual(best_b) / ss_tot : 1.0;
    return best_b;
}

} // namespace

QuantumDemo demo_quantum_control(const LinkConfig& cfg, const std::vector<double>& amplitudes,
                                 double sigma_ui, double induced_symbol_error_rate) {
    if (amplitudes.empty()) throw ConfigError("demo_quantum_control: amplitude list is empty");
    const size_t env_len = std::min<size_t>(255, 2 * static_cast<size_t>(std::ceil(3.0 * sigma_ui)) + 1);

    QuantumDemo demo;
    std::vector<double> areas(amplitudes.size(), 0.0);

    for (size_t idx = 0; idx < amplitudes.size(); ++idx) {
        const double amplitude = amplitudes[idx];
        const std::vector<uint8_t> codes = envelope_codes(amplitude, sigma_ui, env_len);

        Lfsr7State filler_seed;
        SymbolStream tx = prbs7q_generate(filler_seed, kWarmupSymbols);
        tx.insert(tx.end(), kSyncWord.begin(), kSyncWord.end());
        const SymbolStream len_sym = codes_to_symbols({static_cast<uint8_t>(env_len)});
        tx.insert(tx.end(), len_sym.begin(), len_sym.end());
        const SymbolStream payload_sym = codes_to_symbols(codes);
        tx.insert(tx.end(), payload_sym.begin(), payload_sym.end());
        const SymbolStream tail = prbs7q_generate(filler_seed, 128);
        tx.insert(tx.end(), tail.begin(), tail.end());
        tx.resize((tx.size() + 7) / 8 * 8, 0);

        LinkConfig run_cfg = cfg;
        run_cfg.seed = Rng::derive(cfg.seed, 1000 + idx);
        ChainRun chain = run_chain_symbols(run_cfg, tx, {});

        RabiPoint point;
        point.amplitude = amplitude;
        try {
            const CdrResult clock = recover_clock(chain.tia_out, make_cdr_config(run_cfg), CdrMode::closed_loop());
            const auto& instants = clock.data_instants_ui;
            const size_t first = clock.lock_symbol;
            const size_t train_end = std::min(first + 2000, std::min(instants.size(), kWarmupSymbols - 64));
            std::vector<double> training(instants.begin() + static_cast<long>(first),
                                         instants.begin() + static_cast<long>(train_end));
            for (auto& t : training) t = chain.tia_out.value_at_ui(t);
            const SlicerThresholds thresholds = thresholds_from_samples(std::move(training));

            SymbolStream decided = slice_pam4(chain.tia_out, thresholds, instants);
            if (induced_symbol_error_rate > 0.0) {
                Rng rng(Rng::derive(run_cfg.seed, kSeedInduced));
                for (auto& s : decided) {
                    if (rng.uniform() < induced_symbol_error_rate) {
                        s = static_cast<uint8_t>((s + 1 + static_cast<int>(rng.uniform() * 3.0)) & 3);
                    }
                }
            }

            const DecodedFrame frame = decode_frame(decided, env_len);
            if (!frame.ok) {
                point.corrupted = true;
                point.nrmse = std::numeric_limits<double>::quiet_NaN();
            } else {
                double ss = 0.0;
                double area = 0.0;
                const double center = static_cast<double>(env_len - 1) / 2.0;
                for (size_t i = 0; i < env_len; ++i) {
                    const double x = (static_cast<double>(i) - center) / sigma_ui;
                    const double ideal = amplitude * std::exp(-0.5 * x * x);
                    const double got = static_cast<double>(frame.payload[i]) / 255.0;
                    ss += (got - ideal) * (got - ideal);
                    area += got;
                }
                point.nrmse = std::sqrt(ss / static_cast<double>(env_len));
                areas[idx] = area;
            }
        } catch (const AcquisitionError&) {
            point.corrupted = true;
            point.nrmse = std::numeric_limits<double>::quiet_NaN();
        }
        demo.points.push_back(point);
    }

    // kappa scaled so the largest recovered pulse area completes a 2*pi rotation
    double max_area = 0.0;
    for (size_t i = 0; i < areas.size(); ++i) {
        if (!demo.points[i].corrupted) max_area = std::max(max_area, areas[i]);
    }
    const double kappa = max_area > 0.0 ? 2.0 * M_PI / max_area : 0.0;

    std::vector<double> fit_a, fit_p;
    for (size_t i = 0; i < demo.points.size(); ++i) {
        if (demo.points[i].corrupted) continue;
        const double theta = kappa * areas[i];
        demo.points[i].p_excited = std::sin(theta / 2.0) * std::sin(theta / 2.0);
        fit_a.push_back(demo.points[i].amplitude);
        fit_p.push_back(demo.points[i].p_excited);
    }
    if (fit_a.size() >= 4) {
        demo.sin2_fit_coeff = fit_sin_squared(fit_a, fit_p, demo.sin2_fit_r2);
    }
    return demo;
}

BudgetReport budget_report(int lanes) {
    BudgetReport report;
    const double rate = 56.0;
    const std::pair<const char*, double> rows[] = {
        {"tx front-end", 30.0},
        {"tx data+clock path", 21.6},
        {"rx front-end", 15.2},
        {"rx data+clock path", 23.1},
    };
    double tx_total = 0.0, rx_total = 0.0;
    for (const auto& [label, mw] : rows) {
        report.power.push_back({label, mw, rate, energy_efficiency(mw, rate)});
        if (label[0] == 't') tx_total += mw; else rx_total += mw;
    }
    report.power.push_back({"tx total", tx_total, rate, energy_efficiency(tx_total, rate)});
    report.power.push_back({"rx total", rx_total, rate, energy_efficiency(rx_total, rate)});

    report.heat.push_back({"coax", 1, heat_load_compare(LinkMedium::Coax, 1)});
    report.heat.push_back({"coax", lanes, heat_load_compare(LinkMedium::Coax, lanes)});
    report.heat.push_back({"fiber", lanes, heat_load_compare(LinkMedium::Fiber, lanes)});
    return report;
}

LinkCalibration calibrate_link_noise(const LinkConfig& cfg, const CalibrationTarget& target, size_t n_symbols,
                                     size_t n_phases) {
    LinkConfig base = cfg;
    base.noise.tia = true;
    base.path.voa_atten_db = voa_for_oma(base, target.oma_dbm);
    const CdrConfig cdr_cfg = make_cdr_config(base);
    const std::vector<double> offsets = phase_offsets(n_phases);

    auto runner = [&](double density) {
        LinkConfig trial = base;
        trial.tia.input_noise_density_pa_rthz = density;
        BathtubCurve curve;
        try {
            ChainRun chain = run_chain(trial, n_symbols);
            PreparedLink prep;
            prep.chain = std::move(chain);
            prep.align = align_to_pattern(prep.chain.tia_out, prep.chain.tx_symbols, 4000);
            curve = bathtub(make_phase_sampler(prep, cdr_cfg), offsets, BathtubMethod::Extrapolated,
                            prep.align.thresholds);
        } catch (const StatsError&) {
            // noise far past any usable level: report a fully closed tub
            for (double off : offsets) {
                BathtubPoint p;
                p.phase_ui = off;
                p.ber = 0.5;
                p.method = BathtubMethod::Extrapolated;
                curve.points.push_back(p);
            }
        }
        curve.oma_dbm = target.oma_dbm;
        return curve;
    };

    LinkCalibration out{calibrate_noise(runner, target, 0.01), base};
    out.calibrated_config.tia.input_noise_density_pa_rthz = out.result.density_pa_rthz;
    return out;
}

} // namespace cryolink
