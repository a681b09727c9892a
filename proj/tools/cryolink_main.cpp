#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cryolink/emit.hpp"
#include "cryolink/link.hpp"

using namespace cryolink;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "link config file (key = value lines)");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
}

LinkConfig load(const CommonOpts& opts) {
    LinkConfig cfg = opts.config_path.empty() ? LinkConfig{} : load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    cfg.cdr.baud_nominal_hz = cfg.baud_hz;
    cfg.validate();
    return cfg;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / name).string();
}

void emit_report(const CommonOpts& opts, const LinkConfig& cfg) {
    write_text_atomic(out_path(opts, "config-report"), config_report(cfg));
}

std::string oma_tag(double oma_dbm) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.1fdBm", oma_dbm);
    return buf;
}

int cmd_run(const CommonOpts& opts, size_t n_symbols, bool dump_trace) {
    const LinkConfig cfg = load(opts);
    const E2eResult result = run_link_e2e(cfg, n_symbols);

    std::ostringstream csv;
    csv << "symbols_transmitted,symbols_counted,symbol_errors,bit_errors,ber,alignment_offset,"
           "lock_symbol,band_code,locked_phase_ui\n";
    csv << result.symbols_transmitted << "," << result.symbols_counted << "," << result.ber.symbol_errors
        << "," << result.ber.bit_errors << "," << format_full(result.ber.ber) << ","
        << result.ber.alignment_offset << "," << result.cdr.lock_symbol << "," << result.cdr.band_code << ","
        << format_full(result.cdr.locked_phase_ui) << "\n";
    write_text_atomic(out_path(opts, "ber_report.csv"), csv.str());

    if (dump_trace) {
        std::ostringstream trace;
        trace << "symbol,phase_ui,vctrl_v,vote\n";
        for (size_t i = 0; i < result.cdr.trace.size(); ++i) {
            const auto& row = result.cdr.trace[i];
            trace << i << "," << format_full(row.phase_ui) << "," << format_full(row.vctrl_v) << ","
                  << row.vote << "\n";
        }
        write_text_atomic(out_path(opts, "cdr_trace.csv"), trace.str());
    }
    emit_report(opts, cfg);
    std::cout << "ber " << result.ber.ber << " (" << result.ber.bit_errors << "/" << result.ber.bits_compared
              << " bits), locked at symbol " << result.cdr.lock_symbol << ", band code "
              << result.cdr.band_code << "\n";
    return 0;
}

int cmd_bathtub(const CommonOpts& opts, std::vector<double> omas, double target_ber, bool counted,
                size_t n_symbols, size_t n_phases) {
    const LinkConfig cfg = load(opts);
    if (omas.empty()) omas = {-1.0};
    const BathtubMethod method = counted ? BathtubMethod::Counted : BathtubMethod::Extrapolated;
    const BathtubExperiment exp = experiment_bathtub(cfg, omas, target_ber, method, n_symbols, n_phases);

    std::vector<PlotSeries> series;
    std::ostringstream openings;
    openings << "oma_dbm,voa_db,target_ber,opening_ui,reaches_target\n";
    for (const auto& run : exp.runs) {
        write_text_atomic(out_path(opts, "bathtub_" + oma_tag(run.oma_dbm_requested) + ".csv"),
                          bathtub_csv(run.curve));
        PlotSeries s;
        s.label = "OMA " + oma_tag(run.oma_dbm_requested);
        for (const auto& p : run.curve.points) {
            s.x.push_back(p.phase_ui);
            s.y.push_back(p.ber);
        }
        series.push_back(std::move(s));
        openings << format_full(run.oma_dbm_requested) << "," << format_full(run.voa_db) << ","
                 << format_full(target_ber) << "," << format_full(run.opening.width_ui) << ","
                 << (run.opening.reaches_target ? "yes" : "no") << "\n";
        std::cout << "OMA " << oma_tag(run.oma_dbm_requested) << ": opening "
                  << run.opening.width_ui * 100.0 << "% UI at BER " << target_ber << "\n";
    }
    write_text_atomic(out_path(opts, "openings.csv"), openings.str());
    write_text_atomic(out_path(opts, "bathtub.svg"),
                      svg_line_plot(series, "BER bathtub", "phase offset (UI)", "BER", true));
    emit_report(opts, cfg);
    return 0;
}

int cmd_eye(const CommonOpts& opts, const std::string& stage_name, size_t n_symbols) {
    const LinkConfig cfg = load(opts);
    EyeStage stage;
    if (stage_name == "tx_optical") {
        stage = EyeStage::TxOptical;
    } else if (stage_name == "rx_electrical") {
        stage = EyeStage::RxElectrical;
    } else {
        throw ConfigError("unknown eye stage '" + stage_name + "'");
    }
    const EyeExperiment eye = experiment_eye(cfg, stage, n_symbols);

    write_text_atomic(out_path(opts, "eye_raster.csv"), eye_raster_csv(eye.raster));
    write_text_atomic(out_path(opts, "eye.svg"), svg_heatmap(eye.raster, "eye diagram (" + stage_name + ")"));

    std::ostringstream summary;
    summary << "center_phase_ui,level0,level1,level2,level3,inner_eye_height,oma_dbm,er_db\n";
    summary << format_full(eye.center_phase_ui);
    for (double m : eye.level_means) summary << "," << format_full(m);
    summary << "," << format_full(eye.inner_eye_height);
    if (eye.oma) {
        summary << "," << format_full(eye.oma->oma_dbm) << "," << format_full(eye.oma->er_db);
    } else {
        summary << ",,";
    }
    summary << "\n";
    write_text_atomic(out_path(opts, "eye_summary.csv"), summary.str());
    emit_report(opts, cfg);
    if (eye.oma) std::cout << "outer ER " << eye.oma->er_db << " dB, OMA " << eye.oma->oma_dbm << " dBm\n";
    std::cout << "inner eye height " << eye.inner_eye_height << " " << to_string(eye.raster.unit) << "\n";
    return 0;
}

int cmd_oma_sweep(const CommonOpts& opts, std::vector<double> omas, double target_ber, size_t n_symbols) {
    const LinkConfig cfg = load(opts);
    if (omas.empty()) omas = {-5, -4, -3, -2, -1, 0, 1};
    const auto points = experiment_oma_sweep(cfg, omas, target_ber, n_symbols);

    std::ostringstream csv;
    csv << "oma_dbm,voa_db,center_ber_counted,opening_ui\n";
    PlotSeries s;
    s.label = "opening vs OMA";
    for (const auto& p : points) {
        csv << format_full(p.oma_dbm) << "," << format_full(p.voa_db) << ","
            << format_full(p.center_ber_counted) << "," << format_full(p.opening_ui) << "\n";
        s.x.push_back(p.oma_dbm);
        s.y.push_back(p.opening_ui);
    }
    write_text_atomic(out_path(opts, "oma_sweep.csv"), csv.str());
    write_text_atomic(out_path(opts, "oma_sweep.svg"),
                      svg_line_plot({s}, "UI opening vs OMA", "OMA (dBm)", "opening (UI)", false));
    emit_report(opts, cfg);
    return 0;
}

int cmd_qdemo(const CommonOpts& opts, size_t n_amplitudes, double sigma_ui, double induced_ser) {
    const LinkConfig cfg = load(opts);
    std::vector<double> amplitudes(n_amplitudes);
    for (size_t i = 0; i < n_amplitudes; ++i) {
        amplitudes[i] = static_cast<double>(i) / static_cast<double>(n_amplitudes - 1);
    }
    const QuantumDemo demo = demo_quantum_control(cfg, amplitudes, sigma_ui, induced_ser);

    std::ostringstream csv;
    csv << "amplitude,nrmse,p_excited,corrupted\n";
    PlotSeries s;
    s.label = "p_excited";
    for (const auto& p : demo.points) {
        csv << format_full(p.amplitude) << "," << format_full(p.nrmse) << "," << format_full(p.p_excited)
            << "," << (p.corrupted ? "yes" : "no") << "\n";
        if (!p.corrupted) {
            s.x.push_back(p.amplitude);
            s.y.push_back(p.p_excited);
        }
    }
    write_text_atomic(out_path(opts, "qdemo.csv"), csv.str());
    write_text_atomic(out_path(opts, "rabi.svg"),
                      svg_line_plot({s}, "Rabi amplitude sweep", "drive amplitude", "p_excited", false));
    emit_report(opts, cfg);
    std::cout << "sin^2 fit R^2 = " << demo.sin2_fit_r2 << "\n";
    return 0;
}

int cmd_budget(const CommonOpts& opts, int lanes) {
    const LinkConfig cfg = load(opts);
    const BudgetReport report = budget_report(lanes);

    std::ostringstream csv;
    csv << "label,power_mw,rate_gbps,pj_per_bit\n";
    for (const auto& row : report.power) {
        csv << row.label << "," << format_full(row.power_mw) << "," << format_full(row.rate_gbps) << ","
            << format_full(row.pj_per_bit) << "\n";
    }
    csv << "\nmedium,lanes,load_4k_mw,load_50k_mw\n";
    for (const auto& row : report.heat) {
        csv << row.medium << "," << row.lanes << "," << format_full(row.load.load_4k_mw) << ","
            << format_full(row.load.load_50k_mw) << "\n";
    }
    write_text_atomic(out_path(opts, "budget.csv"), csv.str());
    emit_report(opts, cfg);
    std::cout << csv.str();
    return 0;
}

int cmd_calibrate(const CommonOpts& opts, double oma_dbm, double opening_pct, double target_ber,
                  size_t n_symbols) {
    const LinkConfig cfg = load(opts);
    CalibrationTarget target;
    target.oma_dbm = oma_dbm;
    target.ui_opening = opening_pct / 100.0;
    target.ber = target_ber;
    const LinkCalibration cal = calibrate_link_noise(cfg, target, n_symbols);

    write_text_atomic(out_path(opts, "calibrated.cfg"), emit_config(cal.calibrated_config));
    write_text_atomic(out_path(opts, "calibration_curve.csv"), bathtub_csv(cal.result.curve));
    emit_report(opts, cal.calibrated_config);
    std::cout << "input noise density " << cal.result.density_pa_rthz << " pA/rtHz, achieved opening "
              << cal.result.achieved_opening_ui * 100.0 << "% UI\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavioral 56 Gb/s PAM-4 cryogenic optical link simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    size_t n_symbols = 100000;
    size_t n_phases = 41;
    bool dump_trace = false;
    bool counted = false;
    std::vector<double> omas;
    double target_ber = 1e-8;
    std::string stage = "tx_optical";
    size_t n_amplitudes = 17;
    double sigma_ui = 12.0;
    double induced_ser = 0.0;
    int lanes = 8;
    double cal_oma = -1.0;
    double cal_opening_pct = 18.0;

    auto* run = app.add_subcommand("run", "end-to-end link run with closed-loop CDR");
    add_common(run, opts);
    run->add_option("--symbols", n_symbols, "symbols to transmit")->capture_default_str();
    run->add_flag("--trace", dump_trace, "emit the per-symbol CDR trace");

    auto* tub = app.add_subcommand("bathtub", "BER bathtub sweep (external clock)");
    add_common(tub, opts);
    tub->add_option("--oma", omas, "OMA points, dBm (repeatable)");
    tub->add_option("--target-ber", target_ber, "opening threshold")->capture_default_str();
    tub->add_flag("--counted", counted, "count errors instead of Gaussian extrapolation");
    tub->add_option("--symbols", n_symbols, "symbols per curve")->capture_default_str();
    tub->add_option("--phases", n_phases, "phase points per curve")->capture_default_str();

    auto* eye = app.add_subcommand("eye", "eye raster and level fit");
    add_common(eye, opts);
    eye->add_option("--stage", stage, "tx_optical | rx_electrical")->capture_default_str();
    eye->add_option("--symbols", n_symbols, "symbols to fold")->capture_default_str();

    auto* sweep = app.add_subcommand("oma-sweep", "center BER and opening across OMA");
    add_common(sweep, opts);
    sweep->add_option("--oma", omas, "OMA points, dBm (repeatable)");
    sweep->add_option("--target-ber", target_ber, "opening threshold")->capture_default_str();
    sweep->add_option("--symbols", n_symbols, "symbols per point")->capture_default_str();

    auto* qdemo = app.add_subcommand("qdemo", "Gaussian-envelope transport and Rabi sweep");
    add_common(qdemo, opts);
    qdemo->add_option("--amplitudes", n_amplitudes, "sweep points in [0,1]")->capture_default_str();
    qdemo->add_option("--sigma", sigma_ui, "envelope sigma, UI counts")->capture_default_str();
    qdemo->add_option("--induced-ser", induced_ser, "inject symbol errors at this rate");

    auto* budget = app.add_subcommand("budget", "energy per bit and heat-load comparison");
    add_common(budget, opts);
    budget->add_option("--lanes", lanes, "lane count for the heat comparison")->capture_default_str();

    size_t cal_symbols = 20000;
    auto* cal = app.add_subcommand("calibrate", "fit rx noise density to a bathtub operating point");
    add_common(cal, opts);
    cal->add_option("--oma", cal_oma, "target OMA, dBm")->capture_default_str();
    cal->add_option("--opening", cal_opening_pct, "target opening, % UI")->capture_default_str();
    cal->add_option("--target-ber", target_ber, "BER at which the opening is read")->capture_default_str();
    cal->add_option("--symbols", cal_symbols, "symbols per bathtub evaluation")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts, n_symbols, dump_trace);
        if (tub->parsed()) return cmd_bathtub(opts, omas, target_ber, counted, n_symbols, n_phases);
        if (eye->parsed()) return cmd_eye(opts, stage, std::min<size_t>(n_symbols, 16384));
        if (sweep->parsed()) return cmd_oma_sweep(opts, omas, target_ber, n_symbols);
        if (qdemo->parsed()) return cmd_qdemo(opts, n_amplitudes, sigma_ui, induced_ser);
        if (budget->parsed()) return cmd_budget(opts, lanes);
        if (cal->parsed()) return cmd_calibrate(opts, cal_oma, cal_opening_pct, target_ber, cal_symbols);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AcquisitionError& e) {
        std::cerr << "acquisition failure: " << e.what() << "\n";
        return 3;
    } catch (const StatsError& e) {
        std::cerr << "insufficient statistics: " << e.what() << "\n";
        return 4;
    }
    return 1;
}
