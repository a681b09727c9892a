#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "cryolink/emit.hpp"
#include "cryolink/link.hpp"

using namespace cryolink;

namespace {

LinkConfig noiseless_config() {
    LinkConfig cfg;
    cfg.noise.shot = false;
    cfg.noise.tia = false;
    return cfg;
}

} // namespace

TEST_CASE("noiseless end-to-end run recovers the pattern exactly") {
    const LinkConfig cfg = noiseless_config();
    const E2eResult result = run_link_e2e(cfg, 8000);
    CHECK(result.cdr.locked);
    CHECK(result.cdr.lock_symbol < 2000);
    CHECK(result.ber.bit_errors == 0);
    CHECK(result.ber.ber == 0.0);
    CHECK(result.symbols_counted > 5000);
}

TEST_CASE("tap points expose the stage waveforms") {
    const LinkConfig cfg = noiseless_config();
    const ChainRun run = run_chain(cfg, 512, {"ffe", "driver", "mzm", "fiber", "pd", "tia"});
    CHECK(run.taps.at("driver").unit == SignalUnit::Volts);
    CHECK(run.taps.at("mzm").unit == SignalUnit::MilliWatts);
    CHECK(run.taps.at("fiber").unit == SignalUnit::MilliWatts);
    CHECK(run.taps.at("pd").unit == SignalUnit::MilliAmps);
    CHECK(run.taps.at("tia").unit == SignalUnit::Volts);
    CHECK(run.taps.at("tia").samples == run.tia_out.samples);
    CHECK_THROWS_AS(run_chain(cfg, 64, {"nonsense"}), ConfigError);
}

TEST_CASE("stage composability: re-feeding a tapped waveform reproduces the run") {
    const LinkConfig cfg = noiseless_config();
    const ChainRun full = run_chain(cfg, 512, {"fiber"});

    const Waveform& fiber = full.taps.at("fiber");
    NoiseConfig off{false, false};
    const Waveform pd = photodetect(fiber, cfg.pd, off, 0);
    const Waveform tia = tia_amplify(pd, cfg.tia, false, 0);
    REQUIRE(tia.samples.size() == full.tia_out.samples.size());
    for (size_t i = 0; i < tia.samples.size(); ++i) {
        REQUIRE(tia.samples[i] == doctest::Approx(full.tia_out.samples[i]).epsilon(1e-12));
    }
}

TEST_CASE("identical seeds give identical runs, different seeds differ") {
    LinkConfig cfg;
    cfg.seed = 7;
    const E2eResult a = run_link_e2e(cfg, 6000);
    const E2eResult b = run_link_e2e(cfg, 6000);
    CHECK(a.ber.bit_errors == b.ber.bit_errors);
    CHECK(a.cdr.data_instants_ui == b.cdr.data_instants_ui);
    CHECK(a.thresholds.t_mid == b.thresholds.t_mid);

    cfg.seed = 8;
    const E2eResult c = run_link_e2e(cfg, 6000);
    CHECK(a.thresholds.t_mid != c.thresholds.t_mid);
}

TEST_CASE("heavy attenuation collapses the link without crashing") {
    LinkConfig cfg;
    cfg.path.voa_atten_db = 20.0;
    cfg.cdr.lock_vote_threshold = 1.1; // loop cannot converge on a drowned eye
    cfg.cdr.lock_wander_ui = 10.0;
    const E2eResult result = run_link_e2e(cfg, 6000);
    CHECK(result.ber.ber > 1e-2);
}

TEST_CASE("voa_for_oma hits the requested oma") {
    const LinkConfig cfg = noiseless_config();
    const double voa = voa_for_oma(cfg, -1.0);
    CHECK(voa > 0.0);

    LinkConfig attenuated = cfg;
    attenuated.path.voa_atten_db = voa;
    const ChainRun run = run_chain(attenuated, 2048, {"fiber"});
    const double center = find_eye_center(run.taps.at("fiber"), 2000);
    std::vector<double> samples;
    for (size_t k = 2; k < 2000; ++k) {
        samples.push_back(run.taps.at("fiber").value_at_ui(static_cast<double>(k) + center));
    }
    const auto means = quartile_level_means(samples);
    CHECK(10.0 * std::log10(means[3] - means[0]) == doctest::Approx(-1.0).epsilon(0.02));

    CHECK_THROWS_AS(voa_for_oma(cfg, 30.0), ConfigError);
}

TEST_CASE("noiseless counted bathtub is clean at the center and closed at the crossing") {
    const LinkConfig cfg = noiseless_config();
    const BathtubExperiment exp =
        experiment_bathtub(cfg, {-1.0}, 1e-8, BathtubMethod::Counted, 4000, 21);
    REQUIRE(exp.runs.size() == 1);
    const auto& points = exp.runs[0].curve.points;
    double center_ber = 1.0, edge_ber = 0.0;
    for (const auto& p : points) {
        if (std::abs(p.phase_ui) < 0.05) center_ber = p.ber;
        if (std::abs(std::abs(p.phase_ui) - 0.5) < 0.03) edge_ber = std::max(edge_ber, p.ber);
    }
    CHECK(center_ber == 0.0);
    CHECK(edge_ber > 0.05);
    CHECK(exp.runs[0].opening.reaches_target);
    CHECK(exp.runs[0].opening.width_ui > 0.3);
}

TEST_CASE("envelope frame codec round-trips") {
    const auto codes = envelope_codes(0.8, 10.0, 61);
    CHECK(codes.size() == 61);
    CHECK(codes[30] == std::lround(0.8 * 255));
    CHECK(codes[0] == codes[60]); // symmetric about the center

    const SymbolStream symbols = codes_to_symbols(codes);
    CHECK(symbols.size() == codes.size() * 4);
    CHECK(symbols_to_codes(symbols) == codes);

    CHECK_THROWS_AS(envelope_codes(1.3, 10.0, 61), ConfigError);
    CHECK_THROWS_AS(envelope_codes(0.5, 0.0, 61), ConfigError);
}

TEST_CASE("quantum demo anchors: p(0) = 0 and a half-scale pulse flips the qubit") {
    const LinkConfig cfg = noiseless_config();
    const QuantumDemo demo = demo_quantum_control(cfg, {0.0, 0.5, 1.0}, 8.0);
    REQUIRE(demo.points.size() == 3);
    for (const auto& p : demo.points) CHECK_FALSE(p.corrupted);
    CHECK(demo.points[0].p_excited == 0.0);
    CHECK(demo.points[1].p_excited > 0.99); // theta = pi at half the full-rotation amplitude
    CHECK(demo.points[2].p_excited < 0.01); // theta = 2*pi rotates back to ground
    CHECK(demo.points[1].nrmse <= std::pow(2.0, -8.0));
}

TEST_CASE("quantum demo flags corrupted frames instead of aborting") {
    const LinkConfig cfg = noiseless_config();
    const QuantumDemo demo = demo_quantum_control(cfg, {0.4, 0.8}, 8.0, 0.25);
    REQUIRE(demo.points.size() == 2);
    bool any_corrupted = false;
    for (const auto& p : demo.points) any_corrupted |= p.corrupted;
    CHECK(any_corrupted);
}

TEST_CASE("budget report rows match the reference arithmetic") {
    const BudgetReport report = budget_report(8);
    REQUIRE(report.power.size() == 6);
    auto rounded = [](double v) { return std::round(v * 100.0) / 100.0; };
    CHECK(rounded(report.power[0].pj_per_bit) == doctest::Approx(0.54));
    CHECK(rounded(report.power[1].pj_per_bit) == doctest::Approx(0.39));
    CHECK(rounded(report.power[2].pj_per_bit) == doctest::Approx(0.27));
    CHECK(rounded(report.power[3].pj_per_bit) == doctest::Approx(0.41));
    CHECK(rounded(report.power[4].pj_per_bit) == doctest::Approx(0.92));
    CHECK(rounded(report.power[5].pj_per_bit) == doctest::Approx(0.68));
    REQUIRE(report.heat.size() == 3);
    CHECK(report.heat[1].load.load_4k_mw == doctest::Approx(2.8));
    CHECK(report.heat[2].load.load_4k_mw == 0.0);
}

TEST_CASE("csv and svg emission") {
    BathtubCurve curve;
    for (int i = 0; i < 5; ++i) {
        BathtubPoint p;
        p.phase_ui = -0.2 + 0.1 * i;
        p.ber = std::pow(10.0, -9.0 + 2.0 * std::abs(i - 2));
        p.method = BathtubMethod::Extrapolated;
        curve.points.push_back(p);
    }
    const std::string csv = bathtub_csv(curve);
    CHECK(csv.find("phase_ui,ber,method") == 0);
    CHECK(csv.find("extrapolated") != std::string::npos);

    PlotSeries s;
    s.label = "test";
    for (const auto& p : curve.points) {
        s.x.push_back(p.phase_ui);
        s.y.push_back(p.ber);
    }
    const std::string svg = svg_line_plot({s}, "t", "x", "y", true);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("atomic writes land complete files") {
    const std::string path = "test_output_atomic.txt";
    write_text_atomic(path, "hello\n");
    std::ifstream f(path);
    std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(content == "hello\n");
    std::remove(path.c_str());
    std::remove((path + ".tmp").c_str());
}
