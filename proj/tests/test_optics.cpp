#include <doctest.h>

#include <cmath>

#include "cryolink/errors.hpp"
#include "cryolink/metrics.hpp"
#include "cryolink/optics.hpp"

using namespace cryolink;

namespace {

Waveform volts_wave(std::vector<double> samples) {
    Waveform w;
    w.unit = SignalUnit::Volts;
    w.baud_hz = 28e9;
    w.samples_per_ui = 16;
    w.samples = std::move(samples);
    return w;
}

double mzm_power(double v, const MzmConfig& cfg, double laser_mw) {
    return mzm_modulate(volts_wave({v}), cfg, laser_mw).samples[0];
}

double outer_er_db(double half_swing_v, const MzmConfig& cfg) {
    return 10.0 * std::log10(mzm_power(half_swing_v, cfg, 1.0) / mzm_power(-half_swing_v, cfg, 1.0));
}

} // namespace

TEST_CASE("mzm transfer hits quadrature midpoint and extremes") {
    MzmConfig cfg;
    const double p_max = 1.0 / db_to_linear(cfg.insertion_loss_db);
    const double p_floor = p_max / db_to_linear(cfg.static_er_db);

    CHECK(mzm_power(0.0, cfg, 1.0) == doctest::Approx((p_max + p_floor) / 2.0).epsilon(1e-12));
    CHECK(mzm_power(cfg.v_pi_v / 2.0, cfg, 1.0) == doctest::Approx(p_max).epsilon(1e-12));
    CHECK(mzm_power(-cfg.v_pi_v / 2.0, cfg, 1.0) == doctest::Approx(p_floor).epsilon(1e-12));
}

TEST_CASE("default v_pi reproduces the 4.3 dB outer extinction at full swing") {
    MzmConfig cfg;
    // root-find the v_pi that gives exactly 4.3 dB at +-0.65 V drive
    double lo = 2.0, hi = 12.0;
    for (int i = 0; i < 200; ++i) {
        MzmConfig probe = cfg;
        probe.v_pi_v = 0.5 * (lo + hi);
        // ER falls as v_pi rises
        if (outer_er_db(0.65, probe) > 4.3) lo = probe.v_pi_v; else hi = probe.v_pi_v;
    }
    const double v_pi_root = 0.5 * (lo + hi);
    // frozen default sits within 1% of the root; its ER lands within 0.05 dB
    CHECK(cfg.v_pi_v == doctest::Approx(v_pi_root).epsilon(0.01));
    CHECK(outer_er_db(0.65, cfg) == doctest::Approx(4.3).epsilon(0.012));
}

TEST_CASE("mzm transfer is monotone over the linear segment") {
    MzmConfig cfg;
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double v = -cfg.v_pi_v / 2.0 + cfg.v_pi_v * i / 50.0;
        const double p = mzm_power(v, cfg, 1.0);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("mzm er/oma agrees with the closed-form transfer within 1e-9") {
    MzmConfig cfg;
    const double p_hi = mzm_power(0.65, cfg, 2.0);
    const double p_lo = mzm_power(-0.65, cfg, 2.0);
    const OmaEr m = oma_er({p_lo, p_lo, p_hi, p_hi});
    CHECK(m.er_db == doctest::Approx(10.0 * std::log10(p_hi / p_lo)).epsilon(1e-9));
    CHECK(m.oma_dbm == doctest::Approx(10.0 * std::log10(p_hi - p_lo)).epsilon(1e-9));
}

TEST_CASE("propagate applies the dB definition") {
    Waveform w = volts_wave({1.0});
    w.unit = SignalUnit::MilliWatts;

    OpticalPath path;
    path.fiber_loss_db = 3.0;
    path.voa_atten_db = 0.0;
    CHECK(propagate(w, path).samples[0] == doctest::Approx(0.5012).epsilon(1e-3));

    path.fiber_loss_db = 0.0;
    CHECK(propagate(w, path).samples[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("attenuation composes additively in dB and scales OMA linearly") {
    Waveform two_level = volts_wave({0.2, 1.0, 0.2, 1.0});
    two_level.unit = SignalUnit::MilliWatts;

    OpticalPath a;
    a.fiber_loss_db = 1.3;
    a.voa_atten_db = 0.0;
    OpticalPath b;
    b.fiber_loss_db = 2.4;
    b.voa_atten_db = 0.0;
    OpticalPath ab;
    ab.fiber_loss_db = 1.3 + 2.4;
    ab.voa_atten_db = 0.0;

    const Waveform chained = propagate(propagate(two_level, a), b);
    const Waveform direct = propagate(two_level, ab);
    for (size_t i = 0; i < chained.samples.size(); ++i) {
        CHECK(chained.samples[i] == doctest::Approx(direct.samples[i]).epsilon(1e-12));
    }
    const double oma_in = two_level.samples[1] - two_level.samples[0];
    const double oma_out = direct.samples[1] - direct.samples[0];
    CHECK(oma_out == doctest::Approx(oma_in / db_to_linear(3.7)).epsilon(1e-12));
}

TEST_CASE("photodetect applies responsivity") {
    Waveform w = volts_wave(std::vector<double>(100, 1.0));
    w.unit = SignalUnit::MilliWatts;
    PdConfig pd;
    const Waveform i = photodetect(w, pd, NoiseConfig{false, false}, 1);
    CHECK(i.unit == SignalUnit::MilliAmps);
    for (double s : i.samples) CHECK(s == doctest::Approx(0.35).epsilon(1e-12));

    Waveform dark = volts_wave(std::vector<double>(10, 0.0));
    dark.unit = SignalUnit::MilliWatts;
    for (double s : photodetect(dark, pd, NoiseConfig{false, false}, 1).samples) CHECK(s == 0.0);
}

TEST_CASE("photodetect shot noise is seed-deterministic") {
    Waveform w = volts_wave(std::vector<double>(4096, 0.5));
    w.unit = SignalUnit::MilliWatts;
    PdConfig pd;
    const NoiseConfig noise{true, false};
    const Waveform a = photodetect(w, pd, noise, 42);
    const Waveform b = photodetect(w, pd, noise, 42);
    const Waveform c = photodetect(w, pd, noise, 43);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
}

TEST_CASE("optical power stays nonnegative through the chain") {
    MzmConfig cfg;
    std::vector<double> drive(256);
    for (size_t i = 0; i < drive.size(); ++i) drive[i] = -3.0 + 6.0 * static_cast<double>(i) / 255.0;
    const Waveform p = mzm_modulate(volts_wave(std::move(drive)), cfg, 1.0);
    for (double s : p.samples) CHECK(s >= 0.0);
}

TEST_CASE("config invariants are enforced") {
    PdConfig pd;
    pd.responsivity_a_per_w = -0.1;
    CHECK_THROWS_WITH_AS(pd.validate(), "pd.responsivity out of (0,1.2]", ConfigError);
    MzmConfig mzm;
    mzm.v_pi_v = 0.0;
    CHECK_THROWS_AS(mzm.validate(), ConfigError);
    OpticalPath path;
    path.laser_power_mw = 0.0;
    CHECK_THROWS_AS(path.validate(), ConfigError);
}
