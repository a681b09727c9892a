#include <doctest.h>

#include "cryolink/config.hpp"
#include "cryolink/errors.hpp"

using namespace cryolink;

TEST_CASE("empty config yields defaults") {
    const LinkConfig cfg = parse_config("");
    CHECK(cfg.baud_hz == 28e9);
    CHECK(cfg.osr == 16.0);
    CHECK(cfg.pd.responsivity_a_per_w == 0.35);
    CHECK(cfg.tia.transimpedance_ohm == 2100.0);
    CHECK(cfg.cdr.vco.f_min_hz == 13.5e9);
    CHECK(cfg.cdr.vco.f_max_hz == 14.6e9);
    CHECK(cfg.driver.diff_swing_v == 1.3);
    CHECK(cfg.cdr.baud_nominal_hz == cfg.baud_hz);
}

TEST_CASE("comments, spacing, and overrides") {
    const LinkConfig cfg = parse_config(
        "# a comment\n"
        "  pd.responsivity = 0.5   # trailing comment\n"
        "\n"
        "path.voa_atten_db = 2.5\n"
        "noise.shot = off\n"
        "seed = 99\n");
    CHECK(cfg.pd.responsivity_a_per_w == 0.5);
    CHECK(cfg.path.voa_atten_db == 2.5);
    CHECK_FALSE(cfg.noise.shot);
    CHECK(cfg.seed == 99);
}

TEST_CASE("unknown keys are rejected by name") {
    CHECK_THROWS_WITH_AS(parse_config("pd.responsivty = 0.35\n"), "unknown config key 'pd.responsivty'",
                         ConfigError);
}

TEST_CASE("invariant violations name the offender") {
    CHECK_THROWS_WITH_AS(parse_config("pd.responsivity = -0.1\n"), "pd.responsivity out of (0,1.2]",
                         ConfigError);
    CHECK_THROWS_AS(parse_config("ffe.pre = -0.4\nffe.main = 0.5\nffe.post = -0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("baud = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("pd.responsivity = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("pd.responsivity\n"), ConfigError);
}

TEST_CASE("emit/parse round-trip reproduces the config exactly") {
    LinkConfig cfg = parse_config("");
    cfg.mzm.v_pi_v = 4.2987654321;
    cfg.tia.input_noise_density_pa_rthz = 27.123456789;
    cfg.seed = 1234567;
    const std::string text = emit_config(cfg);
    const LinkConfig back = parse_config(text);
    CHECK(back.mzm.v_pi_v == cfg.mzm.v_pi_v);
    CHECK(back.tia.input_noise_density_pa_rthz == cfg.tia.input_noise_density_pa_rthz);
    CHECK(back.seed == cfg.seed);
    CHECK(emit_config(back) == text);
}

TEST_CASE("config report carries exactly one provenance tag per key") {
    const LinkConfig cfg = parse_config("");
    const auto rows = describe_config(cfg);
    CHECK(rows.size() > 30);
    const std::string report = config_report(cfg);
    for (const auto& row : rows) {
        CHECK(report.find(row.key + " = ") != std::string::npos);
        int tags = 0;
        const std::string line_start = row.key + " = ";
        const size_t at = report.find(line_start);
        const size_t end = report.find('\n', at);
        const std::string line = report.substr(at, end - at);
        for (const char* tag : {"[measured]", "[calibrated]", "[modeled]"}) {
            if (line.find(tag) != std::string::npos) ++tags;
        }
        CHECK(tags == 1);
    }
}

TEST_CASE("measured anchors carry the measured tag") {
    const LinkConfig cfg = parse_config("");
    for (const auto& row : describe_config(cfg)) {
        if (row.key == "pd.responsivity" || row.key == "tia.transimpedance" || row.key == "vco.f_min_hz" ||
            row.key == "driver.diff_swing") {
            CHECK(row.provenance == Provenance::Measured);
        }
        if (row.key == "mzm.v_pi" || row.key == "tia.input_noise_density") {
            CHECK(row.provenance == Provenance::Calibrated);
        }
    }
}
