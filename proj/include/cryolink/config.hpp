#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cryolink/cdr.hpp"
#include "cryolink/optics.hpp"
#include "cryolink/rx_chain.hpp"
#include "cryolink/tx_chain.hpp"

namespace cryolink {

// Every physical and loop parameter of the link. Defaults reproduce the
// reference 56 Gb/s PAM-4 operating point; per-key provenance is listed in
// the generated config report.
struct LinkConfig {
    double baud_hz = 28e9; // 28 GBaud PAM-4 = 56 Gb/s
    double osr = 16.0;     // samples per UI
    uint64_t seed = 1;
    double ppm_offset = 0.0; // TX symbol-rate offset from nominal, ppm

    FfeTaps ffe;
    DriverConfig driver;
    MzmConfig mzm;
    OpticalPath path;
    PdConfig pd;
    TiaConfig tia;
    CdrConfig cdr;
    NoiseConfig noise;

    double actual_baud_hz() const { return baud_hz * (1.0 + ppm_offset * 1e-6); }
    double data_rate_gbps() const { return 2.0 * baud_hz / 1e9; } // PAM-4: 2 bits per symbol

    void validate() const;
};

enum class Provenance { Measured, Calibrated, Modeled };

std::string to_string(Provenance p);

struct ConfigKeyInfo {
    std::string key;
    std::string value;
    Provenance provenance;
    std::string description;
};

// Flat key-value text: one `dotted.key = value` per line, `#` comments.
// Unknown keys and invariant violations raise ConfigError naming the
// offender.
LinkConfig parse_config(const std::string& text);
LinkConfig load_config(const std::string& path);

// Serializes every key at full precision; reloading reproduces the config
// exactly.
std::string emit_config(const LinkConfig& cfg);

// One row per key with its current value, provenance and description.
std::vector<ConfigKeyInfo> describe_config(const LinkConfig& cfg);

// The config-report text emitted next to experiment outputs.
std::string config_report(const LinkConfig& cfg);

} // namespace cryolink
