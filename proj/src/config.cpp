#include "cryolink/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "cryolink/errors.hpp"

namespace cryolink {

void LinkConfig::validate() const {
    if (baud_hz <= 0.0) throw ConfigError("baud must be positive");
    if (osr < 8.0) throw ConfigError("osr must be >= 8 samples per UI");
    ffe.quantized().validate();
    driver.validate();
    mzm.validate();
    path.validate();
    pd.validate();
    tia.validate();
    cdr.validate();
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Measured: return "measured";
        case Provenance::Calibrated: return "calibrated";
        case Provenance::Modeled: return "modeled";
    }
    return "?";
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected on/off, got '" + value + "'");
}

struct KeyDef {
    const char* key;
    Provenance provenance;
    const char* description;
    std::function<std::string(const LinkConfig&)> get;
    std::function<void(LinkConfig&, const std::string&)> set;
};

const std::vector<KeyDef>& key_table() {
    static const std::vector<KeyDef> table = {
        {"baud", Provenance::Measured, "symbol rate, Hz (56 Gb/s PAM-4 at 28 GBaud)",
         [](const LinkConfig& c) { return fmt_double(c.baud_hz); },
         [](LinkConfig& c, const std::string& v) { c.baud_hz = parse_double("baud", v); }},
        {"osr", Provenance::Modeled, "simulation oversampling, samples per UI",
         [](const LinkConfig& c) { return fmt_double(c.osr); },
         [](LinkConfig& c, const std::string& v) { c.osr = parse_double("osr", v); }},
        {"seed", Provenance::Modeled, "master RNG seed; all noise streams derive from it",
         [](const LinkConfig& c) { return std::to_string(c.seed); },
         [](LinkConfig& c, const std::string& v) {
             try {
                 c.seed = std::stoull(v);
             } catch (const std::exception&) {
                 throw ConfigError("key 'seed': cannot parse '" + v + "'");
             }
         }},
        {"ppm_offset", Provenance::Modeled, "TX symbol-rate offset from nominal, ppm",
         [](const LinkConfig& c) { return fmt_double(c.ppm_offset); },
         [](LinkConfig& c, const std::string& v) { c.ppm_offset = parse_double("ppm_offset", v); }},

        {"ffe.pre", Provenance::Modeled, "FFE pre-cursor weight, full-scale fraction",
         [](const LinkConfig& c) { return fmt_double(c.ffe.pre); },
         [](LinkConfig& c, const std::string& v) { c.ffe.pre = parse_double("ffe.pre", v); }},
        {"ffe.main", Provenance::Modeled, "FFE main-cursor weight",
         [](const LinkConfig& c) { return fmt_double(c.ffe.main); },
         [](LinkConfig& c, const std::string& v) { c.ffe.main = parse_double("ffe.main", v); }},
        {"ffe.post", Provenance::Modeled, "FFE post-cursor weight",
         [](const LinkConfig& c) { return fmt_double(c.ffe.post); },
         [](LinkConfig& c, const std::string& v) { c.ffe.post = parse_double("ffe.post", v); }},
        {"ffe.idac_bits", Provenance::Modeled, "IDAC resolution per tap magnitude, bits",
         [](const LinkConfig& c) { return std::to_string(c.ffe.idac_bits); },
         [](LinkConfig& c, const std::string& v) {
             c.ffe.idac_bits = static_cast<int>(parse_double("ffe.idac_bits", v));
         }},

        {"driver.diff_swing", Provenance::Measured, "differential output swing, V",
         [](const LinkConfig& c) { return fmt_double(c.driver.diff_swing_v); },
         [](LinkConfig& c, const std::string& v) {
             c.driver.diff_swing_v = parse_double("driver.diff_swing", v);
         }},
        {"driver.bandwidth_hz", Provenance::Modeled, "driver single-pole bandwidth, Hz (0.75 x baud)",
         [](const LinkConfig& c) { return fmt_double(c.driver.bandwidth_hz); },
         [](LinkConfig& c, const std::string& v) {
             c.driver.bandwidth_hz = parse_double("driver.bandwidth_hz", v);
         }},

        {"mzm.v_pi", Provenance::Calibrated,
         "half-wave voltage, V; fitted so the full 1.3 V swing yields a 4.3 dB outer ER",
         [](const LinkConfig& c) { return fmt_double(c.mzm.v_pi_v); },
         [](LinkConfig& c, const std::string& v) { c.mzm.v_pi_v = parse_double("mzm.v_pi", v); }},
        {"mzm.bias_phase_rad", Provenance::Modeled, "interferometer bias, rad (-pi/2 = quadrature)",
         [](const LinkConfig& c) { return fmt_double(c.mzm.bias_phase_rad); },
         [](LinkConfig& c, const std::string& v) {
             c.mzm.bias_phase_rad = parse_double("mzm.bias_phase_rad", v);
         }},
        {"mzm.insertion_loss_db", Provenance::Modeled, "modulator insertion loss, dB",
         [](const LinkConfig& c) { return fmt_double(c.mzm.insertion_loss_db); },
         [](LinkConfig& c, const std::string& v) {
             c.mzm.insertion_loss_db = parse_double("mzm.insertion_loss_db", v);
         }},
        {"mzm.static_er_db", Provenance::Modeled, "static extinction floor, dB",
         [](const LinkConfig& c) { return fmt_double(c.mzm.static_er_db); },
         [](LinkConfig& c, const std::string& v) {
             c.mzm.static_er_db = parse_double("mzm.static_er_db", v);
         }},

        {"path.laser_power_mw", Provenance::Modeled, "1530 nm launch power, mW (stand-in)",
         [](const LinkConfig& c) { return fmt_double(c.path.laser_power_mw); },
         [](LinkConfig& c, const std::string& v) {
             c.path.laser_power_mw = parse_double("path.laser_power_mw", v);
         }},
        {"path.fiber_loss_db", Provenance::Modeled, "5 m patch plus connector loss, dB",
         [](const LinkConfig& c) { return fmt_double(c.path.fiber_loss_db); },
         [](LinkConfig& c, const std::string& v) {
             c.path.fiber_loss_db = parse_double("path.fiber_loss_db", v);
         }},
        {"path.voa_atten_db", Provenance::Modeled, "variable optical attenuator setting, dB",
         [](const LinkConfig& c) { return fmt_double(c.path.voa_atten_db); },
         [](LinkConfig& c, const std::string& v) {
             c.path.voa_atten_db = parse_double("path.voa_atten_db", v);
         }},

        {"pd.responsivity", Provenance::Measured, "photodiode responsivity at 4 K, A/W",
         [](const LinkConfig& c) { return fmt_double(c.pd.responsivity_a_per_w); },
         [](LinkConfig& c, const std::string& v) {
             c.pd.responsivity_a_per_w = parse_double("pd.responsivity", v);
         }},
        {"pd.capacitance_ff", Provenance::Measured,
         "photodiode capacitance at 4 K, fF (absorbed into tia.bandwidth_hz)",
         [](const LinkConfig& c) { return fmt_double(c.pd.capacitance_ff); },
         [](LinkConfig& c, const std::string& v) {
             c.pd.capacitance_ff = parse_double("pd.capacitance_ff", v);
         }},
        {"pd.dark_current_na", Provenance::Modeled, "dark current, nA",
         [](const LinkConfig& c) { return fmt_double(c.pd.dark_current_na); },
         [](LinkConfig& c, const std::string& v) {
             c.pd.dark_current_na = parse_double("pd.dark_current_na", v);
         }},

        {"tia.transimpedance", Provenance::Measured, "transimpedance, ohm",
         [](const LinkConfig& c) { return fmt_double(c.tia.transimpedance_ohm); },
         [](LinkConfig& c, const std::string& v) {
             c.tia.transimpedance_ohm = parse_double("tia.transimpedance", v);
         }},
        {"tia.bandwidth_hz", Provenance::Modeled,
         "composite front-end pole (PD RC, T-coil, TIA stages), Hz (0.7 x baud)",
         [](const LinkConfig& c) { return fmt_double(c.tia.bandwidth_hz); },
         [](LinkConfig& c, const std::string& v) {
             c.tia.bandwidth_hz = parse_double("tia.bandwidth_hz", v);
         }},
        {"tia.input_noise_density", Provenance::Calibrated,
         "input-referred current noise, pA/rtHz; fitted to the -1 dBm OMA, 18% UI, 1e-8 BER point",
         [](const LinkConfig& c) { return fmt_double(c.tia.input_noise_density_pa_rthz); },
         [](LinkConfig& c, const std::string& v) {
             c.tia.input_noise_density_pa_rthz = parse_double("tia.input_noise_density", v);
         }},
        {"tia.dc_comp_cutoff_hz", Provenance::Modeled, "DC-compensation high-pass cutoff, Hz",
         [](const LinkConfig& c) { return fmt_double(c.tia.dc_comp_cutoff_hz); },
         [](LinkConfig& c, const std::string& v) {
             c.tia.dc_comp_cutoff_hz = parse_double("tia.dc_comp_cutoff_hz", v);
         }},
        {"tia.dc_comp", Provenance::Modeled, "DC compensation enable",
         [](const LinkConfig& c) { return c.tia.dc_comp_enabled ? std::string("on") : std::string("off"); },
         [](LinkConfig& c, const std::string& v) { c.tia.dc_comp_enabled = parse_bool("tia.dc_comp", v); }},

        {"vco.f_min_hz", Provenance::Measured, "VCO tuning range lower edge, Hz",
         [](const LinkConfig& c) { return fmt_double(c.cdr.vco.f_min_hz); },
         [](LinkConfig& c, const std::string& v) { c.cdr.vco.f_min_hz = parse_double("vco.f_min_hz", v); }},
        {"vco.f_max_hz", Provenance::Measured, "VCO tuning range upper edge, Hz",
         [](const LinkConfig& c) { return fmt_double(c.cdr.vco.f_max_hz); },
         [](LinkConfig& c, const std::string& v) { c.cdr.vco.f_max_hz = parse_double("vco.f_max_hz", v); }},
        {"vco.bank_bits", Provenance::Measured, "capacitance-bank resolution, bits",
         [](const LinkConfig& c) { return std::to_string(c.cdr.vco.bank_bits); },
         [](LinkConfig& c, const std::string& v) {
             c.cdr.vco.bank_bits = static_cast<int>(parse_double("vco.bank_bits", v));
         }},
        {"vco.kvco_hz_per_v", Provenance::Modeled, "varactor gain, Hz/V",
         [](const LinkConfig& c) { return fmt_double(c.cdr.vco.kvco_hz_per_v); },
         [](LinkConfig& c, const std::string& v) {
             c.cdr.vco.kvco_hz_per_v = parse_double("vco.kvco_hz_per_v", v);
         }},

        {"cdr.kp", Provenance::Modeled, "proportional gain, V per vote",
         [](const LinkConfig& c) { return fmt_double(c.cdr.kp_v_per_vote); },
         [](LinkConfig& c, const std::string& v) { c.cdr.kp_v_per_vote = parse_double("cdr.kp", v); }},
        {"cdr.ki", Provenance::Modeled, "integral gain, V per vote",
         [](const LinkConfig& c) { return fmt_double(c.cdr.ki_v_per_vote); },
         [](LinkConfig& c, const std::string& v) { c.cdr.ki_v_per_vote = parse_double("cdr.ki", v); }},
        {"cdr.reset_phase_ui", Provenance::Modeled, "sampling phase at loop reset, UI",
         [](const LinkConfig& c) { return fmt_double(c.cdr.reset_phase_ui); },
         [](LinkConfig& c, const std::string& v) {
             c.cdr.reset_phase_ui = parse_double("cdr.reset_phase_ui", v);
         }},
        {"cdr.lock_budget_symbols", Provenance::Modeled, "acquisition budget before failure",
         [](const LinkConfig& c) { return std::to_string(c.cdr.lock_budget_symbols); },
         [](LinkConfig& c, const std::string& v) {
             c.cdr.lock_budget_symbols = static_cast<size_t>(parse_double("cdr.lock_budget_symbols", v));
         }},
        {"cdr.jitter_rw_ui", Provenance::Modeled, "VCO random-walk jitter per symbol, UI (0 = off)",
         [](const LinkConfig& c) { return fmt_double(c.cdr.jitter_rw_ui); },
         [](LinkConfig& c, const std::string& v) { c.cdr.jitter_rw_ui = parse_double("cdr.jitter_rw_ui", v); }},

        {"noise.shot", Provenance::Modeled, "photodiode shot noise enable",
         [](const LinkConfig& c) { return c.noise.shot ? std::string("on") : std::string("off"); },
         [](LinkConfig& c, const std::string& v) { c.noise.shot = parse_bool("noise.shot", v); }},
        {"noise.tia", Provenance::Modeled, "TIA input noise enable",
         [](const LinkConfig& c) { return c.noise.tia ? std::string("on") : std::string("off"); },
         [](LinkConfig& c, const std::string& v) { c.noise.tia = parse_bool("noise.tia", v); }},
    };
    return table;
}

} // namespace

LinkConfig parse_config(const std::string& text) {
    LinkConfig cfg;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool found = false;
        for (const auto& def : key_table()) {
            if (key == def.key) {
                def.set(cfg, value);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("unknown config key '" + key + "'");
    }
    cfg.cdr.baud_nominal_hz = cfg.baud_hz;
    cfg.cdr.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

LinkConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const LinkConfig& cfg) {
    std::ostringstream out;
    for (const auto& def : key_table()) out << def.key << " = " << def.get(cfg) << "\n";
    return out.str();
}

std::vector<ConfigKeyInfo> describe_config(const LinkConfig& cfg) {
    std::vector<ConfigKeyInfo> rows;
    rows.reserve(key_table().size());
    for (const auto& def : key_table()) {
        rows.push_back({def.key, def.get(cfg), def.provenance, def.description});
    }
    return rows;
}

std::string config_report(const LinkConfig& cfg) {
    std::ostringstream out;
    out << "# link configuration report\n";
    out << "# provenance: measured = reference hardware figure; calibrated = fitted to a\n";
    out << "# measured operating point; modeled = behavioral modeling choice\n";
    for (const auto& row : describe_config(cfg)) {
        out << row.key << " = " << row.value << "  [" << to_string(row.provenance) << "] " << row.description
            << "\n";
    }
    return out.str();
}

} // namespace cryolink
