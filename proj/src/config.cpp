// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "femtoslice/csv.hpp"
#include "femtoslice/errors.hpp"

namespace femtoslice::cli {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& message) {
    throw ConfigError(where.empty() ? message : where + ": " + message);
}

double parse_double(const std::string& value, const std::string& key,
                    const std::string& where) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (...) {
        bad(where, "key '" + key + "' needs a number, got '" + value + "'");
    }
    if (used != value.size()) {
        bad(where, "key '" + key + "' needs a number, got '" + value + "'");
    }
    return out;
}

long long parse_int(const std::string& value, const std::string& key,
                    const std::string& where) {
    std::size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(value, &used);
    } catch (...) {
        bad(where, "key '" + key + "' needs an integer, got '" + value + "'");
    }
    if (used != value.size()) {
        bad(where, "key '" + key + "' needs an integer, got '" + value + "'");
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ia::Mode parse_mode(const std::string& text) {
    if (text == "zf") return ia::Mode::Zf;
    if (text == "mmse") return ia::Mode::Mmse;
    if (text == "mmse-iter") return ia::Mode::MmseIterated;
    throw ConfigError("ia_mode must be one of zf, mmse, mmse-iter; got '" + text + "'");
}

std::string mode_name(ia::Mode mode) {
    switch (mode) {
        case ia::Mode::Zf: return "zf";
        case ia::Mode::Mmse: return "mmse";
        case ia::Mode::MmseIterated: return "mmse-iter";
    }
    return "mmse";
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value,
               const std::string& where) {
    channel::SystemParams& p = config.params;
    if (key == "num_macro_users") {
        p.num_macro_users = static_cast<int>(parse_int(value, key, where));
    } else if (key == "num_femto_users") {
        p.num_femto_users = static_cast<int>(parse_int(value, key, where));
    } else if (key == "num_subchannels") {
        p.num_subchannels = static_cast<int>(parse_int(value, key, where));
    } else if (key == "tx_power_macro") {
        p.tx_power_macro = parse_double(value, key, where);
    } else if (key == "tx_power_femto1") {
        p.tx_power_femto1 = parse_double(value, key, where);
    } else if (key == "tx_power_femto2") {
        p.tx_power_femto2 = parse_double(value, key, where);
    } else if (key == "pathloss_exponent") {
        p.pathloss_exponent = parse_double(value, key, where);
    } else if (key == "penetration_db") {
        // Wall loss quoted in dB (e.g. -10); stored as a linear gain.
        p.penetration_gain = std::pow(10.0, parse_double(value, key, where) / 10.0);
    } else if (key == "d0_outdoor_m") {
        p.d0_outdoor_m = parse_double(value, key, where);
    } else if (key == "d0_indoor_m") {
        p.d0_indoor_m = parse_double(value, key, where);
    } else if (key == "carrier_hz") {
        p.carrier_hz = parse_double(value, key, where);
    } else if (key == "macro_radius_m") {
        p.macro_radius_m = parse_double(value, key, where);
    } else if (key == "femto_radius_m") {
        p.femto_radius_m = parse_double(value, key, where);
    } else if (key == "min_bs_user_distance_outdoor_m") {
        p.min_bs_user_distance_outdoor_m = parse_double(value, key, where);
    } else if (key == "min_bs_user_distance_indoor_m") {
        p.min_bs_user_distance_indoor_m = parse_double(value, key, where);
    } else if (key == "snr_db_grid") {
        std::vector<double> grid;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) bad(where, "snr_db_grid has an empty entry");
            grid.push_back(parse_double(item, key, where));
        }
        if (grid.empty()) bad(where, "snr_db_grid must list at least one value");
        p.snr_db_grid = std::move(grid);
    } else if (key == "trials") {
        p.trials = static_cast<int>(parse_int(value, key, where));
    } else if (key == "master_seed") {
        p.master_seed = static_cast<std::uint64_t>(parse_int(value, key, where));
    } else if (key == "ia_iterations") {
        p.ia_iterations = static_cast<int>(parse_int(value, key, where));
    } else if (key == "ia_mode") {
        try {
            config.ia_mode = parse_mode(value);
        } catch (const ConfigError& e) {
            bad(where, e.what());
        }
    } else {
        bad(where, "unknown key '" + key + "'");
    }
}

void parse_config_stream(RunConfig& config, std::istream& in,
                         const std::string& filename) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = filename + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad(where, "expected key = value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) bad(where, "missing key before '='");
        if (value.empty()) bad(where, "missing value for key '" + key + "'");
        apply_key(config, key, value, where);
    }
}

void parse_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    parse_config_stream(config, in, path);
}

void echo_resolved(const RunConfig& config, std::ostream& out) {
    const channel::SystemParams& p = config.params;
    auto num = [](double v) { return csv::format_number(v); };
    out << "# num_macro_users = " << p.num_macro_users << "\n";
    out << "# num_femto_users = " << p.num_femto_users << "\n";
    out << "# num_subchannels = " << p.num_subchannels << "\n";
    out << "# tx_power_macro = " << num(p.tx_power_macro) << "\n";
    out << "# tx_power_femto1 = " << num(p.tx_power_femto1) << "\n";
    out << "# tx_power_femto2 = " << num(p.tx_power_femto2) << "\n";
    out << "# pathloss_exponent = " << num(p.pathloss_exponent) << "\n";
    out << "# penetration_db = " << num(10.0 * std::log10(p.penetration_gain)) << "\n";
    out << "# d0_outdoor_m = " << num(p.d0_outdoor_m) << "\n";
    out << "# d0_indoor_m = " << num(p.d0_indoor_m) << "\n";
    out << "# carrier_hz = " << num(p.carrier_hz) << "\n";
    out << "# macro_radius_m = " << num(p.macro_radius_m) << "\n";
    out << "# femto_radius_m = " << num(p.femto_radius_m) << "\n";
    out << "# min_bs_user_distance_outdoor_m = " << num(p.min_bs_user_distance_outdoor_m)
        << "\n";
    out << "# min_bs_user_distance_indoor_m = " << num(p.min_bs_user_distance_indoor_m)
        << "\n";
    out << "# snr_db_grid = ";
    for (std::size_t i = 0; i < p.snr_db_grid.size(); ++i) {
        if (i) out << ",";
        out << num(p.snr_db_grid[i]);
    }
    out << "\n";
    out << "# trials = " << p.trials << "\n";
    out << "# master_seed = " << p.master_seed << "\n";
    out << "# ia_iterations = " << p.ia_iterations << "\n";
    out << "# ia_mode = " << mode_name(config.ia_mode) << "\n";
}

} // namespace femtoslice::cli
