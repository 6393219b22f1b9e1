// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "femtoslice/config.hpp"
#include "femtoslice/csv.hpp"
#include "femtoslice/errors.hpp"

using namespace femtoslice;
using cli::RunConfig;

namespace {

std::string error_text(RunConfig& config, const std::string& body) {
    std::istringstream in(body);
    try {
        cli::parse_config_stream(config, in, "test.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("defaults survive an empty configuration") {
    RunConfig config;
    std::istringstream in("\n# only a comment\n\n");
    cli::parse_config_stream(config, in, "empty.cfg");
    CHECK(config.params.num_macro_users == 5);
    CHECK(config.params.num_femto_users == 5);
    CHECK(config.params.num_subchannels == 6);
    CHECK(config.params.penetration_gain == doctest::Approx(0.1));
    CHECK(config.params.trials == 1000);
    CHECK(config.ia_mode == ia::Mode::Mmse);
    CHECK_NOTHROW(config.params.validate());
}

TEST_CASE("a full configuration file overrides every field it names") {
    RunConfig config;
    std::istringstream in(
        "# run shape\n"
        "num_macro_users = 3\n"
        "num_femto_users = 4\n"
        "num_subchannels = 6\n"
        "tx_power_macro = 2.5\n"
        "penetration_db = -3   # half-ish\n"
        "carrier_hz = 2.4e9\n"
        "snr_db_grid = 0, 10,20\n"
        "trials = 50\n"
        "master_seed = 99\n"
        "ia_iterations = 2\n"
        "ia_mode = mmse-iter\n");
    cli::parse_config_stream(config, in, "full.cfg");
    CHECK(config.params.num_macro_users == 3);
    CHECK(config.params.num_femto_users == 4);
    CHECK(config.params.tx_power_macro == doctest::Approx(2.5));
    CHECK(config.params.penetration_gain == doctest::Approx(0.5011872336272722));
    CHECK(config.params.carrier_hz == doctest::Approx(2.4e9));
    CHECK(config.params.snr_db_grid == std::vector<double>{0.0, 10.0, 20.0});
    CHECK(config.params.trials == 50);
    CHECK(config.params.master_seed == 99);
    CHECK(config.params.ia_iterations == 2);
    CHECK(config.ia_mode == ia::Mode::MmseIterated);
    CHECK_NOTHROW(config.params.validate());
}

TEST_CASE("wall loss converts from dB exactly once") {
    RunConfig config;
    cli::apply_key(config, "penetration_db", "-10", "");
    CHECK(config.params.penetration_gain == doctest::Approx(0.1).epsilon(1e-12));
    cli::apply_key(config, "penetration_db", "0", "");
    CHECK(config.params.penetration_gain == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mode names round trip") {
    CHECK(cli::parse_mode("zf") == ia::Mode::Zf);
    CHECK(cli::parse_mode("mmse") == ia::Mode::Mmse);
    CHECK(cli::parse_mode("mmse-iter") == ia::Mode::MmseIterated);
    CHECK(cli::mode_name(ia::Mode::Zf) == "zf");
    CHECK(cli::mode_name(ia::Mode::Mmse) == "mmse");
    CHECK(cli::mode_name(ia::Mode::MmseIterated) == "mmse-iter");
    CHECK_THROWS_AS(cli::parse_mode("dirty-paper"), ConfigError);
}

TEST_CASE("errors carry the file name and line number") {
    RunConfig config;
    CHECK(error_text(config, "trials = 5\nbogus_key = 1\n")
              .find("test.cfg:2") != std::string::npos);
    CHECK(error_text(config, "bogus_key = 1").find("unknown key 'bogus_key'") !=
          std::string::npos);
    CHECK(error_text(config, "trials = soon").find("integer") != std::string::npos);
    CHECK(error_text(config, "tx_power_macro = loud").find("number") !=
          std::string::npos);
    CHECK(error_text(config, "just some words").find("key = value") != std::string::npos);
    CHECK(error_text(config, "= 5").find("missing key") != std::string::npos);
    CHECK(error_text(config, "trials =").find("missing value") != std::string::npos);
    CHECK(error_text(config, "snr_db_grid = 10,,20").find("empty entry") !=
          std::string::npos);
}

TEST_CASE("a missing file is reported by name") {
    RunConfig config;
    try {
        cli::parse_config_file(config, "/nonexistent/nowhere.cfg");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/nowhere.cfg") != std::string::npos);
    }
}

TEST_CASE("parsed values that break invariants fail validation") {
    RunConfig config;
    std::istringstream in("num_subchannels = 4\n");   // needs 5 + 1 by default
    cli::parse_config_stream(config, in, "shape.cfg");
    CHECK_THROWS_AS(config.params.validate(), ConfigError);
}

TEST_CASE("the resolved echo lists every key in a stable shape") {
    RunConfig config;
    std::ostringstream out;
    cli::echo_resolved(config, out);
    const std::string text = out.str();
    for (const char* key :
         {"# num_macro_users = 5", "# num_femto_users = 5", "# num_subchannels = 6",
          "# tx_power_macro = 1", "# pathloss_exponent = 2", "# penetration_db = -10",
          "# carrier_hz = 2000000000", "# snr_db_grid = 10,20,30,40,50,60,70,80",
          "# trials = 1000", "# master_seed = 1", "# ia_iterations = 5",
          "# ia_mode = mmse"}) {
        CHECK(text.find(key) != std::string::npos);
    }
    // Every line is a comment line.
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        CHECK(line.rfind("# ", 0) == 0);
    }
}

TEST_CASE("numbers render compactly with full precision") {
    CHECK(csv::format_number(0.0) == "0");
    CHECK(csv::format_number(1.0) == "1");
    CHECK(csv::format_number(-10.0) == "-10");
    CHECK(csv::format_number(0.1) == "0.1");
    CHECK(csv::format_number(2e9) == "2000000000");
    CHECK(csv::format_number(2e13) == "2e+13");
    // Twelve significant digits survive the round trip.
    CHECK(csv::format_number(123.456789012) == "123.456789012");
}
