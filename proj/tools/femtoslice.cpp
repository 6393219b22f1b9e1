// SPDX-License-Identifier: Apache-2.0
//
// femtoslice: Monte-Carlo study of splitting OFDMA sub-channels between
// opportunistic reuse and cross-tier interference alignment in a two-tier
// (one macro, two femto) downlink.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error,
// 3 selftest failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "femtoslice/channel.hpp"
#include "femtoslice/config.hpp"
#include "femtoslice/csv.hpp"
#include "femtoslice/errors.hpp"
#include "femtoslice/experiment.hpp"
#include "femtoslice/selftest.hpp"

namespace {

using namespace femtoslice;

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::vector<double> snr_db;
    std::string ia_mode;
    std::uint64_t seed = 0;
    int trials = 0;
    int iterations = -1;
    bool per_trial = false;

    bool seed_set = false;
    bool trials_set = false;
    bool snr_set = false;
    bool mode_set = false;
    bool iterations_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value configuration file");
    cmd->add_option("--out", flags.out_path, "output CSV path");
    cmd->add_option("--seed", flags.seed, "master seed")
        ->each([&](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--trials", flags.trials, "Monte-Carlo trials per grid point")
        ->each([&](const std::string&) { flags.trials_set = true; });
    cmd->add_option("--snr", flags.snr_db, "SNR grid in dB")
        ->delimiter(',')
        ->each([&](const std::string&) { flags.snr_set = true; });
    cmd->add_option("--ia-mode", flags.ia_mode, "zf | mmse | mmse-iter")
        ->each([&](const std::string&) { flags.mode_set = true; });
    cmd->add_option("--iterations", flags.iterations, "receive-update rounds (mmse-iter)")
        ->each([&](const std::string&) { flags.iterations_set = true; });
    cmd->add_flag("--per-trial", flags.per_trial, "also write per-trial rows");
}

// Defaults, then file, then explicit flags; validated once at the end.
cli::RunConfig resolve(const CommonFlags& flags) {
    cli::RunConfig config;
    if (!flags.config_path.empty()) {
        cli::parse_config_file(config, flags.config_path);
    }
    if (flags.seed_set) config.params.master_seed = flags.seed;
    if (flags.trials_set) config.params.trials = flags.trials;
    if (flags.snr_set) config.params.snr_db_grid = flags.snr_db;
    if (flags.mode_set) config.ia_mode = cli::parse_mode(flags.ia_mode);
    if (flags.iterations_set) config.params.ia_iterations = flags.iterations;
    config.params.validate();
    return config;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    return out;
}

std::string per_trial_path(const std::string& out_path) {
    const auto dot = out_path.rfind('.');
    if (dot == std::string::npos) return out_path + ".per_trial";
    return out_path.substr(0, dot) + ".per_trial" + out_path.substr(dot);
}

int cmd_sweep(const CommonFlags& flags) {
    const cli::RunConfig config = resolve(flags);
    cli::echo_resolved(config, std::cout);
    const std::string out_path = flags.out_path.empty() ? "sweep.csv" : flags.out_path;

    std::vector<experiment::PerTrialRecord> trail;
    experiment::PerTrialSink sink;
    if (flags.per_trial) {
        sink = [&trail](const experiment::PerTrialRecord& r) { trail.push_back(r); };
    }
    const auto records = experiment::sweep(config.params, config.ia_mode, sink);

    auto out = open_out(out_path);
    csv::write_sweep(out, records);
    std::cout << "wrote " << out_path << "\n";
    if (flags.per_trial) {
        const std::string trail_path = per_trial_path(out_path);
        auto tout = open_out(trail_path);
        csv::write_per_trial(tout, trail);
        std::cout << "wrote " << trail_path << "\n";
    }
    return 0;
}

int cmd_curve(const CommonFlags& flags) {
    const cli::RunConfig config = resolve(flags);
    cli::echo_resolved(config, std::cout);
    const std::string out_path = flags.out_path.empty() ? "curve.csv" : flags.out_path;
    const auto curve = experiment::tradeoff_curve(config.params, config.ia_mode);
    auto out = open_out(out_path);
    csv::write_curve(out, curve);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_omfc(const CommonFlags& flags) {
    const cli::RunConfig config = resolve(flags);
    cli::echo_resolved(config, std::cout);
    const std::string out_path = flags.out_path.empty() ? "omfc.csv" : flags.out_path;
    std::vector<cli::OmfcRow> rows;
    for (std::size_t i = 0; i < config.params.snr_db_grid.size(); ++i) {
        const double snr_db = config.params.snr_db_grid[i];
        const double sigma2 = channel::snr_to_noise(snr_db, config.params.tx_power_macro);
        const auto result =
            experiment::omfc_baseline(config.params, sigma2, static_cast<int>(i));
        rows.push_back({snr_db, result.trials, result.mean_sum_rate, result.std_err});
    }
    auto out = open_out(out_path);
    csv::write_omfc(out, rows);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_selftest() {
    return selftest::run_all(std::cout) ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-channel trade-off simulator for two-tier OFDMA downlinks"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* sweep = app.add_subcommand("sweep", "mean sum-rate over the (SNR, A) grid");
    add_common(sweep, flags);
    CLI::App* curve = app.add_subcommand("curve", "best A per SNR with the orthogonal baseline");
    add_common(curve, flags);
    CLI::App* omfc = app.add_subcommand("omfc", "orthogonal macro/femto split baseline");
    add_common(omfc, flags);
    app.add_subcommand("selftest", "fast invariant suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(flags);
        if (curve->parsed()) return cmd_curve(flags);
        if (omfc->parsed()) return cmd_omfc(flags);
        return cmd_selftest();
    } catch (const femtoslice::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
