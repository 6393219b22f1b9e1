// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "femtoslice/channel.hpp"
#include "femtoslice/ia.hpp"

// Monte-Carlo harness.  One master seed fans out to per-(snr, trial)
// sub-streams, so every trade-off number (and the orthogonal baseline)
// sees the same layouts and fading: the A-comparisons are paired.  All
// aggregation is index-ordered, which keeps results byte-stable no matter
// how many workers run the trials.

namespace femtoslice::experiment {

using channel::SystemParams;

struct TrialKey {
    std::uint64_t master_seed = 0;
    int snr_index = 0;
    int trial = 0;
};

struct TrialResult {
    double sum_rate = 0.0;
    double ora_part = 0.0;
    double ia_part = 0.0;
    int resamples = 0;   // layout or channel degeneracies that forced a redraw
};

/// One simulated drop: sample layout and fading, allocate for the given
/// trade-off number, run the alignment side when it exists, add up.
/// Degenerate draws are retried on the next sub-stream and counted.
TrialResult run_trial(const SystemParams& params, double sigma2, int trade_off_A,
                      ia::Mode mode, const TrialKey& key);

struct SweepRecord {
    double snr_db = 0.0;
    int trade_off_A = 0;
    ia::Mode ia_mode = ia::Mode::Mmse;
    int trials = 0;
    double mean_sum_rate = 0.0;
    double std_err = 0.0;
    double mean_ora_part = 0.0;
    double mean_ia_part = 0.0;
};

struct PerTrialRecord {
    double snr_db = 0.0;
    int trade_off_A = 0;
    int trial = 0;
    double sum_rate = 0.0;
    double ora_part = 0.0;
    double ia_part = 0.0;
    int resamples = 0;
};

using PerTrialSink = std::function<void(const PerTrialRecord&)>;

/// Full grid: every SNR point times every A in [0, num_subchannels].
/// The optional sink receives each trial in (snr, A, trial) order.
std::vector<SweepRecord> sweep(const SystemParams& params, ia::Mode mode,
                               const PerTrialSink& per_trial = nullptr);

struct OmfcResult {
    int trials = 0;
    double mean_sum_rate = 0.0;
    double std_err = 0.0;
    std::vector<double> per_trial;
};

/// Orthogonal split baseline: the macro tier gets the first half of the
/// sub-channels, both femtocells share the second half, every cell serves
/// its per-channel best user interference-free.  Needs an even channel
/// count.  Uses the same trial sub-streams as the sweep.
OmfcResult omfc_baseline(const SystemParams& params, double sigma2, int snr_index);

struct CurvePoint {
    double snr_db = 0.0;
    int optimal_A = 0;
    double best_mean_sum_rate = 0.0;
    double omfc_mean_sum_rate = 0.0;
};

/// Mean-sum-rate argmax over A per SNR point, ties resolved to the larger
/// A, with the orthogonal baseline alongside.
std::vector<CurvePoint> tradeoff_curve(const SystemParams& params, ia::Mode mode);

/// Sample mean and standard error of the mean (0 when fewer than 2 values).
double mean_of(const std::vector<double>& values);
double std_err_of(const std::vector<double>& values);

} // namespace femtoslice::experiment
