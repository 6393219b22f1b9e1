// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "femtoslice/concurrency.hpp"
#include "femtoslice/errors.hpp"
#include "femtoslice/ora.hpp"
#include "femtoslice/rng.hpp"

namespace femtoslice::experiment {

namespace {

// A drop is abandoned and redrawn at most this many times before the
// underlying error is allowed to escape.
constexpr int kMaxResamples = 64;

struct Drop {
    channel::Topology topology;
    channel::ChannelRealization realization;
};

Drop sample_drop(const SystemParams& params, const TrialKey& key, int attempt) {
    RngStream topo_rng(derive_seed(key.master_seed, key.snr_index, key.trial, attempt,
                                   StreamPurpose::Topology));
    RngStream fading_rng(derive_seed(key.master_seed, key.snr_index, key.trial, attempt,
                                     StreamPurpose::Fading));
    Drop drop;
    drop.topology = channel::sample_topology(params, topo_rng);
    drop.realization = channel::sample_fading(params, fading_rng);
    return drop;
}

bool alignment_feasible(const ora::Allocation& allocation, const SystemParams& params,
                        int* streams_out) {
    const int J = params.num_macro_users - allocation.trade_off_A;
    *streams_out = J;
    if (J < 1) return false;
    if (static_cast<int>(allocation.ia_channels.size()) != J + 1) return false;
    for (const auto& users : allocation.ia_users) {
        if (static_cast<int>(users.size()) < J) return false;
    }
    return true;
}

} // namespace

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

double std_err_of(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double m = mean_of(values);
    double acc = 0.0;
    for (double v : values) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(n - 1)) /
           std::sqrt(static_cast<double>(n));
}

TrialResult run_trial(const SystemParams& params, double sigma2, int trade_off_A,
                      ia::Mode mode, const TrialKey& key) {
    int resamples = 0;
    for (int attempt = 0;; ++attempt) {
        try {
            const Drop drop = sample_drop(params, key, attempt);
            const ora::Allocation allocation =
                ora::allocate(drop.realization, drop.topology, params, sigma2, trade_off_A);
            const channel::PowerControl pc =
                channel::PowerControl::from(drop.topology, params);
            const ora::RateReport report = ora::ora_final_rates(
                allocation, drop.realization, drop.topology, pc, params, sigma2);

            TrialResult result;
            result.ora_part = report.ora_sum;
            result.resamples = resamples;

            int streams = 0;
            if (trade_off_A != params.num_subchannels &&
                alignment_feasible(allocation, params, &streams)) {
                const ia::Mode search_mode =
                    mode == ia::Mode::MmseIterated ? ia::Mode::Mmse : mode;
                ia::SearchResult found =
                    ia::subset_search(allocation, drop.realization, drop.topology, params,
                                      sigma2, search_mode);
                if (mode == ia::Mode::MmseIterated && params.ia_iterations > 0) {
                    ia::IterationResult iterated = ia::iterate_vectors(
                        found.solution, found.group, drop.realization, drop.topology,
                        params, sigma2, params.ia_iterations);
                    result.ia_part = iterated.solution.sum_rate;
                } else {
                    result.ia_part = found.solution.sum_rate;
                }
            }
            result.sum_rate = result.ora_part + result.ia_part;
            return result;
        } catch (const TopologySamplingError&) {
            if (++resamples > kMaxResamples) throw;
        } catch (const DegenerateChannelError&) {
            if (++resamples > kMaxResamples) throw;
        } catch (const SingularMatrixError&) {
            if (++resamples > kMaxResamples) throw;
        }
    }
}

std::vector<SweepRecord> sweep(const SystemParams& params, ia::Mode mode,
                               const PerTrialSink& per_trial) {
    std::vector<SweepRecord> records;
    for (std::size_t snr_index = 0; snr_index < params.snr_db_grid.size(); ++snr_index) {
        const double snr_db = params.snr_db_grid[snr_index];
        const double sigma2 = channel::snr_to_noise(snr_db, params.tx_power_macro);
        for (int A = 0; A <= params.num_subchannels; ++A) {
            std::vector<TrialResult> results(params.trials);
            parallel_for(params.trials, [&](std::size_t t) {
                TrialKey key{params.master_seed, static_cast<int>(snr_index),
                             static_cast<int>(t)};
                results[t] = run_trial(params, sigma2, A, mode, key);
            });

            std::vector<double> sums(results.size());
            SweepRecord rec;
            rec.snr_db = snr_db;
            rec.trade_off_A = A;
            rec.ia_mode = mode;
            rec.trials = params.trials;
            for (std::size_t t = 0; t < results.size(); ++t) {
                sums[t] = results[t].sum_rate;
                rec.mean_ora_part += results[t].ora_part;
                rec.mean_ia_part += results[t].ia_part;
            }
            rec.mean_sum_rate = mean_of(sums);
            rec.std_err = std_err_of(sums);
            rec.mean_ora_part /= static_cast<double>(results.size());
            rec.mean_ia_part /= static_cast<double>(results.size());
            records.push_back(rec);

            if (per_trial) {
                for (std::size_t t = 0; t < results.size(); ++t) {
                    per_trial(PerTrialRecord{snr_db, A, static_cast<int>(t),
                                             results[t].sum_rate, results[t].ora_part,
                                             results[t].ia_part, results[t].resamples});
                }
            }
        }
    }
    return records;
}

OmfcResult omfc_baseline(const SystemParams& params, double sigma2, int snr_index) {
    if (params.num_subchannels % 2 != 0) {
        throw std::invalid_argument("orthogonal baseline needs an even channel count");
    }
    const int half = params.num_subchannels / 2;

    OmfcResult out;
    out.trials = params.trials;
    out.per_trial.resize(params.trials);

    parallel_for(params.trials, [&](std::size_t t) {
        TrialKey key{params.master_seed, snr_index, static_cast<int>(t)};
        for (int attempt = 0;; ++attempt) {
            try {
                const Drop drop = sample_drop(params, key, attempt);
                const channel::PowerControl pc =
                    channel::PowerControl::from(drop.topology, params);
                double total = 0.0;
                // Macro tier alone on the first half: per channel, serve
                // whoever yields the highest power-controlled rate.
                for (int n = 0; n < half; ++n) {
                    double best = 0.0;
                    for (int k = 0; k < params.num_macro_users; ++k) {
                        const double rate = std::log2(
                            1.0 + params.tx_power_macro * pc.at(channel::Cell::Macro, k) *
                                      drop.topology.pathloss_gain[0][0][k] *
                                      std::norm(drop.realization.at(channel::Cell::Macro,
                                                                    channel::Cell::Macro,
                                                                    k, n)) /
                                      sigma2);
                        if (rate > best) best = rate;
                    }
                    total += best;
                }
                // Both femtocells share the second half; their mutual
                // coupling is neglected, so each is interference-free.
                for (channel::Cell c : {channel::Cell::Femto1, channel::Cell::Femto2}) {
                    const int ci = static_cast<int>(c);
                    for (int n = half; n < params.num_subchannels; ++n) {
                        double best = 0.0;
                        for (int l = 0; l < params.num_femto_users; ++l) {
                            const double rate = std::log2(
                                1.0 + params.tx_power(c) * pc.at(c, l) *
                                          drop.topology.pathloss_gain[ci][ci][l] *
                                          std::norm(drop.realization.at(c, c, l, n)) /
                                          sigma2);
                            if (rate > best) best = rate;
                        }
                        total += best;
                    }
                }
                out.per_trial[t] = total;
                break;
            } catch (const TopologySamplingError&) {
                if (attempt >= kMaxResamples) throw;
            }
        }
    });

    out.mean_sum_rate = mean_of(out.per_trial);
    out.std_err = std_err_of(out.per_trial);
    return out;
}

std::vector<CurvePoint> tradeoff_curve(const SystemParams& params, ia::Mode mode) {
    const std::vector<SweepRecord> records = sweep(params, mode);
    std::vector<CurvePoint> curve;
    for (std::size_t snr_index = 0; snr_index < params.snr_db_grid.size(); ++snr_index) {
        const double snr_db = params.snr_db_grid[snr_index];
        CurvePoint point;
        point.snr_db = snr_db;
        double best = -1.0;
        for (const SweepRecord& rec : records) {
            if (rec.snr_db != snr_db) continue;
            // >= keeps the larger A on exact ties.
            if (rec.mean_sum_rate >= best) {
                best = rec.mean_sum_rate;
                point.optimal_A = rec.trade_off_A;
                point.best_mean_sum_rate = rec.mean_sum_rate;
            }
        }
        const double sigma2 = channel::snr_to_noise(snr_db, params.tx_power_macro);
        point.omfc_mean_sum_rate =
            omfc_baseline(params, sigma2, static_cast<int>(snr_index)).mean_sum_rate;
        curve.push_back(point);
    }
    return curve;
}

} // namespace femtoslice::experiment
