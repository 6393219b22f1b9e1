// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/ora.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace femtoslice::ora {

double candidate_rate_no_pc(const ChannelRealization& realization,
                            const Topology& topology, const SystemParams& params,
                            double sigma2, Cell cell, int user, int n) {
    const int ci = static_cast<int>(cell);
    const double desired = params.tx_power(cell) * topology.pathloss_gain[ci][ci][user] *
                           std::norm(realization.at(cell, cell, user, n));
    double interference = 0.0;
    for (Cell tx : channel::kCells) {
        if (tx == cell) continue;
        if (tx != Cell::Macro && cell != Cell::Macro) continue;
        const int ti = static_cast<int>(tx);
        interference += params.tx_power(tx) * topology.pathloss_gain[ti][ci][user] *
                        std::norm(realization.at(tx, cell, user, n));
    }
    return std::log2(1.0 + desired / (interference + sigma2));
}

TripletChoice best_triplet(const ChannelRealization& realization,
                           const Topology& topology, const SystemParams& params,
                           double sigma2, int n) {
    const int K = params.num_macro_users;
    const int L = params.num_femto_users;
    std::vector<double> macro_rate(K), f1_rate(L), f2_rate(L);
    for (int k = 0; k < K; ++k) {
        macro_rate[k] = candidate_rate_no_pc(realization, topology, params, sigma2,
                                             Cell::Macro, k, n);
    }
    for (int l = 0; l < L; ++l) {
        f1_rate[l] = candidate_rate_no_pc(realization, topology, params, sigma2,
                                          Cell::Femto1, l, n);
        f2_rate[l] = candidate_rate_no_pc(realization, topology, params, sigma2,
                                          Cell::Femto2, l, n);
    }
    TripletChoice best;
    best.subchannel = n;
    double best_sum = -1.0;
    // Ascending scan with strict improvement keeps the lexicographically
    // smallest triplet on exact ties.
    for (int k = 0; k < K; ++k) {
        for (int l1 = 0; l1 < L; ++l1) {
            for (int l2 = 0; l2 < L; ++l2) {
                const double sum = macro_rate[k] + f1_rate[l1] + f2_rate[l2];
                if (sum > best_sum) {
                    best_sum = sum;
                    best.macro_user = k;
                    best.f1_user = l1;
                    best.f2_user = l2;
                }
            }
        }
    }
    best.metric = best_sum;
    return best;
}

Allocation allocate(const ChannelRealization& realization, const Topology& topology,
                    const SystemParams& params, double sigma2, int trade_off_A) {
    const int N = params.num_subchannels;
    if (trade_off_A < 0 || trade_off_A > N) {
        throw std::invalid_argument("trade-off number must lie in [0, num_subchannels]");
    }
    std::vector<TripletChoice> per_channel;
    per_channel.reserve(N);
    for (int n = 0; n < N; ++n) {
        per_channel.push_back(best_triplet(realization, topology, params, sigma2, n));
    }

    std::vector<int> order(N);
    for (int n = 0; n < N; ++n) order[n] = n;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (per_channel[a].metric != per_channel[b].metric) {
            return per_channel[a].metric > per_channel[b].metric;
        }
        return a < b;
    });

    Allocation out;
    out.trade_off_A = trade_off_A;
    std::vector<int> selected(order.begin(), order.begin() + trade_off_A);
    std::sort(selected.begin(), selected.end());
    std::array<std::set<int>, 3> scheduled;
    for (int n : selected) {
        out.ora_channels.push_back(per_channel[n]);
        scheduled[0].insert(per_channel[n].macro_user);
        scheduled[1].insert(per_channel[n].f1_user);
        scheduled[2].insert(per_channel[n].f2_user);
    }
    for (int n = 0; n < N; ++n) {
        if (!std::binary_search(selected.begin(), selected.end(), n)) {
            out.ia_channels.push_back(n);
        }
    }
    for (Cell c : channel::kCells) {
        const int ci = static_cast<int>(c);
        for (int u = 0; u < params.users_in(c); ++u) {
            if (!scheduled[ci].count(u)) out.ia_users[ci].push_back(u);
        }
    }
    return out;
}

RateReport ora_final_rates(const Allocation& allocation,
                           const ChannelRealization& realization,
                           const Topology& topology, const PowerControl& pc,
                           const SystemParams& params, double sigma2) {
    RateReport report;
    for (const TripletChoice& choice : allocation.ora_channels) {
        const auto powers = channel::received_powers(
            topology, pc, realization, params, choice.subchannel, choice.macro_user,
            choice.f1_user, choice.f2_user);
        ChannelUserRates rates;
        rates.subchannel = choice.subchannel;
        for (int c = 0; c < channel::kNumCells; ++c) {
            rates.rate[c] =
                std::log2(1.0 + powers.desired[c] / (powers.interference[c] + sigma2));
            report.ora_sum += rates.rate[c];
        }
        report.ora_rates.push_back(rates);
    }
    report.total = report.ora_sum;
    return report;
}

} // namespace femtoslice::ora
