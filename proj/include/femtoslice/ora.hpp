// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "femtoslice/channel.hpp"

// Opportunistic allocation: rank every sub-channel by the best served
// user triplet and hand the top A of them to simultaneous transmission.
// Selection runs without power control (foreign amplification factors are
// unknown until the allocation exists); the reported rates include it.

namespace femtoslice::ora {

using channel::Cell;
using channel::ChannelRealization;
using channel::PowerControl;
using channel::SystemParams;
using channel::Topology;

struct TripletChoice {
    int subchannel = 0;
    int macro_user = 0;
    int f1_user = 0;
    int f2_user = 0;
    double metric = 0.0;   // best no-power-control sum rate on this sub-channel
};

struct Allocation {
    int trade_off_A = 0;
    std::vector<TripletChoice> ora_channels;      // the A selected sub-channels
    std::vector<int> ia_channels;                 // complement, ascending
    std::array<std::vector<int>, 3> ia_users;     // per cell, ascending
};

/// Rate of one candidate user on sub-channel n with nominal powers only
/// (no power control on any link).
double candidate_rate_no_pc(const ChannelRealization& realization,
                            const Topology& topology, const SystemParams& params,
                            double sigma2, Cell cell, int user, int n);

/// Exhaustive argmax over all (macro, femto1, femto2) user triplets on one
/// sub-channel; ties resolve to the lexicographically smallest triplet.
TripletChoice best_triplet(const ChannelRealization& realization,
                           const Topology& topology, const SystemParams& params,
                           double sigma2, int n);

/// Full allocation for trade-off number A: the A best sub-channels (by
/// triplet metric, ties to the lower index) go to simultaneous service,
/// the rest plus each cell's unscheduled users form the alignment side.
Allocation allocate(const ChannelRealization& realization, const Topology& topology,
                    const SystemParams& params, double sigma2, int trade_off_A);

struct ChannelUserRates {
    int subchannel = 0;
    std::array<double, 3> rate{};   // indexed by cell
};

struct RateReport {
    std::vector<ChannelUserRates> ora_rates;
    double ora_sum = 0.0;
    double ia_sum = 0.0;
    double total = 0.0;
};

/// Power-controlled rates of the selected triplets.  ia_sum is left zero;
/// the experiment layer fills it in after the alignment pass.
RateReport ora_final_rates(const Allocation& allocation,
                           const ChannelRealization& realization,
                           const Topology& topology, const PowerControl& pc,
                           const SystemParams& params, double sigma2);

} // namespace femtoslice::ora
