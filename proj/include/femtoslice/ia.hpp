// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "femtoslice/channel.hpp"
#include "femtoslice/numerics.hpp"
#include "femtoslice/ora.hpp"

// Interference alignment across the sub-channels left over by the
// opportunistic side.  Every cell precodes J streams through a shared
// (J+1) x J reference matrix; each receiver needs only a null vector (or
// an MMSE-flavored estimate of one) to strip the dominant cross-tier
// interference, then zero forcing inside the cell separates the streams.

namespace femtoslice::ia {

using channel::Cell;
using channel::ChannelRealization;
using channel::SystemParams;
using channel::Topology;
using numerics::CMatrix;
using numerics::CVector;

enum class Mode { Zf, Mmse, MmseIterated };

struct Group {
    std::vector<int> channels;               // J + 1 sub-channels, ascending
    std::array<std::vector<int>, 3> users;   // J users per cell, ascending
    int streams_per_cell() const { return static_cast<int>(users[0].size()); }
};

struct Solution {
    CMatrix reference;                          // shared tall precoder G
    std::array<CMatrix, 3> transmit;            // per-cell zero-forcing V
    std::array<CMatrix, 3> power_scale;         // per-cell diag(sqrt(lambda))
    std::array<std::vector<CVector>, 3> receive;
    std::array<std::vector<double>, 3> rates;
    std::vector<Cell> macro_aligned;            // which femto each macro stream nulls
    double sum_rate = 0.0;
};

/// First J columns of the (J+1)-point unitary DFT: entry (a, b) is
/// exp(-2 pi i a b / (J+1)) / sqrt(J+1).  Orthonormal columns, fixed for
/// a given J.
CMatrix reference_precoder(int J);

/// Expected interference covariance at a victim of one foreign cell,
/// with the foreign precoder averaged out:
///   sigma^2 I + ((J+1) P / J) zeta (trace(Lambda Lambda^H) / J) (H G)(H G)^H.
CMatrix expected_covariance(const CMatrix& h_cross, const CMatrix& g,
                            const CMatrix& lambda_foreign, double p_foreign,
                            double zeta_cross, double sigma2, int J);

struct MmseInit {
    CVector v0;   // dominant eigenvector of G^H H^H Cov^-1 H G
    CVector u0;   // normalized Cov^-1 H G v0
};

MmseInit mmse_init(const CMatrix& h_direct, const CMatrix& g, const CMatrix& covariance);

/// Exact alignment receiver: unit u with u^H (H_cross G) = 0.
CVector receive_null_vector(const CMatrix& h_cross, const CMatrix& g);

struct ZfTransmit {
    CMatrix v;   // H0^H (H0 H0^H)^{-1} D, unit-norm columns
    CMatrix d;   // diag(1 / sqrt(Re[(H0 H0^H)^{-1}]_ll))
};

/// In-cell zero forcing over the equivalent channel rows u_l^H H_l G.
ZfTransmit zf_transmit(const CMatrix& h0);

/// log2(1 + (1/J) ((J+1) P / sigma^2) zeta lambda |u^H H G v|^2).
double femto_user_rate(const CVector& u, const CMatrix& h_direct, const CMatrix& g,
                       const CVector& v, double lambda, double zeta, double p_tx,
                       double sigma2, int J);

/// Same numerator, but the denominator is the quadratic form of the
/// residual covariance (noise plus the non-aligned femto).
double macro_user_rate(const CVector& u, const CMatrix& h_direct, const CMatrix& g,
                       const CVector& v, double lambda, double zeta_serving,
                       double p_m, const CMatrix& cov_residual, int J);

/// Which femto a macro user should null: the larger P * zeta proxy wins,
/// ties go to Femto1.
Cell stronger_interferer(const Topology& topology, const SystemParams& params,
                         int macro_user);

/// Receive vectors, transmit matrices and rates for one candidate group.
/// No iteration; Mode::Zf uses exact null vectors, the MMSE modes use the
/// covariance-based initialization.
Solution evaluate_assignment(const Group& group, const ChannelRealization& realization,
                             const Topology& topology, const SystemParams& params,
                             double sigma2, Mode mode);

struct SearchResult {
    Group group;
    Solution solution;
};

/// Try every J-sized combination of each cell's unscheduled users and keep
/// the sum-rate argmax; ties resolve to the lexicographically first
/// (macro, femto1, femto2) subset triple.
SearchResult subset_search(const ora::Allocation& allocation,
                           const ChannelRealization& realization,
                           const Topology& topology, const SystemParams& params,
                           double sigma2, Mode mode);

struct IterationResult {
    Solution solution;
    std::vector<double> sum_rate_trace;   // entry 0 is the input solution
};

/// Alternate covariance-weighted receive updates with in-cell zero forcing.
IterationResult iterate_vectors(const Solution& start, const Group& group,
                                const ChannelRealization& realization,
                                const Topology& topology, const SystemParams& params,
                                double sigma2, int iterations);

} // namespace femtoslice::ia
