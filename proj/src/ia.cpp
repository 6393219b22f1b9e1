// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/ia.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "femtoslice/errors.hpp"
#include "femtoslice/tolerances.hpp"

namespace femtoslice::ia {

using numerics::cx;

namespace {

// Interference part of the expected covariance (everything except the
// noise identity): ((J+1) P / J) zeta (trace(Lambda Lambda^H) / J) (HG)(HG)^H.
CMatrix interference_term(const CMatrix& h_cross, const CMatrix& g,
                          const CMatrix& lambda_foreign, double p_foreign,
                          double zeta_cross, int J) {
    double trace = 0.0;
    for (std::size_t i = 0; i < lambda_foreign.rows(); ++i) {
        trace += std::norm(lambda_foreign(i, i));
    }
    const double c = (static_cast<double>(J) + 1.0) * p_foreign / J * zeta_cross *
                     (trace / J);
    CMatrix hg = numerics::matmul(h_cross, g);
    return numerics::scale(numerics::matmul(hg, numerics::hermitian(hg)), c);
}

CMatrix noise_identity(std::size_t n, double sigma2) {
    return numerics::scale(CMatrix::identity(n), sigma2);
}

// Diagonal channel of one link restricted to the group's sub-channels.
CMatrix restricted_channel(const ChannelRealization& realization, Cell tx, Cell rx,
                           int user, const std::vector<int>& channels) {
    std::vector<cx> d;
    d.reserve(channels.size());
    for (int n : channels) d.push_back(realization.at(tx, rx, user, n));
    return CMatrix::diagonal(d);
}

// Everything evaluate/iterate need to know about one stream.
struct StreamContext {
    Cell cell = Cell::Macro;
    int user = 0;
    CMatrix direct;         // diagonal serving channel on the group's sub-channels
    CMatrix hg;             // direct times G, cached
    CMatrix cov_update;     // covariance driving MMSE receive updates
    CMatrix cov_residual;   // denominator covariance for the macro rate
    CMatrix aligned_hg;     // cross channel times G that ZF mode nulls
    double lambda = 0.0;
    double zeta_serving = 0.0;
    double p_tx = 0.0;
    Cell aligned = Cell::Femto1;
};

struct GroupContext {
    int J = 0;
    CMatrix reference;
    std::array<CMatrix, 3> power_scale;
    std::array<std::vector<StreamContext>, 3> streams;
};

GroupContext build_context(const Group& group, const ChannelRealization& realization,
                           const Topology& topology, const SystemParams& params,
                           double sigma2) {
    const int J = group.streams_per_cell();
    if (J < 1) throw std::invalid_argument("alignment group needs at least one stream");
    for (const auto& users : group.users) {
        if (static_cast<int>(users.size()) != J) {
            throw std::invalid_argument("alignment group needs J users in every cell");
        }
    }
    if (static_cast<int>(group.channels.size()) != J + 1) {
        throw std::invalid_argument("alignment group needs J + 1 sub-channels");
    }

    GroupContext ctx;
    ctx.J = J;
    ctx.reference = reference_precoder(J);

    const channel::PowerControl pc = channel::PowerControl::from(topology, params);
    for (Cell c : channel::kCells) {
        const int ci = static_cast<int>(c);
        std::vector<cx> scale;
        scale.reserve(J);
        for (int user : group.users[ci]) scale.push_back(std::sqrt(pc.at(c, user)));
        ctx.power_scale[ci] = CMatrix::diagonal(scale);
    }

    for (Cell c : channel::kCells) {
        const int ci = static_cast<int>(c);
        for (int user : group.users[ci]) {
            StreamContext s;
            s.cell = c;
            s.user = user;
            s.p_tx = params.tx_power(c);
            s.lambda = pc.at(c, user);
            s.zeta_serving = topology.pathloss_gain[ci][ci][user];
            s.direct = restricted_channel(realization, c, c, user, group.channels);
            s.hg = numerics::matmul(s.direct, ctx.reference);

            if (c == Cell::Macro) {
                const Cell strong = stronger_interferer(topology, params, user);
                const Cell weak = strong == Cell::Femto1 ? Cell::Femto2 : Cell::Femto1;
                auto term_of = [&](Cell femto) {
                    const int fi = static_cast<int>(femto);
                    const CMatrix cross =
                        restricted_channel(realization, femto, Cell::Macro, user, group.channels);
                    return interference_term(cross, ctx.reference, ctx.power_scale[fi],
                                             params.tx_power(femto),
                                             topology.pathloss_gain[fi][0][user], J);
                };
                const CMatrix term_strong = term_of(strong);
                const CMatrix term_weak = term_of(weak);
                s.aligned = strong;
                s.aligned_hg = numerics::matmul(
                    restricted_channel(realization, strong, Cell::Macro, user, group.channels),
                    ctx.reference);
                // Both femtos shape the receive estimate; only the one the
                // receiver cannot null stays in the rate denominator.
                s.cov_update = numerics::add(noise_identity(J + 1, sigma2),
                                             numerics::add(term_strong, term_weak));
                s.cov_residual = numerics::add(noise_identity(J + 1, sigma2), term_weak);
            } else {
                const CMatrix cross =
                    restricted_channel(realization, Cell::Macro, c, user, group.channels);
                const CMatrix term = interference_term(
                    cross, ctx.reference, ctx.power_scale[0], params.tx_power_macro,
                    topology.pathloss_gain[0][ci][user], J);
                s.aligned = Cell::Macro;
                s.aligned_hg = numerics::matmul(cross, ctx.reference);
                s.cov_update = numerics::add(noise_identity(J + 1, sigma2), term);
                s.cov_residual = noise_identity(J + 1, sigma2);
            }
            ctx.streams[ci].push_back(std::move(s));
        }
    }
    return ctx;
}

CVector column(const CMatrix& m, std::size_t j) {
    CVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
    return out;
}

CMatrix equivalent_rows(const std::vector<StreamContext>& streams,
                        const std::vector<CVector>& receive) {
    const std::size_t J = streams.size();
    CMatrix h0(J, J);
    for (std::size_t l = 0; l < J; ++l) {
        for (std::size_t b = 0; b < J; ++b) {
            cx acc(0.0, 0.0);
            for (std::size_t i = 0; i < receive[l].size(); ++i) {
                acc += std::conj(receive[l][i]) * streams[l].hg(i, b);
            }
            h0(l, b) = acc;
        }
    }
    return h0;
}

// Rates for the current receive/transmit pair of one cell.
std::vector<double> cell_rates(const GroupContext& ctx, int ci,
                               const std::vector<CVector>& receive, const CMatrix& v,
                               double sigma2) {
    const auto& streams = ctx.streams[ci];
    std::vector<double> rates(streams.size());
    for (std::size_t l = 0; l < streams.size(); ++l) {
        const StreamContext& s = streams[l];
        const CVector vcol = column(v, l);
        if (s.cell == Cell::Macro) {
            rates[l] = macro_user_rate(receive[l], s.direct, ctx.reference, vcol, s.lambda,
                                       s.zeta_serving, s.p_tx, s.cov_residual, ctx.J);
        } else {
            rates[l] = femto_user_rate(receive[l], s.direct, ctx.reference, vcol, s.lambda,
                                       s.zeta_serving, s.p_tx, sigma2, ctx.J);
        }
    }
    return rates;
}

Solution assemble(const GroupContext& ctx,
                  std::array<std::vector<CVector>, 3> receive, double sigma2) {
    Solution sol;
    sol.reference = ctx.reference;
    sol.power_scale = ctx.power_scale;
    sol.receive = std::move(receive);
    for (Cell c : channel::kCells) {
        const int ci = static_cast<int>(c);
        const CMatrix h0 = equivalent_rows(ctx.streams[ci], sol.receive[ci]);
        const ZfTransmit zf = zf_transmit(h0);
        sol.transmit[ci] = zf.v;
        sol.rates[ci] = cell_rates(ctx, ci, sol.receive[ci], zf.v, sigma2);
        for (double r : sol.rates[ci]) sol.sum_rate += r;
        if (c == Cell::Macro) {
            for (const StreamContext& s : ctx.streams[ci]) {
                sol.macro_aligned.push_back(s.aligned);
            }
        }
    }
    return sol;
}

// Lexicographic J-combinations of a sorted candidate list.
std::vector<std::vector<int>> combinations(const std::vector<int>& pool, int J) {
    std::vector<std::vector<int>> out;
    const int n = static_cast<int>(pool.size());
    if (J > n) return out;
    std::vector<int> idx(J);
    for (int i = 0; i < J; ++i) idx[i] = i;
    while (true) {
        std::vector<int> pick(J);
        for (int i = 0; i < J; ++i) pick[i] = pool[idx[i]];
        out.push_back(std::move(pick));
        int i = J - 1;
        while (i >= 0 && idx[i] == n - J + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < J; ++k) idx[k] = idx[k - 1] + 1;
    }
    return out;
}

} // namespace

CMatrix reference_precoder(int J) {
    if (J < 1) throw std::invalid_argument("reference precoder needs J >= 1");
    const std::size_t rows = J + 1;
    CMatrix g(rows, J);
    const double root = std::sqrt(static_cast<double>(rows));
    for (std::size_t a = 0; a < rows; ++a) {
        for (std::size_t b = 0; b < static_cast<std::size_t>(J); ++b) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(a) *
                                 static_cast<double>(b) / static_cast<double>(rows);
            g(a, b) = cx(std::cos(angle), std::sin(angle)) / root;
        }
    }
    return g;
}

CMatrix expected_covariance(const CMatrix& h_cross, const CMatrix& g,
                            const CMatrix& lambda_foreign, double p_foreign,
                            double zeta_cross, double sigma2, int J) {
    return numerics::add(
        noise_identity(h_cross.rows(), sigma2),
        interference_term(h_cross, g, lambda_foreign, p_foreign, zeta_cross, J));
}

MmseInit mmse_init(const CMatrix& h_direct, const CMatrix& g, const CMatrix& covariance) {
    const CMatrix cov_inv = numerics::invert(covariance);
    const CMatrix hg = numerics::matmul(h_direct, g);
    const CMatrix quad =
        numerics::matmul(numerics::hermitian(hg), numerics::matmul(cov_inv, hg));
    MmseInit init;
    init.v0 = numerics::max_eigenvector(quad).vector;
    init.u0 = numerics::normalize(
        numerics::matvec(numerics::matmul(cov_inv, hg), init.v0));
    return init;
}

CVector receive_null_vector(const CMatrix& h_cross, const CMatrix& g) {
    return numerics::null_vector(numerics::matmul(h_cross, g));
}

ZfTransmit zf_transmit(const CMatrix& h0) {
    if (h0.rows() != h0.cols()) throw std::invalid_argument("h0 must be square");
    const std::size_t J = h0.rows();
    const CMatrix gram_inv = numerics::invert(numerics::matmul(h0, numerics::hermitian(h0)));
    std::vector<cx> d(J);
    for (std::size_t l = 0; l < J; ++l) {
        const double diag = gram_inv(l, l).real();
        if (!(diag > 0.0)) {
            throw SingularMatrixError("equivalent channel gram matrix is not positive");
        }
        d[l] = cx(1.0 / std::sqrt(diag), 0.0);
    }
    ZfTransmit out;
    out.d = CMatrix::diagonal(d);
    out.v = numerics::matmul(numerics::hermitian(h0), numerics::matmul(gram_inv, out.d));
    return out;
}

double femto_user_rate(const CVector& u, const CMatrix& h_direct, const CMatrix& g,
                       const CVector& v, double lambda, double zeta, double p_tx,
                       double sigma2, int J) {
    const CVector w = numerics::matvec(numerics::matmul(h_direct, g), v);
    const double eff = std::norm(numerics::dot_conj(u, w));
    return std::log2(1.0 + (static_cast<double>(J) + 1.0) * p_tx / J / sigma2 * zeta *
                               lambda * eff);
}

double macro_user_rate(const CVector& u, const CMatrix& h_direct, const CMatrix& g,
                       const CVector& v, double lambda, double zeta_serving,
                       double p_m, const CMatrix& cov_residual, int J) {
    const CVector w = numerics::matvec(numerics::matmul(h_direct, g), v);
    const double eff = std::norm(numerics::dot_conj(u, w));
    const double denom = numerics::dot_conj(u, numerics::matvec(cov_residual, u)).real();
    return std::log2(1.0 + (static_cast<double>(J) + 1.0) * p_m / J * zeta_serving *
                               lambda * eff / denom);
}

Cell stronger_interferer(const Topology& topology, const SystemParams& params,
                         int macro_user) {
    const double f1 = params.tx_power_femto1 * topology.pathloss_gain[1][0][macro_user];
    const double f2 = params.tx_power_femto2 * topology.pathloss_gain[2][0][macro_user];
    return f2 > f1 ? Cell::Femto2 : Cell::Femto1;
}

Solution evaluate_assignment(const Group& group, const ChannelRealization& realization,
                             const Topology& topology, const SystemParams& params,
                             double sigma2, Mode mode) {
    const GroupContext ctx = build_context(group, realization, topology, params, sigma2);
    std::array<std::vector<CVector>, 3> receive;
    for (Cell c : channel::kCells) {
        const int ci = static_cast<int>(c);
        receive[ci].reserve(ctx.streams[ci].size());
        for (const StreamContext& s : ctx.streams[ci]) {
            if (mode == Mode::Zf) {
                receive[ci].push_back(numerics::null_vector(s.aligned_hg));
            } else {
                receive[ci].push_back(mmse_init(s.direct, ctx.reference, s.cov_update).u0);
            }
        }
    }
    return assemble(ctx, std::move(receive), sigma2);
}

SearchResult subset_search(const ora::Allocation& allocation,
                           const ChannelRealization& realization,
                           const Topology& topology, const SystemParams& params,
                           double sigma2, Mode mode) {
    const int J = params.num_macro_users - allocation.trade_off_A;
    if (J < 1) throw std::invalid_argument("subset search needs at least one stream");
    if (static_cast<int>(allocation.ia_channels.size()) != J + 1) {
        throw std::invalid_argument("subset search needs exactly J + 1 sub-channels");
    }
    std::array<std::vector<std::vector<int>>, 3> choices;
    for (int c = 0; c < channel::kNumCells; ++c) {
        choices[c] = combinations(allocation.ia_users[c], J);
        if (choices[c].empty()) {
            throw std::invalid_argument("not enough unscheduled users for subset search");
        }
    }

    SearchResult best;
    double best_sum = -1.0;
    for (const auto& macro_pick : choices[0]) {
        for (const auto& f1_pick : choices[1]) {
            for (const auto& f2_pick : choices[2]) {
                Group group;
                group.channels = allocation.ia_channels;
                group.users = {macro_pick, f1_pick, f2_pick};
                Solution sol =
                    evaluate_assignment(group, realization, topology, params, sigma2, mode);
                if (sol.sum_rate > best_sum) {
                    best_sum = sol.sum_rate;
                    best.group = std::move(group);
                    best.solution = std::move(sol);
                }
            }
        }
    }
    return best;
}

IterationResult iterate_vectors(const Solution& start, const Group& group,
                                const ChannelRealization& realization,
                                const Topology& topology, const SystemParams& params,
                                double sigma2, int iterations) {
    if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
    const GroupContext ctx = build_context(group, realization, topology, params, sigma2);

    IterationResult result;
    result.solution = start;
    result.sum_rate_trace.push_back(start.sum_rate);

    for (int round = 0; round < iterations; ++round) {
        std::array<std::vector<CVector>, 3> receive;
        for (Cell c : channel::kCells) {
            const int ci = static_cast<int>(c);
            const CMatrix& vmat = result.solution.transmit[ci];
            receive[ci].reserve(ctx.streams[ci].size());
            for (std::size_t l = 0; l < ctx.streams[ci].size(); ++l) {
                const StreamContext& s = ctx.streams[ci][l];
                const CVector vcol = column(vmat, l);
                const CVector driven =
                    numerics::matvec(numerics::matmul(numerics::invert(s.cov_update), s.hg),
                                     vcol);
                receive[ci].push_back(numerics::normalize(driven));
            }
        }
        Solution next = assemble(ctx, std::move(receive), sigma2);
        result.sum_rate_trace.push_back(next.sum_rate);
        result.solution = std::move(next);
    }
    return result;
}

} // namespace femtoslice::ia
