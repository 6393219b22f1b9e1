// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/selftest.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <ostream>
#include <vector>

#include "femtoslice/channel.hpp"
#include "femtoslice/experiment.hpp"
#include "femtoslice/ia.hpp"
#include "femtoslice/numerics.hpp"
#include "femtoslice/ora.hpp"
#include "femtoslice/rng.hpp"
#include "femtoslice/tolerances.hpp"

namespace femtoslice::selftest {

namespace {

using numerics::CMatrix;
using numerics::CVector;
using numerics::cx;

CMatrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
    std::vector<cx> e(rows * cols);
    for (cx& v : e) v = rng.complex_gaussian();
    return CMatrix(rows, cols, std::move(e));
}

double max_abs_offdiag(const CMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i == j) continue;
            worst = std::max(worst, std::abs(m(i, j)));
        }
    }
    return worst;
}

channel::SystemParams desk_params(int users, int subchannels) {
    channel::SystemParams p;
    p.num_macro_users = users;
    p.num_femto_users = users;
    p.num_subchannels = subchannels;
    p.trials = 1;
    return p;
}

} // namespace

SuiteResult run_numerics_suite() {
    SuiteResult result{"numerics-residuals", 0, 0};
    RngStream rng(0xA11CE5EEDull);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rep % 5;
        const CMatrix a = random_matrix(n, n, rng);
        const CMatrix b = random_matrix(n, n, rng);
        const CMatrix c = random_matrix(n, n, rng);

        // (ab)c == a(bc)
        const CMatrix left = numerics::matmul(numerics::matmul(a, b), c);
        const CMatrix right = numerics::matmul(a, numerics::matmul(b, c));
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                worst = std::max(worst, std::abs(left(i, j) - right(i, j)));
        ++result.checks;
        if (worst > 1e-9) ++result.failures;

        // a * inv(a) == I
        const CMatrix prod = numerics::matmul(a, numerics::invert(a));
        worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                worst = std::max(worst,
                                 std::abs(prod(i, j) - (i == j ? cx(1.0) : cx(0.0))));
        ++result.checks;
        if (worst > tol::kInverseResidual) ++result.failures;

        // dominant eigenpair of a PSD matrix satisfies s v = value v
        const CMatrix psd = numerics::matmul(numerics::hermitian(a), a);
        const auto eig = numerics::max_eigenvector(psd);
        const CVector sv = numerics::matvec(psd, eig.vector);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            resid += std::norm(sv[i] - eig.value * eig.vector[i]);
        }
        ++result.checks;
        if (std::sqrt(resid) > 1e-6 * std::max(1.0, eig.value)) ++result.failures;

        // null vector annihilates a tall full-rank matrix
        const CMatrix tall = random_matrix(n + 1, n, rng);
        const CVector u = numerics::null_vector(tall);
        double null_resid = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            cx acc(0.0, 0.0);
            for (std::size_t i = 0; i <= n; ++i) acc += std::conj(u[i]) * tall(i, j);
            null_resid += std::norm(acc);
        }
        ++result.checks;
        if (std::sqrt(null_resid) > tol::kNullResidual) ++result.failures;
    }
    return result;
}

SuiteResult run_unitarity_suite(double perturbation) {
    SuiteResult result{"reference-unitarity", 0, 0};
    for (int J = 1; J <= 5; ++J) {
        CMatrix g = ia::reference_precoder(J);
        g(0, 0) += perturbation;
        const CMatrix gram = numerics::matmul(numerics::hermitian(g), g);
        double worst = 0.0;
        for (int i = 0; i < J; ++i)
            for (int j = 0; j < J; ++j)
                worst = std::max(worst,
                                 std::abs(gram(i, j) - (i == j ? cx(1.0) : cx(0.0))));
        ++result.checks;
        if (worst > 1e-10) ++result.failures;
    }
    return result;
}

SuiteResult run_alignment_suite() {
    SuiteResult result{"alignment-residuals", 0, 0};
    RngStream rng(0xBEEFCAFEull);
    for (int rep = 0; rep < 200; ++rep) {
        const int J = 1 + rep % 5;
        std::vector<cx> diag(J + 1);
        for (cx& v : diag) v = rng.complex_gaussian();
        const CMatrix h_cross = CMatrix::diagonal(diag);
        const CMatrix g = ia::reference_precoder(J);
        const CVector u = ia::receive_null_vector(h_cross, g);
        const CMatrix hg = numerics::matmul(h_cross, g);
        double resid = 0.0;
        for (int b = 0; b < J; ++b) {
            cx acc(0.0, 0.0);
            for (int i = 0; i <= J; ++i) acc += std::conj(u[i]) * hg(i, b);
            resid += std::norm(acc);
        }
        ++result.checks;
        if (std::sqrt(resid) > tol::kAlignResidual) ++result.failures;
    }
    return result;
}

SuiteResult run_zf_diagonality_suite() {
    SuiteResult result{"zf-diagonality", 0, 0};
    RngStream rng(0xD1A60000ull);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t J = 1 + rep % 5;
        const CMatrix h0 = random_matrix(J, J, rng);
        const ia::ZfTransmit zf = ia::zf_transmit(h0);
        const CMatrix prod = numerics::matmul(h0, zf.v);
        ++result.checks;
        if (max_abs_offdiag(prod) > tol::kZfDiagonalResidual) ++result.failures;
        double worst_norm = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < J; ++i) col += std::norm(zf.v(i, j));
            worst_norm = std::max(worst_norm, std::abs(std::sqrt(col) - 1.0));
        }
        ++result.checks;
        if (worst_norm > tol::kZfDiagonalResidual) ++result.failures;
    }
    return result;
}

SuiteResult run_power_control_suite() {
    SuiteResult result{"power-control-identity", 0, 0};
    const channel::SystemParams params;
    for (int rep = 0; rep < 50; ++rep) {
        RngStream rng(derive_seed(99, 0, rep, 0, StreamPurpose::Topology));
        const channel::Topology topo = channel::sample_topology(params, rng);
        const channel::PowerControl pc = channel::PowerControl::from(topo, params);
        double worst = 0.0;
        for (channel::Cell c : channel::kCells) {
            const int ci = static_cast<int>(c);
            for (int u = 0; u < params.users_in(c); ++u) {
                worst = std::max(
                    worst, std::abs(pc.at(c, u) * topo.pathloss_gain[ci][ci][u] - 1.0));
            }
        }
        ++result.checks;
        if (worst > tol::kPowerControlIdentity) ++result.failures;
    }
    return result;
}

SuiteResult run_desk_oracle_suite() {
    SuiteResult result{"desk-brute-force", 0, 0};

    // Opportunistic allocation at K = L = 2, N = 3 against full enumeration.
    {
        const channel::SystemParams params = desk_params(2, 3);
        const double sigma2 = 0.1;
        for (int rep = 0; rep < 20; ++rep) {
            RngStream topo_rng(derive_seed(7, 0, rep, 0, StreamPurpose::Topology));
            RngStream fading_rng(derive_seed(7, 0, rep, 0, StreamPurpose::Fading));
            const auto topo = channel::sample_topology(params, topo_rng);
            const auto fading = channel::sample_fading(params, fading_rng);

            // Independent no-power-control rate, straight from the tables.
            auto rate_of = [&](channel::Cell cell, int user, int n) {
                const int ci = static_cast<int>(cell);
                const double desired = params.tx_power(cell) *
                                       topo.pathloss_gain[ci][ci][user] *
                                       std::norm(fading.at(cell, cell, user, n));
                double interference = 0.0;
                for (channel::Cell tx : channel::kCells) {
                    if (tx == cell) continue;
                    if (tx != channel::Cell::Macro && cell != channel::Cell::Macro)
                        continue;
                    const int ti = static_cast<int>(tx);
                    interference += params.tx_power(tx) * topo.pathloss_gain[ti][ci][user] *
                                    std::norm(fading.at(tx, cell, user, n));
                }
                return std::log2(1.0 + desired / (interference + sigma2));
            };

            for (int A = 0; A <= 3; ++A) {
                const auto allocation = ora::allocate(fading, topo, params, sigma2, A);
                // Brute force every channel's best triplet.
                std::vector<double> best_metric(3, -1.0);
                std::vector<std::array<int, 3>> best_triplet(3);
                for (int n = 0; n < 3; ++n) {
                    for (int k = 0; k < 2; ++k)
                        for (int l1 = 0; l1 < 2; ++l1)
                            for (int l2 = 0; l2 < 2; ++l2) {
                                const double sum = rate_of(channel::Cell::Macro, k, n) +
                                                   rate_of(channel::Cell::Femto1, l1, n) +
                                                   rate_of(channel::Cell::Femto2, l2, n);
                                if (sum > best_metric[n]) {
                                    best_metric[n] = sum;
                                    best_triplet[n] = {k, l1, l2};
                                }
                            }
                }
                // Brute force the channel subset with the best metric total.
                std::vector<int> pick;
                double pick_sum = -1.0;
                for (int mask = 0; mask < 8; ++mask) {
                    if (std::popcount(static_cast<unsigned>(mask)) != A) continue;
                    double sum = 0.0;
                    std::vector<int> channels;
                    for (int n = 0; n < 3; ++n) {
                        if (mask & (1 << n)) {
                            sum += best_metric[n];
                            channels.push_back(n);
                        }
                    }
                    if (sum > pick_sum) {
                        pick_sum = sum;
                        pick = channels;
                    }
                }
                bool match = static_cast<int>(allocation.ora_channels.size()) == A;
                if (match) {
                    std::vector<int> got;
                    for (const auto& c : allocation.ora_channels) {
                        got.push_back(c.subchannel);
                        if (best_triplet[c.subchannel] !=
                            std::array<int, 3>{c.macro_user, c.f1_user, c.f2_user}) {
                            match = false;
                        }
                    }
                    std::sort(got.begin(), got.end());
                    if (got != pick) match = false;
                }
                ++result.checks;
                if (!match) ++result.failures;
            }
        }
    }

    // Orthogonal baseline at K = L = 2, N = 4 against assignment enumeration.
    {
        channel::SystemParams params = desk_params(2, 4);
        params.trials = 1;
        const double sigma2 = 0.05;
        for (int rep = 0; rep < 20; ++rep) {
            params.master_seed = 1000 + rep;
            const auto result_one = experiment::omfc_baseline(params, sigma2, 0);

            RngStream topo_rng(derive_seed(params.master_seed, 0, 0, 0,
                                           StreamPurpose::Topology));
            RngStream fading_rng(derive_seed(params.master_seed, 0, 0, 0,
                                             StreamPurpose::Fading));
            const auto topo = channel::sample_topology(params, topo_rng);
            const auto fading = channel::sample_fading(params, fading_rng);
            const auto pc = channel::PowerControl::from(topo, params);

            auto cell_rate = [&](channel::Cell c, int user, int n) {
                const int ci = static_cast<int>(c);
                return std::log2(1.0 + params.tx_power(c) * pc.at(c, user) *
                                           topo.pathloss_gain[ci][ci][user] *
                                           std::norm(fading.at(c, c, user, n)) / sigma2);
            };
            // Enumerate every user-per-channel assignment per cell.
            auto best_assignment = [&](channel::Cell c, int first, int last) {
                const int span = last - first;
                double best = -1.0;
                for (int code = 0; code < 1 << span; ++code) {
                    double sum = 0.0;
                    for (int i = 0; i < span; ++i) {
                        sum += cell_rate(c, (code >> i) & 1, first + i);
                    }
                    best = std::max(best, sum);
                }
                return best;
            };
            const double expected = best_assignment(channel::Cell::Macro, 0, 2) +
                                    best_assignment(channel::Cell::Femto1, 2, 4) +
                                    best_assignment(channel::Cell::Femto2, 2, 4);
            ++result.checks;
            if (std::abs(result_one.per_trial[0] - expected) > 1e-9) ++result.failures;
        }
    }
    return result;
}

bool run_all(std::ostream& log) {
    const std::vector<SuiteResult> suites = {
        run_numerics_suite(),       run_unitarity_suite(),    run_alignment_suite(),
        run_zf_diagonality_suite(), run_power_control_suite(), run_desk_oracle_suite(),
    };
    bool all = true;
    for (const SuiteResult& s : suites) {
        log << (s.passed() ? "pass" : "FAIL") << "  " << s.name << "  (" << s.checks
            << " checks, " << s.failures << " failures)\n";
        all = all && s.passed();
    }
    return all;
}

} // namespace femtoslice::selftest
