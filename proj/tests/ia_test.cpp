// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "femtoslice/channel.hpp"
#include "femtoslice/errors.hpp"
#include "femtoslice/ia.hpp"
#include "femtoslice/numerics.hpp"
#include "femtoslice/ora.hpp"
#include "femtoslice/rng.hpp"

using namespace femtoslice;
using channel::Cell;
using channel::SystemParams;
using numerics::CMatrix;
using numerics::CVector;
using numerics::cx;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            m = std::max(m, std::abs(a(r, c) - b(r, c)));
        }
    }
    return m;
}

// A directly constructed drop: diagonal per-channel channels, prescribed
// path gains with consistent serving distances, one alignment group over
// all sub-channels.  No sampling, so edge values can be pinned exactly.
struct Desk {
    SystemParams params;
    channel::Topology topology;
    channel::ChannelRealization realization;
    ia::Group group;
};

void set_serving_gain(Desk& d, Cell c, int user, double zeta) {
    const int ci = static_cast<int>(c);
    const double d0 =
        c == Cell::Macro ? d.params.d0_outdoor_m : d.params.d0_indoor_m;
    const double k = channel::pathloss_k_factor(d.params.carrier_hz, d0);
    d.topology.pathloss_gain[ci][ci][user] = zeta;
    // Distance consistent with the gain, so the power-control amplification
    // computed from it cancels zeta.
    d.topology.distance_m[ci][ci][user] = std::sqrt(k / zeta);
}

Desk make_desk(int J) {
    Desk d;
    d.params.num_macro_users = J;
    d.params.num_femto_users = J;
    d.params.num_subchannels = J + 1;
    d.realization.num_subchannels = J + 1;
    for (int tx = 0; tx < channel::kNumCells; ++tx) {
        for (int rx = 0; rx < channel::kNumCells; ++rx) {
            d.topology.distance_m[tx][rx].assign(J, 1.0);
            d.topology.pathloss_gain[tx][rx].assign(J, 0.0);
            d.realization.h[tx][rx].assign(static_cast<std::size_t>(J) * (J + 1),
                                           cx(0.0, 0.0));
        }
    }
    for (int n = 0; n <= J; ++n) d.group.channels.push_back(n);
    for (int c = 0; c < channel::kNumCells; ++c) {
        for (int u = 0; u < J; ++u) d.group.users[c].push_back(u);
    }
    return d;
}

Desk random_desk(int J, RngStream& rng, double cross_scale = 0.3, double serving_scale = 1.0) {
    Desk d = make_desk(J);
    for (int c = 0; c < channel::kNumCells; ++c) {
        for (int u = 0; u < J; ++u) {
            set_serving_gain(d, static_cast<Cell>(c), u,
                             serving_scale * (0.5 + rng.uniform()));
        }
    }
    for (int tx = 0; tx < channel::kNumCells; ++tx) {
        for (int rx = 0; rx < channel::kNumCells; ++rx) {
            if (tx == rx) continue;
            for (int u = 0; u < J; ++u) {
                d.topology.pathloss_gain[tx][rx][u] =
                    cross_scale * (0.5 + rng.uniform());
            }
            for (cx& h : d.realization.h[tx][rx]) h = rng.complex_gaussian();
        }
        for (cx& h : d.realization.h[tx][tx]) h = rng.complex_gaussian();
    }
    return d;
}

CVector matrix_column(const CMatrix& m, std::size_t j) {
    CVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
    return out;
}

} // namespace

TEST_CASE("reference precoder for one stream is the flat column") {
    const CMatrix g = ia::reference_precoder(1);
    REQUIRE(g.rows() == 2);
    REQUIRE(g.cols() == 1);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(g(0, 0) - cx(s, 0)) < 1e-15);
    CHECK(std::abs(g(1, 0) - cx(s, 0)) < 1e-15);
}

TEST_CASE("reference precoder has orthonormal columns for every stream count") {
    for (int J = 1; J <= 5; ++J) {
        const CMatrix g = ia::reference_precoder(J);
        REQUIRE(g.rows() == static_cast<std::size_t>(J + 1));
        REQUIRE(g.cols() == static_cast<std::size_t>(J));
        const CMatrix gram = numerics::matmul(numerics::hermitian(g), g);
        CHECK(max_abs_diff(gram, CMatrix::identity(J)) < 1e-10);
    }
    CHECK_THROWS_AS(ia::reference_precoder(0), std::invalid_argument);
}

TEST_CASE("expected covariance without interference is the noise identity") {
    const int J = 2;
    const CMatrix g = ia::reference_precoder(J);
    RngStream rng(301);
    std::vector<cx> hd(J + 1);
    for (cx& v : hd) v = rng.complex_gaussian();
    const CMatrix h_cross = CMatrix::diagonal(hd);
    const CMatrix lam = CMatrix::diagonal({cx(1, 0), cx(2, 0)});
    const CMatrix cov =
        ia::expected_covariance(h_cross, g, lam, 0.0, 0.5, 0.05, J);
    CHECK(max_abs_diff(cov, numerics::scale(CMatrix::identity(J + 1), 0.05)) < 1e-15);
}

TEST_CASE("expected covariance matches the closed form for an identity channel") {
    const int J = 2;
    const CMatrix g = ia::reference_precoder(J);
    const CMatrix h_cross = CMatrix::identity(J + 1);
    // Amplification diag entries are sqrt(lambda); trace(L L^H) = 3 + 5 = 8.
    const CMatrix lam =
        CMatrix::diagonal({cx(std::sqrt(3.0), 0), cx(std::sqrt(5.0), 0)});
    const double p = 2.0, zeta = 0.25, sigma2 = 0.01;
    const CMatrix cov = ia::expected_covariance(h_cross, g, lam, p, zeta, sigma2, J);
    const double c = (J + 1.0) * p / J * zeta * (8.0 / J);
    const CMatrix expect = numerics::add(
        numerics::scale(CMatrix::identity(J + 1), sigma2),
        numerics::scale(numerics::matmul(g, numerics::hermitian(g)), c));
    CHECK(max_abs_diff(cov, expect) < 1e-12);
}

TEST_CASE("expected covariance is positive definite down to the noise floor") {
    RngStream rng(302);
    for (int rep = 0; rep < 20; ++rep) {
        const int J = 1 + static_cast<int>(rng.uniform() * 4.0);
        const CMatrix g = ia::reference_precoder(J);
        std::vector<cx> hd(J + 1);
        for (cx& v : hd) v = rng.complex_gaussian();
        std::vector<cx> ld(J);
        for (cx& v : ld) v = cx(std::sqrt(0.5 + rng.uniform()), 0.0);
        const double sigma2 = 0.05;
        const CMatrix cov = ia::expected_covariance(CMatrix::diagonal(hd), g,
                                                    CMatrix::diagonal(ld), 1.0, 0.7,
                                                    sigma2, J);
        // Smallest eigenvalue via the shifted complement: for a large c,
        // lambda_min(cov) = c - lambda_max(c I - cov) >= sigma2.
        const double shift = 1000.0;
        const CMatrix flipped =
            numerics::add(numerics::scale(CMatrix::identity(J + 1), shift),
                          numerics::scale(cov, cx(-1.0, 0.0)));
        const double lambda_min = shift - numerics::max_eigenvector(flipped).value;
        CHECK(lambda_min >= sigma2 - 1e-8);
    }
}

TEST_CASE("initial receive estimate picks the strongest axis for axis-aligned input") {
    // With g the truncated identity and white covariance everything is
    // axis-separable, so the best direction is the largest channel entry.
    const int J = 2;
    CMatrix g(J + 1, J);
    g(0, 0) = cx(1, 0);
    g(1, 1) = cx(1, 0);
    const CMatrix h = CMatrix::diagonal({cx(0.3, 0.4), cx(2.0, -1.0), cx(0.1, 0.0)});
    const auto init = ia::mmse_init(h, g, numerics::scale(CMatrix::identity(J + 1), 0.2));
    CHECK(std::abs(init.v0[1]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(init.v0[0]) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(init.u0[1]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(numerics::norm(init.u0) == doctest::Approx(1.0));
}

TEST_CASE("initial transmit directions maximize the whitened quadratic form") {
    RngStream rng(303);
    for (int rep = 0; rep < 10; ++rep) {
        const int J = 2 + static_cast<int>(rng.uniform() * 3.0);
        const CMatrix g = ia::reference_precoder(J);
        std::vector<cx> hd(J + 1);
        for (cx& v : hd) v = rng.complex_gaussian();
        const CMatrix h = CMatrix::diagonal(hd);
        std::vector<cx> xd(J + 1);
        for (cx& v : xd) v = rng.complex_gaussian();
        const CMatrix cov = ia::expected_covariance(
            CMatrix::diagonal(xd), g, CMatrix::identity(J), 1.0, 0.5, 0.05, J);
        const auto init = ia::mmse_init(h, g, cov);
        CHECK(numerics::norm(init.v0) == doctest::Approx(1.0));
        CHECK(numerics::norm(init.u0) == doctest::Approx(1.0));

        const CMatrix cov_inv = numerics::invert(cov);
        const CMatrix hg = numerics::matmul(h, g);
        const CMatrix quad =
            numerics::matmul(numerics::hermitian(hg), numerics::matmul(cov_inv, hg));
        const double won =
            numerics::dot_conj(init.v0, numerics::matvec(quad, init.v0)).real();
        for (int probe = 0; probe < 200; ++probe) {
            CVector x(J);
            for (std::size_t i = 0; i < static_cast<std::size_t>(J); ++i) {
                x[i] = rng.complex_gaussian();
            }
            const CVector xn = numerics::normalize(x);
            CHECK(numerics::dot_conj(xn, numerics::matvec(quad, xn)).real() <=
                  won * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("exact alignment receiver for one stream and a flat channel") {
    const CMatrix g = ia::reference_precoder(1);
    const CVector u = ia::receive_null_vector(CMatrix::identity(2), g);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(u[0] - cx(s, 0)) < 1e-9);
    CHECK(std::abs(u[1] - cx(-s, 0)) < 1e-9);
}

TEST_CASE("exact alignment receiver ignores a complex scale on the channel") {
    RngStream rng(304);
    for (int rep = 0; rep < 10; ++rep) {
        const int J = 1 + static_cast<int>(rng.uniform() * 4.0);
        const CMatrix g = ia::reference_precoder(J);
        std::vector<cx> hd(J + 1);
        for (cx& v : hd) v = rng.complex_gaussian();
        const CMatrix h = CMatrix::diagonal(hd);
        const cx c(1.7, -2.3);
        std::vector<cx> scaled = hd;
        for (cx& v : scaled) v *= c;
        const CVector a = ia::receive_null_vector(h, g);
        const CVector b = ia::receive_null_vector(CMatrix::diagonal(scaled), g);
        // Same null space, same phase fix: identical vectors.
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i] - b[i]) < 1e-8);
        }
    }
}

TEST_CASE("in-cell zero forcing on an identity equivalent channel is trivial") {
    const auto zf = ia::zf_transmit(CMatrix::identity(3));
    CHECK(max_abs_diff(zf.v, CMatrix::identity(3)) < 1e-12);
    CHECK(max_abs_diff(zf.d, CMatrix::identity(3)) < 1e-12);
}

TEST_CASE("in-cell zero forcing on a diagonal channel keeps unit columns") {
    const auto zf = ia::zf_transmit(CMatrix::diagonal({cx(2, 0), cx(0.5, 0)}));
    CHECK(max_abs_diff(zf.v, CMatrix::identity(2)) < 1e-12);
    CHECK(std::abs(zf.d(0, 0) - cx(2.0, 0)) < 1e-12);
    CHECK(std::abs(zf.d(1, 1) - cx(0.5, 0)) < 1e-12);
}

TEST_CASE("in-cell zero forcing diagonalizes random equivalent channels") {
    RngStream rng(305);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t J = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
        CMatrix h0(J, J);
        for (std::size_t r = 0; r < J; ++r) {
            for (std::size_t c = 0; c < J; ++c) h0(r, c) = rng.complex_gaussian();
        }
        const auto zf = ia::zf_transmit(h0);
        const CMatrix prod = numerics::matmul(h0, zf.v);
        for (std::size_t r = 0; r < J; ++r) {
            for (std::size_t c = 0; c < J; ++c) {
                if (r == c) {
                    CHECK(std::abs(prod(r, c) - zf.d(r, c)) < 1e-9);
                    CHECK(zf.d(r, c).real() > 0.0);
                } else {
                    CHECK(std::abs(prod(r, c)) < 1e-9);
                }
            }
        }
        for (std::size_t c = 0; c < J; ++c) {
            CHECK(numerics::norm(matrix_column(zf.v, c)) ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(ia::zf_transmit(CMatrix(2, 2)), SingularMatrixError);
}

TEST_CASE("stream rate formulas at pinned operating points") {
    const int J = 1;
    const CMatrix g = ia::reference_precoder(J);
    const CMatrix h = CMatrix::identity(2);
    const CVector v(std::vector<cx>{cx(1, 0)});

    // Perfectly received stream with (J+1) P / (J sigma2) = 2 and unit
    // effective gain: log2(1 + 2 * |u^H H G v|^2) with |.| = 1 gives log2(3).
    const CVector u_on(std::vector<cx>{cx(1.0 / std::sqrt(2.0), 0),
                                       cx(1.0 / std::sqrt(2.0), 0)});
    CHECK(ia::femto_user_rate(u_on, h, g, v, 1.0, 1.0, 1.0, 1.0, J) ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-12));

    // A receive vector orthogonal to the effective channel earns nothing.
    const CVector u_off(std::vector<cx>{cx(1.0 / std::sqrt(2.0), 0),
                                        cx(-1.0 / std::sqrt(2.0), 0)});
    CHECK(ia::femto_user_rate(u_off, h, g, v, 1.0, 1.0, 1.0, 1.0, J) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // With a pure-noise residual covariance the macro formula reduces to
    // the femto one.
    const CMatrix cov_res = numerics::scale(CMatrix::identity(2), 0.04);
    CHECK(ia::macro_user_rate(u_on, h, g, v, 2.0, 0.5, 1.0, cov_res, J) ==
          doctest::Approx(ia::femto_user_rate(u_on, h, g, v, 2.0, 0.5, 1.0, 0.04, J))
              .epsilon(1e-12));
}

TEST_CASE("the stronger interferer is the larger received femto power") {
    Desk d = make_desk(2);
    d.topology.pathloss_gain[1][0][0] = 3e-12;
    d.topology.pathloss_gain[2][0][0] = 1e-12;
    d.topology.pathloss_gain[1][0][1] = 1e-13;
    d.topology.pathloss_gain[2][0][1] = 8e-13;
    CHECK(ia::stronger_interferer(d.topology, d.params, 0) == Cell::Femto1);
    CHECK(ia::stronger_interferer(d.topology, d.params, 1) == Cell::Femto2);
    // Transmit power enters the proxy, not just the path gain.
    d.params.tx_power_femto2 = 4.0;
    CHECK(ia::stronger_interferer(d.topology, d.params, 0) == Cell::Femto2);
    // Exact ties resolve to the first femtocell.
    d.params.tx_power_femto2 = 1.0;
    d.topology.pathloss_gain[2][0][0] = 3e-12;
    CHECK(ia::stronger_interferer(d.topology, d.params, 0) == Cell::Femto1);
}

namespace {

// One-stream desk instance with every number pinned; the expected rates
// below were produced by an independent calculation of the same model and
// frozen before this suite first ran.
Desk frozen_desk() {
    Desk d = make_desk(1);
    set_serving_gain(d, Cell::Macro, 0, 2e-13);
    set_serving_gain(d, Cell::Femto1, 0, 1e-7);
    set_serving_gain(d, Cell::Femto2, 0, 2e-7);
    d.topology.pathloss_gain[1][0][0] = 3e-12;   // femto1 into the macro user
    d.topology.pathloss_gain[2][0][0] = 1e-12;
    d.topology.pathloss_gain[0][1][0] = 1.5e-14; // macro into each femto user
    d.topology.pathloss_gain[0][2][0] = 2.5e-14;

    d.realization.h[0][0] = {cx(0.9, 0.3), cx(0.2, -0.7)};
    d.realization.h[1][1] = {cx(1.1, -0.2), cx(0.5, 0.5)};
    d.realization.h[2][2] = {cx(0.3, 0.8), cx(-0.6, 0.4)};
    d.realization.h[0][1] = {cx(0.4, 0.1), cx(-0.2, 0.3)};
    d.realization.h[0][2] = {cx(-0.5, 0.6), cx(0.1, -0.9)};
    d.realization.h[1][0] = {cx(0.7, -0.4), cx(0.3, 0.2)};
    d.realization.h[2][0] = {cx(-0.1, 0.5), cx(0.8, 0.1)};
    return d;
}

} // namespace

TEST_CASE("pinned one-stream instance: exact alignment mode") {
    const Desk d = frozen_desk();
    const auto sol = ia::evaluate_assignment(d.group, d.realization, d.topology,
                                             d.params, 0.05, ia::Mode::Zf);
    CHECK(sol.rates[0][0] == doctest::Approx(4.47453272149796).epsilon(1e-9));
    CHECK(sol.rates[1][0] == doctest::Approx(3.064652958342253).epsilon(1e-9));
    CHECK(sol.rates[2][0] == doctest::Approx(3.2590353944795103).epsilon(1e-9));
    CHECK(sol.sum_rate == doctest::Approx(10.798221074319724).epsilon(1e-9));

    // The macro receiver nulls the stronger femto (the first one here) and
    // its vector is pinned by the phase convention.
    REQUIRE(sol.macro_aligned.size() == 1);
    CHECK(sol.macro_aligned[0] == Cell::Femto1);
    const double s6 = 1.0 / std::sqrt(6.0);
    CHECK(std::abs(sol.receive[0][0][0] - cx(s6, 0.0)) < 1e-9);
    CHECK(std::abs(sol.receive[0][0][1] - cx(-s6, -2.0 * s6)) < 1e-9);

    // Each femto receiver is exactly orthogonal to the macro intrusion.
    for (int f = 1; f <= 2; ++f) {
        cx leak(0, 0);
        const CMatrix cross = CMatrix::diagonal(d.realization.h[0][f]);
        const CMatrix cg = numerics::matmul(cross, sol.reference);
        for (std::size_t i = 0; i < 2; ++i) {
            leak += std::conj(sol.receive[f][0][i]) * cg(i, 0);
        }
        CHECK(std::abs(leak) < 1e-10);
    }
}

TEST_CASE("pinned one-stream instance: covariance-weighted mode") {
    const Desk d = frozen_desk();
    const auto sol = ia::evaluate_assignment(d.group, d.realization, d.topology,
                                             d.params, 0.05, ia::Mode::Mmse);
    CHECK(sol.rates[0][0] == doctest::Approx(4.887413497103782).epsilon(1e-9));
    CHECK(sol.rates[1][0] == doctest::Approx(5.131097812356859).epsilon(1e-9));
    CHECK(sol.rates[2][0] == doctest::Approx(4.0713172712844035).epsilon(1e-9));
    CHECK(sol.sum_rate == doctest::Approx(14.089828580745044).epsilon(1e-9));
}

TEST_CASE("pinned one-stream instance: receive updates are a fixed point") {
    const Desk d = frozen_desk();
    const auto start = ia::evaluate_assignment(d.group, d.realization, d.topology,
                                               d.params, 0.05, ia::Mode::Mmse);
    const auto iterated = ia::iterate_vectors(start, d.group, d.realization, d.topology,
                                              d.params, 0.05, 3);
    REQUIRE(iterated.sum_rate_trace.size() == 4);
    CHECK(iterated.sum_rate_trace[0] == start.sum_rate);
    for (double r : iterated.sum_rate_trace) {
        // One stream leaves a single receive direction up to phase, so the
        // update cannot move the rate.
        CHECK(r == doctest::Approx(start.sum_rate).epsilon(1e-9));
    }
}

TEST_CASE("zero receive-update rounds return the input untouched") {
    RngStream rng(306);
    const Desk d = random_desk(2, rng);
    const auto start = ia::evaluate_assignment(d.group, d.realization, d.topology,
                                               d.params, 0.05, ia::Mode::Mmse);
    const auto iterated = ia::iterate_vectors(start, d.group, d.realization, d.topology,
                                              d.params, 0.05, 0);
    REQUIRE(iterated.sum_rate_trace.size() == 1);
    CHECK(iterated.sum_rate_trace[0] == start.sum_rate);
    CHECK(iterated.solution.sum_rate == start.sum_rate);
    CHECK_THROWS_AS(ia::iterate_vectors(start, d.group, d.realization, d.topology,
                                        d.params, 0.05, -1),
                    std::invalid_argument);
}

TEST_CASE("receive updates help on average over random instances") {
    RngStream rng(307);
    double start_sum = 0.0, end_sum = 0.0;
    const int reps = 150;
    for (int rep = 0; rep < reps; ++rep) {
        const Desk d = random_desk(2, rng);
        const auto start = ia::evaluate_assignment(d.group, d.realization, d.topology,
                                                   d.params, 0.05, ia::Mode::Mmse);
        const auto iterated = ia::iterate_vectors(start, d.group, d.realization,
                                                  d.topology, d.params, 0.05, 5);
        REQUIRE(iterated.sum_rate_trace.size() == 6);
        CHECK(iterated.sum_rate_trace.front() == start.sum_rate);
        start_sum += start.sum_rate;
        end_sum += iterated.solution.sum_rate;
    }
    CHECK(end_sum / reps > start_sum / reps);
}

TEST_CASE("covariance-weighted receivers approach the exact null as noise vanishes") {
    RngStream rng(308);
    const int J = 1;
    const CMatrix g = ia::reference_precoder(J);
    int improved = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<cx> hd(2), xd(2);
        for (cx& v : hd) v = rng.complex_gaussian();
        for (cx& v : xd) v = rng.complex_gaussian();
        const CMatrix h = CMatrix::diagonal(hd);
        const CMatrix x = CMatrix::diagonal(xd);
        const CMatrix xg = numerics::matmul(x, g);
        auto residual_at = [&](double sigma2) {
            const CMatrix cov = ia::expected_covariance(x, g, CMatrix::identity(J), 1.0,
                                                        1.0, sigma2, J);
            const CVector u = ia::mmse_init(h, g, cov).u0;
            cx leak(0, 0);
            for (std::size_t i = 0; i < u.size(); ++i) {
                leak += std::conj(u[i]) * xg(i, 0);
            }
            return std::abs(leak);
        };
        const double loud = residual_at(1e-2);
        const double quiet = residual_at(1e-6);
        if (quiet < loud) ++improved;
        CHECK(quiet < 1e-2);
    }
    CHECK(improved >= 90);
}

TEST_CASE("swapping the two femtocells relabels the solution symmetrically") {
    RngStream rng(309);
    for (ia::Mode mode : {ia::Mode::Zf, ia::Mode::Mmse}) {
        const Desk d = random_desk(2, rng);

        Desk swapped = d;
        auto sw = [](int c) { return c == 1 ? 2 : c == 2 ? 1 : 0; };
        std::swap(swapped.topology.bs_position[1], swapped.topology.bs_position[2]);
        std::swap(swapped.topology.user_position[1], swapped.topology.user_position[2]);
        for (int tx = 0; tx < channel::kNumCells; ++tx) {
            for (int rx = 0; rx < channel::kNumCells; ++rx) {
                swapped.topology.distance_m[tx][rx] = d.topology.distance_m[sw(tx)][sw(rx)];
                swapped.topology.pathloss_gain[tx][rx] =
                    d.topology.pathloss_gain[sw(tx)][sw(rx)];
                swapped.realization.h[tx][rx] = d.realization.h[sw(tx)][sw(rx)];
            }
        }

        const auto a = ia::evaluate_assignment(d.group, d.realization, d.topology,
                                               d.params, 0.05, mode);
        const auto b = ia::evaluate_assignment(swapped.group, swapped.realization,
                                               swapped.topology, swapped.params, 0.05,
                                               mode);
        CHECK(b.sum_rate == doctest::Approx(a.sum_rate).epsilon(1e-9));
        for (std::size_t l = 0; l < a.rates[0].size(); ++l) {
            CHECK(b.rates[0][l] == doctest::Approx(a.rates[0][l]).epsilon(1e-9));
            CHECK(b.rates[1][l] == doctest::Approx(a.rates[2][l]).epsilon(1e-9));
            CHECK(b.rates[2][l] == doctest::Approx(a.rates[1][l]).epsilon(1e-9));
        }
    }
}

TEST_CASE("a sealed wall degenerates the exact mode but not the weighted one") {
    RngStream rng(310);
    Desk d = random_desk(2, rng);
    for (int tx = 0; tx < channel::kNumCells; ++tx) {
        for (int rx = 0; rx < channel::kNumCells; ++rx) {
            if (tx != rx) {
                for (cx& h : d.realization.h[tx][rx]) h = cx(0.0, 0.0);
            }
        }
    }
    // The exact receiver needs a one-dimensional cross subspace to null;
    // a zero cross channel leaves nothing to solve against.
    CHECK_THROWS_AS(ia::evaluate_assignment(d.group, d.realization, d.topology, d.params,
                                            0.05, ia::Mode::Zf),
                    DegenerateChannelError);
    const auto sol = ia::evaluate_assignment(d.group, d.realization, d.topology, d.params,
                                             0.05, ia::Mode::Mmse);
    CHECK(sol.sum_rate > 0.0);
}

TEST_CASE("group shape violations are rejected") {
    RngStream rng(311);
    const Desk d = random_desk(2, rng);

    ia::Group bad = d.group;
    bad.channels.pop_back();
    CHECK_THROWS_AS(ia::evaluate_assignment(bad, d.realization, d.topology, d.params, 0.05,
                                            ia::Mode::Mmse),
                    std::invalid_argument);
    bad = d.group;
    bad.users[2].pop_back();
    CHECK_THROWS_AS(ia::evaluate_assignment(bad, d.realization, d.topology, d.params, 0.05,
                                            ia::Mode::Mmse),
                    std::invalid_argument);
    bad = d.group;
    for (auto& users : bad.users) users.clear();
    CHECK_THROWS_AS(ia::evaluate_assignment(bad, d.realization, d.topology, d.params, 0.05,
                                            ia::Mode::Mmse),
                    std::invalid_argument);
}

TEST_CASE("user subset search agrees with a plain enumeration") {
    SystemParams params;
    params.num_macro_users = 3;
    params.num_femto_users = 3;
    params.num_subchannels = 4;
    const double sigma2 = channel::snr_to_noise(30.0, params.tx_power_macro);

    for (std::uint64_t salt = 400; salt < 406; ++salt) {
        RngStream trng(derive_seed(salt, 0, 0, 0, StreamPurpose::Topology));
        const auto topology = channel::sample_topology(params, trng);
        RngStream frng(derive_seed(salt, 0, 0, 0, StreamPurpose::Fading));
        const auto realization = channel::sample_fading(params, frng);
        const auto alloc = ora::allocate(realization, topology, params, sigma2, 2);

        const auto found =
            ia::subset_search(alloc, realization, topology, params, sigma2, ia::Mode::Mmse);

        // J = 1 here, so candidate groups are user triples.
        double best = -1.0;
        std::array<int, 3> best_users{-1, -1, -1};
        for (int mu : alloc.ia_users[0]) {
            for (int f1 : alloc.ia_users[1]) {
                for (int f2 : alloc.ia_users[2]) {
                    ia::Group group;
                    group.channels = alloc.ia_channels;
                    group.users = {std::vector<int>{mu}, std::vector<int>{f1},
                                   std::vector<int>{f2}};
                    const auto sol = ia::evaluate_assignment(group, realization, topology,
                                                             params, sigma2, ia::Mode::Mmse);
                    if (sol.sum_rate > best) {
                        best = sol.sum_rate;
                        best_users = {mu, f1, f2};
                    }
                }
            }
        }
        CHECK(found.solution.sum_rate == doctest::Approx(best).epsilon(1e-12));
        CHECK(found.group.users[0] == std::vector<int>{best_users[0]});
        CHECK(found.group.users[1] == std::vector<int>{best_users[1]});
        CHECK(found.group.users[2] == std::vector<int>{best_users[2]});
    }
}

TEST_CASE("subset search with a single candidate returns it") {
    RngStream rng(312);
    const Desk d = random_desk(2, rng);
    ora::Allocation alloc;
    alloc.trade_off_A = 0;   // J = num_macro_users - 0 = 2
    alloc.ia_channels = d.group.channels;
    alloc.ia_users = d.group.users;
    const auto found = ia::subset_search(alloc, d.realization, d.topology, d.params, 0.05,
                                         ia::Mode::Mmse);
    CHECK(found.group.users == d.group.users);
    const auto direct = ia::evaluate_assignment(d.group, d.realization, d.topology,
                                                d.params, 0.05, ia::Mode::Mmse);
    CHECK(found.solution.sum_rate == doctest::Approx(direct.sum_rate).epsilon(1e-12));
}

TEST_CASE("subset search validates its inputs") {
    RngStream rng(313);
    const Desk d = random_desk(2, rng);
    ora::Allocation alloc;
    alloc.trade_off_A = d.params.num_macro_users;   // J = 0
    alloc.ia_channels = {0};
    alloc.ia_users = d.group.users;
    CHECK_THROWS_AS(ia::subset_search(alloc, d.realization, d.topology, d.params, 0.05,
                                      ia::Mode::Mmse),
                    std::invalid_argument);
    alloc.trade_off_A = 0;
    alloc.ia_channels = {0, 1};   // needs J + 1 = 3
    CHECK_THROWS_AS(ia::subset_search(alloc, d.realization, d.topology, d.params, 0.05,
                                      ia::Mode::Mmse),
                    std::invalid_argument);
    alloc.ia_channels = {0, 1, 2};
    alloc.ia_users[1] = {0};      // fewer than J candidates in one cell
    CHECK_THROWS_AS(ia::subset_search(alloc, d.realization, d.topology, d.params, 0.05,
                                      ia::Mode::Mmse),
                    std::invalid_argument);
}
