// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "femtoslice/errors.hpp"
#include "femtoslice/tolerances.hpp"

namespace femtoslice::channel {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

Point2 uniform_in_disc(const Point2& center, double radius, RngStream& rng) {
    const double r = radius * std::sqrt(rng.uniform());
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    return {center.x + r * std::cos(t), center.y + r * std::sin(t)};
}

// Uniform over the annulus r_min <= r <= r_max via the inverse CDF of r^2;
// no rejection, so the draw count per user is fixed.
Point2 uniform_in_annulus(const Point2& center, double r_min, double r_max,
                          RngStream& rng) {
    const double u = rng.uniform();
    const double r = std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    return {center.x + r * std::cos(t), center.y + r * std::sin(t)};
}

bool is_macro(Cell c) { return c == Cell::Macro; }

} // namespace

double SystemParams::tx_power(Cell c) const {
    switch (c) {
        case Cell::Macro: return tx_power_macro;
        case Cell::Femto1: return tx_power_femto1;
        case Cell::Femto2: return tx_power_femto2;
    }
    return 0.0;
}

void SystemParams::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (num_macro_users < 1) fail("num_macro_users must be at least 1");
    if (num_femto_users < 1) fail("num_femto_users must be at least 1");
    const int needed = std::max(num_macro_users, num_femto_users) + 1;
    if (num_subchannels < needed) {
        fail("num_subchannels must be at least max(users per cell) + 1");
    }
    if (tx_power_macro <= 0 || tx_power_femto1 <= 0 || tx_power_femto2 <= 0) {
        fail("transmit powers must be positive");
    }
    if (pathloss_exponent < 1.0) fail("pathloss_exponent must be at least 1");
    if (!(penetration_gain > 0.0) || penetration_gain > 1.0) {
        fail("penetration_gain must lie in (0, 1]");
    }
    if (d0_outdoor_m <= 0 || d0_indoor_m <= 0) fail("reference distances must be positive");
    if (carrier_hz <= 0) fail("carrier_hz must be positive");
    if (macro_radius_m <= 0 || femto_radius_m <= 0) fail("cell radii must be positive");
    if (min_bs_user_distance_outdoor_m <= 0 || min_bs_user_distance_indoor_m <= 0) {
        fail("minimum BS-user distances must be positive");
    }
    if (min_bs_user_distance_outdoor_m >= macro_radius_m) {
        fail("outdoor minimum distance must be smaller than macro_radius_m");
    }
    if (min_bs_user_distance_indoor_m >= femto_radius_m) {
        fail("indoor minimum distance must be smaller than femto_radius_m");
    }
    if (snr_db_grid.empty()) fail("snr_db_grid must not be empty");
    if (trials < 1) fail("trials must be at least 1");
    if (ia_iterations < 0) fail("ia_iterations must be non-negative");
}

double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double pathloss_k_factor(double carrier_hz, double d0_m) {
    const double v = kSpeedOfLight / (4.0 * std::numbers::pi * carrier_hz * d0_m);
    return v * v;
}

double pathloss_gain(double k_factor, double r_m, double alpha) {
    return k_factor * std::pow(r_m, -alpha);
}

Topology sample_topology(const SystemParams& params, RngStream& rng) {
    Topology t;
    t.bs_position[0] = {0.0, 0.0};

    // Femto BS pair: joint redraw keeps the accepted pair uniform over the
    // constrained region rather than biased toward the first placement.
    bool placed = false;
    for (int attempt = 0; attempt < tol::kTopologyMaxAttempts; ++attempt) {
        const Point2 p1 = uniform_in_disc(t.bs_position[0], params.macro_radius_m, rng);
        const Point2 p2 = uniform_in_disc(t.bs_position[0], params.macro_radius_m, rng);
        if (distance(p1, p2) >= 2.0 * params.femto_radius_m) {
            t.bs_position[1] = p1;
            t.bs_position[2] = p2;
            placed = true;
            break;
        }
    }
    if (!placed) {
        throw TopologySamplingError("femto BS separation constraint never satisfied");
    }

    for (Cell c : kCells) {
        const int ci = static_cast<int>(c);
        const double r_min = is_macro(c) ? params.min_bs_user_distance_outdoor_m
                                         : params.min_bs_user_distance_indoor_m;
        const double r_max = is_macro(c) ? params.macro_radius_m : params.femto_radius_m;
        const int count = params.users_in(c);
        t.user_position[ci].reserve(count);
        for (int u = 0; u < count; ++u) {
            t.user_position[ci].push_back(
                uniform_in_annulus(t.bs_position[ci], r_min, r_max, rng));
        }
    }

    for (Cell tx : kCells) {
        const int ti = static_cast<int>(tx);
        const double d0 = is_macro(tx) ? params.d0_outdoor_m : params.d0_indoor_m;
        const double k = pathloss_k_factor(params.carrier_hz, d0);
        for (Cell rx : kCells) {
            const int ri = static_cast<int>(rx);
            const int count = params.users_in(rx);
            t.distance_m[ti][ri].resize(count);
            t.pathloss_gain[ti][ri].resize(count);
            for (int u = 0; u < count; ++u) {
                const double r = distance(t.bs_position[ti], t.user_position[ri][u]);
                double zeta = pathloss_gain(k, r, params.pathloss_exponent);
                if (tx != rx) zeta *= params.penetration_gain;  // one wall per cross link
                t.distance_m[ti][ri][u] = r;
                t.pathloss_gain[ti][ri][u] = zeta;
            }
        }
    }
    return t;
}

ChannelRealization sample_fading(const SystemParams& params, RngStream& rng) {
    ChannelRealization cr;
    cr.num_subchannels = params.num_subchannels;
    for (Cell tx : kCells) {
        for (Cell rx : kCells) {
            const int count = params.users_in(rx);
            auto& block = cr.h[static_cast<int>(tx)][static_cast<int>(rx)];
            block.resize(static_cast<std::size_t>(count) * params.num_subchannels);
            for (cx& v : block) v = rng.complex_gaussian();
        }
    }
    return cr;
}

PowerControl PowerControl::from(const Topology& topology, const SystemParams& params) {
    PowerControl pc;
    for (Cell c : kCells) {
        const int ci = static_cast<int>(c);
        const double d0 = is_macro(c) ? params.d0_outdoor_m : params.d0_indoor_m;
        const double k = pathloss_k_factor(params.carrier_hz, d0);
        const int count = params.users_in(c);
        pc.lambda[ci].resize(count);
        for (int u = 0; u < count; ++u) {
            pc.lambda[ci][u] =
                std::pow(topology.distance_m[ci][ci][u], params.pathloss_exponent) / k;
        }
    }
    return pc;
}

double snr_to_noise(double snr_db, double tx_power_macro) {
    return tx_power_macro * std::pow(10.0, -snr_db / 10.0);
}

TripletPowers received_powers(const Topology& topology, const PowerControl& pc,
                              const ChannelRealization& realization,
                              const SystemParams& params, int n, int macro_user,
                              int f1_user, int f2_user) {
    const std::array<int, 3> served{macro_user, f1_user, f2_user};
    TripletPowers out;
    for (Cell victim : kCells) {
        const int vi = static_cast<int>(victim);
        const int user = served[vi];
        // Serving link: power control cancels the path loss exactly.
        const double zeta_serv = topology.pathloss_gain[vi][vi][user];
        const double lam_serv = pc.at(victim, user);
        out.desired[vi] = params.tx_power(victim) * lam_serv * zeta_serv *
                          std::norm(realization.at(victim, victim, user, n));
        double interference = 0.0;
        for (Cell tx : kCells) {
            if (tx == victim) continue;
            // Femto-femto coupling is neglected in this model.
            if (tx != Cell::Macro && victim != Cell::Macro) continue;
            const int ti = static_cast<int>(tx);
            const double lam_foreign = pc.at(tx, served[ti]);
            interference += params.tx_power(tx) * lam_foreign *
                            topology.pathloss_gain[ti][vi][user] *
                            std::norm(realization.at(tx, victim, user, n));
        }
        out.interference[vi] = interference;
    }
    return out;
}

} // namespace femtoslice::channel
