// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "femtoslice/rng.hpp"

// Two-tier OFDMA downlink scene: one macro BS and two closed femto BSs
// share all sub-channels.  Serving links run under perfect power control;
// cross-tier links keep their distance-dependent loss plus one wall.

namespace femtoslice::channel {

using cx = std::complex<double>;

enum class Cell : int { Macro = 0, Femto1 = 1, Femto2 = 2 };
inline constexpr int kNumCells = 3;
inline constexpr std::array<Cell, 3> kCells{Cell::Macro, Cell::Femto1, Cell::Femto2};

struct SystemParams {
    int num_macro_users = 5;
    int num_femto_users = 5;    // per femtocell
    int num_subchannels = 6;

    double tx_power_macro = 1.0;
    double tx_power_femto1 = 1.0;
    double tx_power_femto2 = 1.0;

    double pathloss_exponent = 2.0;
    double penetration_gain = 0.1;     // linear; -10 dB wall loss
    double d0_outdoor_m = 100.0;
    double d0_indoor_m = 5.0;
    double carrier_hz = 2.0e9;

    double macro_radius_m = 500.0;
    double femto_radius_m = 10.0;
    double min_bs_user_distance_outdoor_m = 100.0;
    double min_bs_user_distance_indoor_m = 5.0;

    std::vector<double> snr_db_grid{10, 20, 30, 40, 50, 60, 70, 80};
    int trials = 1000;
    std::uint64_t master_seed = 1;
    int ia_iterations = 5;

    int users_in(Cell c) const {
        return c == Cell::Macro ? num_macro_users : num_femto_users;
    }
    double tx_power(Cell c) const;

    /// Throws ConfigError naming the violated constraint.
    void validate() const;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

/// Reference gain of the d0-normalized free-space model: (c / (4 pi f d0))^2.
double pathloss_k_factor(double carrier_hz, double d0_m);

/// K * r^-alpha.
double pathloss_gain(double k_factor, double r_m, double alpha);

struct Topology {
    std::array<Point2, 3> bs_position{};                      // macro BS at origin
    std::array<std::vector<Point2>, 3> user_position{};       // [cell][user]
    // Indexed [tx cell][rx cell][user of rx cell].
    std::array<std::array<std::vector<double>, 3>, 3> distance_m{};
    // zeta: K-factor (transmitter class) * r^-alpha, with the wall
    // penetration folded in once on every cross-cell link.
    std::array<std::array<std::vector<double>, 3>, 3> pathloss_gain{};
};

/// Rejection-samples the layout: femto BS pair jointly redrawn until their
/// separation reaches 2 * femto_radius, users drawn exactly in the annulus
/// between the class minimum distance and the cell radius.  Throws
/// TopologySamplingError after tol::kTopologyMaxAttempts rejections.
Topology sample_topology(const SystemParams& params, RngStream& rng);

struct ChannelRealization {
    int num_subchannels = 0;
    // [tx cell][rx cell] -> flattened [user][subchannel], i.i.d. CN(0,1).
    std::array<std::array<std::vector<cx>, 3>, 3> h{};

    cx at(Cell tx, Cell rx, int user, int n) const {
        return h[static_cast<int>(tx)][static_cast<int>(rx)][user * num_subchannels + n];
    }
};

ChannelRealization sample_fading(const SystemParams& params, RngStream& rng);

struct PowerControl {
    // Serving-link amplification lambda = r^alpha / K; lambda * zeta = 1.
    std::array<std::vector<double>, 3> lambda{};

    static PowerControl from(const Topology& topology, const SystemParams& params);
    double at(Cell c, int user) const { return lambda[static_cast<int>(c)][user]; }
};

/// sigma^2 from the macro SNR definition snr = P_M / sigma^2.
double snr_to_noise(double snr_db, double tx_power_macro);

/// Received powers on sub-channel n when (macro_user, f1_user, f2_user) are
/// served simultaneously under power control.  interference[] holds the sum
/// of foreign-cell power at each victim; femto-femto terms are neglected.
struct TripletPowers {
    std::array<double, 3> desired{};       // indexed by victim cell
    std::array<double, 3> interference{};
};

TripletPowers received_powers(const Topology& topology, const PowerControl& pc,
                              const ChannelRealization& realization,
                              const SystemParams& params, int n, int macro_user,
                              int f1_user, int f2_user);

} // namespace femtoslice::channel
