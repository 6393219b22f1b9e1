// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>

namespace femtoslice {

/**
 * Purpose tag for a derived random stream.  Keeping layout and fading on
 * separate streams means a change to one sampler never shifts the draws
 * of the other.
 */
enum class StreamPurpose : std::uint64_t {
    Topology = 1,
    Fading = 2,
};

/**
 * Stateless seed derivation: one master seed fans out to an independent
 * sub-stream per (snr point, trial, resample attempt, purpose).  The same
 * tuple always yields the same stream, no matter which worker thread asks,
 * and the tuple deliberately excludes the trade-off number so every A value
 * sees identical fading within a trial (paired comparisons).
 */
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t snr_index,
                          std::uint64_t trial, std::uint64_t attempt,
                          StreamPurpose purpose);

/** A seeded draw stream with the handful of variates the model needs. */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1), 53 usable bits.
    double uniform();
    /// Uniform double in (0, 1]; safe to pass through log().
    double uniform_pos();
    /// Two independent standard normals (Box-Muller).
    std::pair<double, double> gaussian_pair();
    /// Unit-variance circularly symmetric complex Gaussian: (g1 + i g2)/sqrt(2).
    std::complex<double> complex_gaussian();

private:
    std::mt19937_64 eng_;
};

} // namespace femtoslice
