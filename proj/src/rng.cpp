// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/rng.hpp"

#include <cmath>
#include <numbers>

namespace femtoslice {

namespace {

// splitmix64 finalizer; bijective with strong avalanche, which is what
// makes nearby tuples produce unrelated seeds.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t snr_index,
                          std::uint64_t trial, std::uint64_t attempt,
                          StreamPurpose purpose) {
    std::uint64_t h = mix(master_seed);
    h = mix(h ^ snr_index);
    h = mix(h ^ trial);
    h = mix(h ^ attempt);
    h = mix(h ^ static_cast<std::uint64_t>(purpose));
    return h;
}

double RngStream::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
}

std::pair<double, double> RngStream::gaussian_pair() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

std::complex<double> RngStream::complex_gaussian() {
    const auto [g1, g2] = gaussian_pair();
    return {g1 / std::numbers::sqrt2, g2 / std::numbers::sqrt2};
}

} // namespace femtoslice
