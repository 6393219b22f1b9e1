// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "femtoslice/rng.hpp"

using namespace femtoslice;

TEST_CASE("seed derivation is deterministic and sensitive to every field") {
    const auto base = derive_seed(1, 2, 3, 0, StreamPurpose::Fading);
    CHECK(base == derive_seed(1, 2, 3, 0, StreamPurpose::Fading));

    std::set<std::uint64_t> seen{base};
    CHECK(seen.insert(derive_seed(2, 2, 3, 0, StreamPurpose::Fading)).second);
    CHECK(seen.insert(derive_seed(1, 3, 3, 0, StreamPurpose::Fading)).second);
    CHECK(seen.insert(derive_seed(1, 2, 4, 0, StreamPurpose::Fading)).second);
    CHECK(seen.insert(derive_seed(1, 2, 3, 1, StreamPurpose::Fading)).second);
    CHECK(seen.insert(derive_seed(1, 2, 3, 0, StreamPurpose::Topology)).second);
}

TEST_CASE("identical seeds give identical streams") {
    RngStream a(derive_seed(9, 0, 0, 0, StreamPurpose::Topology));
    RngStream b(derive_seed(9, 0, 0, 0, StreamPurpose::Topology));
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("uniform stays in the half-open unit interval") {
    RngStream rng(1234);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("positive uniform never returns zero") {
    RngStream rng(77);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_pos();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        CHECK(std::isfinite(std::log(u)));
    }
}

TEST_CASE("uniform sample moments match the flat density") {
    RngStream rng(2718);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        sum += u;
        sum2 += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sum2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("gaussian pair has standard moments and no cross correlation") {
    RngStream rng(31415);
    const int n = 200000;
    double m1 = 0, m2 = 0, v1 = 0, v2 = 0, cross = 0;
    for (int i = 0; i < n; ++i) {
        const auto [g1, g2] = rng.gaussian_pair();
        m1 += g1;
        m2 += g2;
        v1 += g1 * g1;
        v2 += g2 * g2;
        cross += g1 * g2;
    }
    CHECK(std::abs(m1 / n) < 0.01);
    CHECK(std::abs(m2 / n) < 0.01);
    CHECK(v1 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(v2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(cross / n) < 0.01);
}

TEST_CASE("complex gaussian is unit variance and circular") {
    RngStream rng(161803);
    const int n = 200000;
    double power = 0.0;
    std::complex<double> mean(0, 0);
    std::complex<double> pseudo(0, 0);   // E[h^2] = 0 under circular symmetry
    for (int i = 0; i < n; ++i) {
        const auto h = rng.complex_gaussian();
        power += std::norm(h);
        mean += h;
        pseudo += h * h;
    }
    CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(mean) / n < 0.01);
    CHECK(std::abs(pseudo) / n < 0.01);
}

TEST_CASE("distinct purposes give unrelated draws") {
    RngStream a(derive_seed(5, 1, 1, 0, StreamPurpose::Topology));
    RngStream b(derive_seed(5, 1, 1, 0, StreamPurpose::Fading));
    int equal = 0;
    for (int i = 0; i < 1000; ++i) {
        if (a.uniform() == b.uniform()) ++equal;
    }
    CHECK(equal == 0);
}
