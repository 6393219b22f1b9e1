// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace femtoslice {

// Matrix handed to invert() (or an internal solve) has no usable pivot.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

// Channel realization is too degenerate to align against (rank-deficient
// cross channel, projector without a unit eigenvalue, ...).
class DegenerateChannelError : public std::runtime_error {
public:
    explicit DegenerateChannelError(const std::string& what) : std::runtime_error(what) {}
};

// Rejection sampling for the node layout exceeded its attempt budget.
class TopologySamplingError : public std::runtime_error {
public:
    explicit TopologySamplingError(const std::string& what) : std::runtime_error(what) {}
};

// Bad key, bad value, or violated invariant in a run configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace femtoslice
