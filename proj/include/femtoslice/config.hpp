// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "femtoslice/channel.hpp"
#include "femtoslice/ia.hpp"

// Flat key = value run configuration.  dB-valued keys end in _db and are
// converted to linear units exactly once, here at the boundary; everything
// downstream works in linear units.

namespace femtoslice::cli {

struct RunConfig {
    channel::SystemParams params;
    ia::Mode ia_mode = ia::Mode::Mmse;
};

/// "zf" | "mmse" | "mmse-iter"; ConfigError otherwise.
ia::Mode parse_mode(const std::string& text);
std::string mode_name(ia::Mode mode);

/// Applies one key to the config; ConfigError messages carry the key and,
/// when read from a file, "<file>:<line>".
void apply_key(RunConfig& config, const std::string& key, const std::string& value,
               const std::string& where);

/// Parses a whole key = value stream ('#' starts a comment).  Unknown keys,
/// malformed values and violated invariants all raise ConfigError.
void parse_config_stream(RunConfig& config, std::istream& in,
                         const std::string& filename);
void parse_config_file(RunConfig& config, const std::string& path);

/// Echoes every resolved key as "# key = value" lines, fixed order.
void echo_resolved(const RunConfig& config, std::ostream& out);

} // namespace femtoslice::cli
