// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "femtoslice/experiment.hpp"

// CSV emission.  Locale-independent: '.' decimal separator, 12 significant
// digits, identical bytes for identical inputs.

namespace femtoslice::cli {
struct OmfcRow {
    double snr_db = 0.0;
    int trials = 0;
    double mean_sum_rate = 0.0;
    double std_err = 0.0;
};
} // namespace femtoslice::cli

namespace femtoslice::csv {

/// 12 significant digits through std::to_chars; never locale-dependent.
std::string format_number(double v);

void write_sweep(std::ostream& out, const std::vector<experiment::SweepRecord>& records);
void write_per_trial(std::ostream& out,
                     const std::vector<experiment::PerTrialRecord>& records);
void write_curve(std::ostream& out, const std::vector<experiment::CurvePoint>& points);
void write_omfc(std::ostream& out, const std::vector<cli::OmfcRow>& rows);

} // namespace femtoslice::csv
