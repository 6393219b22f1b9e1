// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace femtoslice::selftest {

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    bool passed() const { return failures == 0; }
};

SuiteResult run_numerics_suite();
/// perturbation is a debug hook: it is added to one precoder entry so a
/// negative control can prove the suite actually detects damage.
SuiteResult run_unitarity_suite(double perturbation = 0.0);
SuiteResult run_alignment_suite();
SuiteResult run_zf_diagonality_suite();
SuiteResult run_power_control_suite();
SuiteResult run_desk_oracle_suite();

/// Runs every suite, one "pass"/"FAIL" line each; true when all pass.
bool run_all(std::ostream& log);

} // namespace femtoslice::selftest
