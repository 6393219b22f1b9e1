// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/csv.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>

#include "femtoslice/config.hpp"

namespace femtoslice::csv {

std::string format_number(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, res.ptr);
}

void write_sweep(std::ostream& out, const std::vector<experiment::SweepRecord>& records) {
    std::vector<experiment::SweepRecord> rows = records;
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
        return a.trade_off_A < b.trade_off_A;
    });
    out << "snr_db,trade_off_A,ia_mode,trials,mean_sum_rate,std_err,mean_ora_part,"
           "mean_ia_part\n";
    for (const auto& r : rows) {
        out << format_number(r.snr_db) << ',' << r.trade_off_A << ','
            << cli::mode_name(r.ia_mode) << ',' << r.trials << ','
            << format_number(r.mean_sum_rate) << ',' << format_number(r.std_err) << ','
            << format_number(r.mean_ora_part) << ',' << format_number(r.mean_ia_part)
            << '\n';
    }
}

void write_per_trial(std::ostream& out,
                     const std::vector<experiment::PerTrialRecord>& records) {
    std::vector<experiment::PerTrialRecord> rows = records;
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
        if (a.trade_off_A != b.trade_off_A) return a.trade_off_A < b.trade_off_A;
        return a.trial < b.trial;
    });
    out << "snr_db,trade_off_A,trial,sum_rate,ora_part,ia_part,resamples\n";
    for (const auto& r : rows) {
        out << format_number(r.snr_db) << ',' << r.trade_off_A << ',' << r.trial << ','
            << format_number(r.sum_rate) << ',' << format_number(r.ora_part) << ','
            << format_number(r.ia_part) << ',' << r.resamples << '\n';
    }
}

void write_curve(std::ostream& out, const std::vector<experiment::CurvePoint>& points) {
    std::vector<experiment::CurvePoint> rows = points;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.snr_db < b.snr_db; });
    out << "snr_db,optimal_A,best_mean_sum_rate,omfc_mean_sum_rate\n";
    for (const auto& r : rows) {
        out << format_number(r.snr_db) << ',' << r.optimal_A << ','
            << format_number(r.best_mean_sum_rate) << ','
            << format_number(r.omfc_mean_sum_rate) << '\n';
    }
}

void write_omfc(std::ostream& out, const std::vector<cli::OmfcRow>& rows_in) {
    std::vector<cli::OmfcRow> rows = rows_in;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.snr_db < b.snr_db; });
    out << "snr_db,trials,mean_sum_rate,std_err\n";
    for (const auto& r : rows) {
        out << format_number(r.snr_db) << ',' << r.trials << ','
            << format_number(r.mean_sum_rate) << ',' << format_number(r.std_err) << '\n';
    }
}

} // namespace femtoslice::csv
