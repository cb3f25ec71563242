#pragma once

#include <optional>
#include <string>
#include <vector>

#include <lorasat/sim.hpp>

namespace lorasat {

// One emitted row: all swept axes plus the measured point. The column set
// and order are stable; see csv_header().
struct ResultRow {
    std::string estimator;
    int sf = 0;
    double bandwidth_hz = 0.0;
    bool ldro = false;
    int oversampling = 1;
    std::string profile;          // zero | static | linear-ramp | leo-pass
    double t_start_s = 0.0;
    std::optional<double> esn0_db;
    std::optional<double> snr_db;
    std::uint32_t payload_bits = 0;
    int coding_rate = 1;
    int n_up = 8;
    int n_dw = 2;
    int n_int = 0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    std::uint64_t totals = 0;
    double ser = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
    std::string status;           // "ok" or the per-cell error message
};

ResultRow make_result_row(const SweepCell& cell, const CellResult& result);

// CSV: header row, comma separated, '.' decimal, UTF-8, LF endings.
std::string csv_header();
std::string to_csv_line(const ResultRow& row);
std::string to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(const std::string& text); // round-trip of to_csv

std::string to_json(const std::vector<ResultRow>& rows);

// Deterministic double formatting shared by every emitter ('.' decimal,
// shortest-ish %.12g, locale independent).
std::string format_double(double v);

// Static SVG of SER vs Es/N0, one panel per SF, one polyline per estimator
// (log-scaled y). Purely a view of the rows; emitting it never changes them.
std::string ser_curves_svg(const std::vector<ResultRow>& rows);

// Static SVG of a Doppler profile: shift and rate against time on two axes.
struct DopplerSample {
    double t_s;
    double shift_hz;
    double rate_hz_per_s;
};
std::string doppler_profile_csv(const std::vector<DopplerSample>& samples);
std::string doppler_profile_svg(const std::vector<DopplerSample>& samples);

} // namespace lorasat
