#pragma once

#include <string>

#include "bqke/obstruction.hpp"

namespace bqke {

// Serialization shared by the CLI and the test suites.  Exact values are
// strings ("p/q" for rationals, "[N; c0, c1, ...]" otherwise); floats are
// fixed-notation decimal strings at the requested significance so that
// machine-readable output never passes through binary floating point.
struct ReportFormat {
    long digits = 30;
};

std::string format_embedded(const Cyclo& value, long digits);         // real part
std::string format_embedded_im(const Cyclo& value, long digits);      // imaginary part

std::string report_to_json(const ObstructionReport& rep, const ReportFormat& fmt);
std::string report_to_csv(const ObstructionReport& rep, const ReportFormat& fmt);
std::string report_to_text(const ObstructionReport& rep, const ReportFormat& fmt);

// One scan row: order, phi(0,0), exact C, float C, verdict.
std::string scan_csv_header();
std::string scan_csv_row(const ObstructionReport& rep, const ReportFormat& fmt);

}  // namespace bqke
