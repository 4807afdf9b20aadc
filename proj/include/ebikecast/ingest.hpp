#pragma once

// CSV readers and writers for every schema the pipeline touches.
//
// All readers accept LF or CRLF line endings and validate header names
// case-insensitively (the source files are hand-made). Row order in a file
// is irrelevant; returned collections are sorted by time key. Every
// malformed input maps to a typed Error, never a silent default.
//
// Writers emit LF and render doubles with the shortest representation that
// round-trips, so re-reading a file reproduces the written values exactly
// and repeated runs produce byte-identical output.

#include <filesystem>
#include <string>

#include "ebikecast/factors.hpp"
#include "ebikecast/monthly.hpp"

namespace ebikecast::ingest {

/// `Month,Frequency` rows `YYYY-MM,int` with frequencies in 0..100;
/// every represented year must have all 12 months.
TrendTable read_trends(const std::filesystem::path& path);

/// `Year,Sales` rows; sales are annual unit counts in thousands, >= 0.
AnnualSeries read_annual(const std::filesystem::path& path);

/// `Month,Sales` rows `YYYY-MM,<decimal>`; months must be contiguous.
MonthlySeries read_monthly(const std::filesystem::path& path);

/// Inverse of read_monthly. The series must be nonempty.
void write_monthly(const MonthlySeries& series, const std::filesystem::path& path);

/// `Year,Sales`, the annual summary schema.
void write_annual(const AnnualSeries& series, const std::filesystem::path& path);

/// `Year,<4 feature columns>,Sales`; feature names are taken from the
/// header. One row per year, sorted by year on return.
FactorTable read_factors(const std::filesystem::path& path);

/// Shortest decimal representation of v that parses back to exactly v.
std::string format_double(double v);

}  // namespace ebikecast::ingest
