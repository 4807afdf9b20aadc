#include "ebikecast/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "ebikecast/error.hpp"

namespace ebikecast::ingest {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(errc::io_missing, "cannot open " + path.string());
    }
    CsvFile file;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            // Strip a UTF-8 BOM if present.
            if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF') {
                line.erase(0, 3);
            }
            file.header = split_csv_line(std::move(line));
            first = false;
            continue;
        }
        if (line.empty() || line == "\r") continue;
        file.rows.push_back(split_csv_line(std::move(line)));
    }
    if (first) {
        throw Error(errc::csv_schema, path.string() + ": missing header row");
    }
    return file;
}

void expect_columns(const CsvFile& file, std::initializer_list<const char*> names,
                    const std::filesystem::path& path) {
    if (file.header.size() != names.size()) {
        throw Error(errc::csv_schema,
                    path.string() + ": expected " + std::to_string(names.size()) +
                        " columns, found " + std::to_string(file.header.size()));
    }
    std::size_t i = 0;
    for (const char* name : names) {
        if (lower(file.header[i]) != lower(name)) {
            throw Error(errc::csv_schema, path.string() + ": column " + std::to_string(i + 1) +
                                              " should be '" + name + "', found '" +
                                              file.header[i] + "'");
        }
        ++i;
    }
}

double parse_double(const std::string& cell, const std::filesystem::path& path) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end || cell.empty()) {
        throw Error(errc::csv_format, path.string() + ": non-numeric cell '" + cell + "'");
    }
    return v;
}

long parse_int(const std::string& cell, const std::filesystem::path& path) {
    long v = 0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || cell.empty()) {
        throw Error(errc::csv_format, path.string() + ": non-integer cell '" + cell + "'");
    }
    return v;
}

void expect_cells(const std::vector<std::string>& row, std::size_t n,
                  const std::filesystem::path& path) {
    if (row.size() != n) {
        throw Error(errc::csv_format, path.string() + ": row has " + std::to_string(row.size()) +
                                          " cells, expected " + std::to_string(n));
    }
}

}  // namespace

TrendTable read_trends(const std::filesystem::path& path) {
    CsvFile file = read_csv(path);
    expect_columns(file, {"Month", "Frequency"}, path);
    std::vector<std::pair<MonthKey, int>> rows;
    rows.reserve(file.rows.size());
    for (const auto& row : file.rows) {
        expect_cells(row, 2, path);
        const long freq = parse_int(row[1], path);
        if (freq < 0 || freq > 100) {
            throw Error(errc::bad_value,
                        path.string() + ": frequency out of range: " + row[1]);
        }
        rows.emplace_back(MonthKey::parse(row[0]), static_cast<int>(freq));
    }
    return TrendTable::from_rows(std::move(rows));
}

AnnualSeries read_annual(const std::filesystem::path& path) {
    CsvFile file = read_csv(path);
    expect_columns(file, {"Year", "Sales"}, path);
    std::vector<std::pair<int, double>> rows;
    rows.reserve(file.rows.size());
    for (const auto& row : file.rows) {
        expect_cells(row, 2, path);
        rows.emplace_back(static_cast<int>(parse_int(row[0], path)), parse_double(row[1], path));
    }
    return AnnualSeries::from_rows(std::move(rows));
}

MonthlySeries read_monthly(const std::filesystem::path& path) {
    CsvFile file = read_csv(path);
    expect_columns(file, {"Month", "Sales"}, path);
    std::vector<std::pair<MonthKey, double>> rows;
    rows.reserve(file.rows.size());
    for (const auto& row : file.rows) {
        expect_cells(row, 2, path);
        rows.emplace_back(MonthKey::parse(row[0]), parse_double(row[1], path));
    }
    return MonthlySeries::from_rows(std::move(rows));
}

void write_monthly(const MonthlySeries& series, const std::filesystem::path& path) {
    if (series.empty()) {
        throw Error(errc::precondition, "refusing to write an empty monthly series");
    }
    std::ostringstream out;
    out << "Month,Sales\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.key(i).str() << ',' << format_double(series[i]) << '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << out.str())) {
        throw Error(errc::io_write, "cannot write " + path.string());
    }
}

void write_annual(const AnnualSeries& series, const std::filesystem::path& path) {
    if (series.empty()) {
        throw Error(errc::precondition, "refusing to write an empty annual series");
    }
    std::ostringstream out;
    out << "Year,Sales\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.year(i) << ',' << format_double(series.value(i)) << '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << out.str())) {
        throw Error(errc::io_write, "cannot write " + path.string());
    }
}

FactorTable read_factors(const std::filesystem::path& path) {
    CsvFile file = read_csv(path);
    if (file.header.size() != 6) {
        throw Error(errc::csv_schema,
                    path.string() + ": expected Year, 4 feature columns and Sales; found " +
                        std::to_string(file.header.size()) + " columns");
    }
    if (lower(file.header.front()) != "year" || lower(file.header.back()) != "sales") {
        throw Error(errc::csv_schema,
                    path.string() + ": first column must be Year and last column Sales");
    }
    std::vector<std::string> feature_names(file.header.begin() + 1, file.header.end() - 1);

    struct Row {
        int year;
        double features[4];
        double target;
    };
    std::vector<Row> parsed;
    parsed.reserve(file.rows.size());
    for (const auto& row : file.rows) {
        expect_cells(row, 6, path);
        Row r{};
        r.year = static_cast<int>(parse_int(row[0], path));
        for (std::size_t c = 0; c < 4; ++c) r.features[c] = parse_double(row[c + 1], path);
        r.target = parse_double(row[5], path);
        parsed.push_back(r);
    }
    std::sort(parsed.begin(), parsed.end(), [](const Row& a, const Row& b) {
        return a.year < b.year;
    });
    std::vector<int> years;
    std::vector<double> features;
    std::vector<double> target;
    for (const Row& r : parsed) {
        if (!years.empty() && years.back() == r.year) {
            throw Error(errc::bad_value,
                        path.string() + ": duplicate year " + std::to_string(r.year));
        }
        years.push_back(r.year);
        features.insert(features.end(), std::begin(r.features), std::end(r.features));
        target.push_back(r.target);
    }
    return FactorTable(std::move(years), std::move(feature_names), std::move(features),
                       std::move(target));
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace ebikecast::ingest
