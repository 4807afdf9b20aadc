#include "ebikecast/monthly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "ebikecast/error.hpp"

namespace ebikecast {

std::string MonthKey::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

MonthKey MonthKey::parse(const std::string& text) {
    // YYYY-MM with a 4-digit year; the dash position is fixed.
    if (text.size() != 7 || text[4] != '-') {
        throw Error(errc::csv_format, "invalid month key '" + text + "' (want YYYY-MM)");
    }
    int y = 0;
    int m = 0;
    auto ry = std::from_chars(text.data(), text.data() + 4, y);
    auto rm = std::from_chars(text.data() + 5, text.data() + 7, m);
    if (ry.ec != std::errc{} || ry.ptr != text.data() + 4 || rm.ec != std::errc{} ||
        rm.ptr != text.data() + 7) {
        throw Error(errc::csv_format, "invalid month key '" + text + "' (want YYYY-MM)");
    }
    if (m < 1 || m > 12) {
        throw Error(errc::bad_value, "invalid month " + std::to_string(m) + " in '" + text + "'");
    }
    return MonthKey{y, m};
}

MonthlySeries MonthlySeries::from_rows(std::vector<std::pair<MonthKey, double>> rows) {
    if (rows.empty()) return {};
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> values;
    values.reserve(rows.size());
    MonthKey expected = rows.front().first;
    for (const auto& [key, value] : rows) {
        if (key < expected) {
            throw Error(errc::bad_value, "duplicate month " + key.str());
        }
        if (expected < key) {
            throw Error(errc::bad_value, "missing month " + expected.str());
        }
        if (!std::isfinite(value)) {
            throw Error(errc::bad_value, "non-finite value at " + key.str());
        }
        values.push_back(value);
        expected = key.next();
    }
    return MonthlySeries(rows.front().first, std::move(values));
}

MonthlySeries::MonthlySeries(MonthKey first, std::vector<double> values)
    : first_(first), values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(errc::bad_value, "non-finite series value");
    }
}

MonthKey MonthlySeries::last_key() const { return key(values_.size() - 1); }

MonthKey MonthlySeries::key(std::size_t i) const {
    return MonthKey::from_index(first_.index() + static_cast<long>(i));
}

bool MonthlySeries::contains(MonthKey k) const {
    if (empty()) return false;
    return first_ <= k && k <= last_key();
}

double MonthlySeries::at(MonthKey k) const {
    if (!contains(k)) throw Error(errc::bad_value, "month " + k.str() + " not in series");
    return values_[static_cast<std::size_t>(k.index() - first_.index())];
}

AnnualSeries AnnualSeries::from_rows(std::vector<std::pair<int, double>> rows) {
    std::sort(rows.begin(), rows.end());
    AnnualSeries out;
    out.years_.reserve(rows.size());
    out.values_.reserve(rows.size());
    for (const auto& [year, value] : rows) {
        if (!out.years_.empty() && out.years_.back() == year) {
            throw Error(errc::bad_value, "duplicate year " + std::to_string(year));
        }
        if (!std::isfinite(value)) {
            throw Error(errc::bad_value, "non-finite value for year " + std::to_string(year));
        }
        if (value < 0.0) {
            throw Error(errc::bad_value, "negative sales for year " + std::to_string(year));
        }
        out.years_.push_back(year);
        out.values_.push_back(value);
    }
    return out;
}

bool AnnualSeries::contains(int year) const {
    return std::binary_search(years_.begin(), years_.end(), year);
}

double AnnualSeries::at(int year) const {
    auto it = std::lower_bound(years_.begin(), years_.end(), year);
    if (it == years_.end() || *it != year) {
        throw Error(errc::bad_value, "year " + std::to_string(year) + " not in series");
    }
    return values_[static_cast<std::size_t>(it - years_.begin())];
}

TrendTable TrendTable::from_rows(std::vector<std::pair<MonthKey, int>> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    TrendTable out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [key, freq] = rows[i];
        if (i > 0 && rows[i - 1].first == key) {
            throw Error(errc::bad_value, "duplicate month " + key.str());
        }
        if (freq < 0 || freq > 100) {
            throw Error(errc::bad_value,
                        "frequency out of range at " + key.str() + ": " + std::to_string(freq));
        }
    }
    // Years must be complete: 12 rows, months 1..12.
    std::size_t i = 0;
    while (i < rows.size()) {
        const int year = rows[i].first.year;
        std::size_t j = i;
        while (j < rows.size() && rows[j].first.year == year) ++j;
        if (j - i != 12) {
            throw Error(errc::bad_value,
                        "year " + std::to_string(year) + " has " + std::to_string(j - i) +
                            " months, expected 12");
        }
        out.years_.push_back(year);
        for (std::size_t k = i; k < j; ++k) out.frequencies_.push_back(rows[k].second);
        i = j;
    }
    return out;
}

bool TrendTable::has_year(int year) const {
    return std::binary_search(years_.begin(), years_.end(), year);
}

std::span<const int, 12> TrendTable::year_frequencies(int year) const {
    auto it = std::lower_bound(years_.begin(), years_.end(), year);
    if (it == years_.end() || *it != year) {
        throw Error(errc::bad_value, "year " + std::to_string(year) + " not in trend table");
    }
    const std::size_t offset = static_cast<std::size_t>(it - years_.begin()) * 12;
    return std::span<const int, 12>(frequencies_.data() + offset, 12);
}

int TrendTable::frequency(MonthKey k) const {
    return year_frequencies(k.year)[static_cast<std::size_t>(k.month - 1)];
}

}  // namespace ebikecast
