#pragma once

// Time-keyed containers shared by every stage of the pipeline.
//
// MonthlySeries is the universal currency: a gapless run of calendar months
// with one finite value each. Contiguity is enforced structurally (first key
// plus a dense value vector), so consumers never re-validate it.

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ebikecast {

struct MonthKey {
    int year = 0;
    int month = 1;  // 1..12

    auto operator<=>(const MonthKey&) const = default;

    MonthKey next() const {
        return month == 12 ? MonthKey{year + 1, 1} : MonthKey{year, month + 1};
    }

    /// Months elapsed since January year 0; the total order as an integer.
    long index() const { return static_cast<long>(year) * 12 + (month - 1); }

    static MonthKey from_index(long idx) {
        return MonthKey{static_cast<int>(idx / 12), static_cast<int>(idx % 12) + 1};
    }

    /// "YYYY-MM".
    std::string str() const;

    /// Parses "YYYY-MM"; throws Error{csv_format} on malformed text and
    /// Error{bad_value} when the month lies outside 1..12.
    static MonthKey parse(const std::string& text);
};

class MonthlySeries {
public:
    MonthlySeries() = default;

    /// Builds from (key, value) rows in any order. Sorts, then rejects
    /// duplicate months, calendar gaps, and non-finite values.
    static MonthlySeries from_rows(std::vector<std::pair<MonthKey, double>> rows);

    /// Contiguous-by-construction variant; values must all be finite.
    MonthlySeries(MonthKey first, std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    MonthKey first_key() const { return first_; }
    MonthKey last_key() const;
    MonthKey key(std::size_t i) const;

    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    bool contains(MonthKey k) const;
    double at(MonthKey k) const;  // throws Error{bad_value} if absent

private:
    MonthKey first_{};
    std::vector<double> values_;
};

/// Year-keyed series; strictly increasing years, gaps allowed.
class AnnualSeries {
public:
    AnnualSeries() = default;

    /// Sorts rows by year; rejects duplicates and non-finite or negative
    /// values (sales counts cannot be negative).
    static AnnualSeries from_rows(std::vector<std::pair<int, double>> rows);

    std::size_t size() const { return years_.size(); }
    bool empty() const { return years_.empty(); }

    int year(std::size_t i) const { return years_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    std::span<const int> years() const { return years_; }
    std::span<const double> values() const { return values_; }

    bool contains(int year) const;
    double at(int year) const;  // throws Error{bad_value} if absent

private:
    std::vector<int> years_;
    std::vector<double> values_;
};

/// Relative search frequencies, 0..100, every represented year complete.
class TrendTable {
public:
    TrendTable() = default;

    /// Validates range, duplicates, and 12-month completeness per year.
    static TrendTable from_rows(std::vector<std::pair<MonthKey, int>> rows);

    std::size_t year_count() const { return years_.size(); }
    std::span<const int> years() const { return years_; }

    bool has_year(int year) const;

    /// The 12 frequencies of one year, January first.
    std::span<const int, 12> year_frequencies(int year) const;

    int frequency(MonthKey k) const;

private:
    std::vector<int> years_;
    std::vector<int> frequencies_;  // 12 per year, same order as years_
};

}  // namespace ebikecast
