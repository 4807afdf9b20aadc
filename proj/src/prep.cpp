#include "ebikecast/prep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebikecast/error.hpp"

namespace ebikecast::prep {

MergeInputs MergeInputs::from_series(const AnnualSeries& european, const AnnualSeries& us_known,
                                     int ref_year) {
    if (!european.contains(ref_year)) {
        throw Error(errc::precondition,
                    "reference year " + std::to_string(ref_year) + " missing from European data");
    }
    if (!us_known.contains(ref_year)) {
        throw Error(errc::precondition,
                    "reference year " + std::to_string(ref_year) + " missing from U.S. data");
    }
    MergeInputs inputs;
    inputs.european_annual = european;
    inputs.european_ref = european.at(ref_year);
    inputs.us_ref = us_known.at(ref_year);
    inputs.ref_year = ref_year;
    if (!(inputs.european_ref > 0.0)) {
        throw Error(errc::precondition, "European reference sales must be positive");
    }
    return inputs;
}

double us_from_european(double eu_year_sales, double eu_ref_sales, double us_ref_sales) {
    if (!(eu_ref_sales > 0.0)) {
        throw Error(errc::precondition, "European reference sales must be positive");
    }
    if (!std::isfinite(eu_year_sales) || eu_year_sales < 0.0 || !std::isfinite(us_ref_sales) ||
        us_ref_sales < 0.0) {
        throw Error(errc::precondition, "sales inputs must be finite and non-negative");
    }
    return us_ref_sales * (eu_year_sales / eu_ref_sales);
}

AnnualSeries merge_series(const MergeInputs& inputs, const AnnualSeries& known_us) {
    const AnnualSeries& eu = inputs.european_annual;
    if (eu.empty() && known_us.empty()) {
        throw Error(errc::precondition, "no source data to merge");
    }
    int first = std::numeric_limits<int>::max();
    int last = std::numeric_limits<int>::min();
    for (std::size_t i = 0; i < eu.size(); ++i) {
        first = std::min(first, eu.year(i));
        last = std::max(last, eu.year(i));
    }
    for (std::size_t i = 0; i < known_us.size(); ++i) {
        first = std::min(first, known_us.year(i));
        last = std::max(last, known_us.year(i));
    }
    std::vector<std::pair<int, double>> rows;
    rows.reserve(static_cast<std::size_t>(last - first + 1));
    for (int year = first; year <= last; ++year) {
        if (known_us.contains(year)) {
            rows.emplace_back(year, known_us.at(year));
        } else if (eu.contains(year)) {
            rows.emplace_back(year,
                              us_from_european(eu.at(year), inputs.european_ref, inputs.us_ref));
        } else {
            throw Error(errc::bad_value,
                        "year " + std::to_string(year) + " missing from both sources");
        }
    }
    return AnnualSeries::from_rows(std::move(rows));
}

MonthlySeries disaggregate(const AnnualSeries& annual, const TrendTable& trends) {
    if (annual.empty()) throw Error(errc::precondition, "no annual data to disaggregate");
    std::vector<std::pair<MonthKey, double>> rows;
    rows.reserve(annual.size() * 12);
    for (std::size_t i = 0; i < annual.size(); ++i) {
        const int year = annual.year(i);
        if (!trends.has_year(year)) {
            throw Error(errc::precondition,
                        "no trend data for year " + std::to_string(year));
        }
        const auto freqs = trends.year_frequencies(year);
        long total = 0;
        for (int f : freqs) total += f;
        if (total == 0) {
            throw Error(errc::degenerate,
                        "all trend frequencies are zero in year " + std::to_string(year));
        }
        const double annual_value = annual.value(i);
        for (int m = 0; m < 12; ++m) {
            const double proportion = static_cast<double>(freqs[m]) / static_cast<double>(total);
            rows.emplace_back(MonthKey{year, m + 1}, annual_value * proportion);
        }
    }
    return MonthlySeries::from_rows(std::move(rows));
}

}  // namespace ebikecast::prep
