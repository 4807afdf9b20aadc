#pragma once

// Sales reconstruction: fill missing U.S. years by scaling European sales
// against a shared reference year, then split each annual total across its
// twelve months in proportion to search-trend frequency.

#include "ebikecast/monthly.hpp"

namespace ebikecast::prep {

struct MergeInputs {
    AnnualSeries european_annual;  // thousands of units
    double european_ref = 0.0;     // European sales in the reference year
    double us_ref = 0.0;           // U.S. sales in the reference year
    int ref_year = 2019;

    /// Pulls both reference values out of the source series.
    static MergeInputs from_series(const AnnualSeries& european, const AnnualSeries& us_known,
                                   int ref_year);
};

/// U.S. estimate for one year: us_ref * (eu_year / eu_ref).
/// eu_ref_sales must be > 0; all inputs finite and >= 0.
double us_from_european(double eu_year_sales, double eu_ref_sales, double us_ref_sales);

/// Known U.S. value when present, scaled European value otherwise, for every
/// year in the union of both ranges. The result must be contiguous: a year
/// inside the span covered by neither source is an error.
AnnualSeries merge_series(const MergeInputs& inputs, const AnnualSeries& known_us);

/// month value = annual[year] * freq[month] / sum of that year's frequencies.
/// Every year of `annual` needs a complete trend year whose frequencies are
/// not all zero. Each year's twelve outputs sum to the annual input.
MonthlySeries disaggregate(const AnnualSeries& annual, const TrendTable& trends);

}  // namespace ebikecast::prep
