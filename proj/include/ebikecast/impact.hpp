#pragma once

// Monte Carlo simulation of the active e-bike fleet's monthly CO2 savings
// and calories burned.
//
// Unit contract: the sales series is in thousands of units, so the fleet
// statistic T_b is in thousands of bikes. A trial's monthly value is
//   factor * T_b * d / 1000
// where factor is (E_car - E_bike) in g/mile for CO2 and C in cal/mile for
// calories, and d is miles/month. The /1000 converts g to kg (cal to kcal);
// the thousands scaling of the fleet is carried in the unit label and only
// multiplied out by the CLI reporter.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ebikecast/monthly.hpp"
#include "ebikecast/rng.hpp"

namespace ebikecast::impact {

/// Range rule: std ~= (max - min) / 4, for sources that only publish a range.
double approx_std(double minimum, double maximum);

struct StdApprox {
    double minimum = 0.0;
    double maximum = 0.0;

    double value() const { return approx_std(minimum, maximum); }
};

struct NormalParam {
    double mean = 0.0;
    double std = 0.0;
    std::string units;
    std::optional<double> lower_clip;  ///< clamp applied to draws when set

    double draw(Rng& rng) const;
};

enum class FleetStat { sum, mean };

struct SimSpec {
    NormalParam lifespan_months{48.0, 6.0, "months", 1.0};
    NormalParam miles_per_month{63.33, 12.02, "miles/month", 0.0};
    NormalParam car_emissions{431.2, 107.803, "g/mile", std::nullopt};
    NormalParam bike_emissions{9.01, 1.9308, "g/mile", std::nullopt};
    NormalParam cals_per_mile{21.0, 3.04, "cal/mile", std::nullopt};
    int trials = 100;
    FleetStat fleet_stat = FleetStat::sum;
    std::uint64_t seed = 42;

    void validate() const;
};

/// Bikes in service per month: trailing-window sum (default) or mean of
/// sales over the lifespan window, aligned to the window end. The leading
/// lifespan-1 months are trimmed.
MonthlySeries active_fleet(const MonthlySeries& sales, int lifespan_months, FleetStat stat);

/// Year-keyed aggregates. Unlike AnnualSeries these may be negative: a trial
/// that draws E_car < E_bike produces negative savings.
struct YearTotals {
    std::vector<int> years;     // ascending
    std::vector<double> values;

    std::size_t size() const { return years.size(); }
    bool contains(int year) const;
    double at(int year) const;
};

struct Trial {
    int lifespan_months = 0;
    double miles = 0.0;
    double factor = 0.0;  ///< emissions delta (g/mile) or calories (cal/mile)
    MonthlySeries monthly;
    YearTotals annual;    ///< trailing-12-month sums at each covered December
};

struct SimResult {
    std::vector<Trial> trials;
    std::string units;          ///< of the monthly values
    int negative_factor_trials = 0;  ///< draws where E_car < E_bike

    /// Years whose December (and the 11 months before it) every trial covers.
    std::vector<int> covered_years() const;
};

struct Summary {
    double mean = 0.0;
    double std = 0.0;            ///< sample std across trials, 0 when degenerate
    bool degenerate_std = false; ///< single trial: std undefined, reported 0
};

/// Per trial: draw lifespan, miles, car and bike emissions once; monthly
/// value = (E_car - E_bike) * fleet * miles / 1000. Trials run on streams
/// derived from (seed, trial index), so results do not depend on scheduling.
SimResult run_co2(const MonthlySeries& sales, const SimSpec& spec);

/// Same with the per-mile calorie draw in place of the emissions delta.
SimResult run_calories(const MonthlySeries& sales, const SimSpec& spec);

/// Cross-trial mean and sample std of one year's aggregate (throws if any
/// trial does not cover the year).
Summary summarize(const SimResult& result, int year);

}  // namespace ebikecast::impact
