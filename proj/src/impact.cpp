#include "ebikecast/impact.hpp"

#include <algorithm>
#include <cmath>

#include "ebikecast/error.hpp"
#include "ebikecast/kernels.hpp"
#include "ebikecast/series.hpp"

namespace ebikecast::impact {

double approx_std(double minimum, double maximum) {
    if (maximum < minimum) {
        throw Error(errc::precondition, "range rule requires max >= min");
    }
    return (maximum - minimum) / 4.0;
}

double NormalParam::draw(Rng& rng) const {
    double v = rng.normal(mean, std);
    if (lower_clip.has_value()) v = std::max(v, *lower_clip);
    return v;
}

void SimSpec::validate() const {
    for (const NormalParam* p : {&lifespan_months, &miles_per_month, &car_emissions,
                                 &bike_emissions, &cals_per_mile}) {
        if (!(p->mean > 0.0)) {
            throw Error(errc::precondition, "simulation means must be positive");
        }
        if (p->std < 0.0) {
            throw Error(errc::precondition, "simulation stds must be non-negative");
        }
    }
    if (trials < 1) throw Error(errc::precondition, "need at least one trial");
}

MonthlySeries active_fleet(const MonthlySeries& sales, int lifespan_months, FleetStat stat) {
    if (lifespan_months < 1) throw Error(errc::precondition, "lifespan must be >= 1 month");
    if (sales.size() < static_cast<std::size_t>(lifespan_months)) {
        throw Error(errc::precondition, "lifespan window exceeds the sales series");
    }
    const auto window = static_cast<std::size_t>(lifespan_months);
    auto values = series::rolling(sales.values(), window,
                                  stat == FleetStat::sum ? series::RollingStat::sum
                                                         : series::RollingStat::mean);
    return MonthlySeries(sales.key(window - 1), std::move(values));
}

bool YearTotals::contains(int year) const {
    return std::binary_search(years.begin(), years.end(), year);
}

double YearTotals::at(int year) const {
    auto it = std::lower_bound(years.begin(), years.end(), year);
    if (it == years.end() || *it != year) {
        throw Error(errc::precondition, "year " + std::to_string(year) + " not covered");
    }
    return values[static_cast<std::size_t>(it - years.begin())];
}

namespace {

// Trailing-12-month totals at each December the series fully covers.
YearTotals december_windows(const MonthlySeries& monthly) {
    YearTotals out;
    if (monthly.size() < 12) return out;
    const auto sums = series::rolling(monthly.values(), 12, series::RollingStat::sum);
    for (std::size_t i = 11; i < monthly.size(); ++i) {
        const MonthKey key = monthly.key(i);
        if (key.month == 12) {
            out.years.push_back(key.year);
            out.values.push_back(sums[i - 11]);
        }
    }
    return out;
}

SimResult run(const MonthlySeries& sales, const SimSpec& spec, bool calories) {
    spec.validate();
    if (sales.empty()) throw Error(errc::precondition, "empty sales series");

    SimResult result;
    result.units = calories ? "kcal/month (fleet in thousands)" : "kg/month (fleet in thousands)";
    result.trials.reserve(static_cast<std::size_t>(spec.trials));

    for (int t = 0; t < spec.trials; ++t) {
        Rng rng = Rng::derive(spec.seed, static_cast<std::uint64_t>(t));
        Trial trial;
        trial.lifespan_months =
            std::max(1, static_cast<int>(std::llround(spec.lifespan_months.draw(rng))));
        trial.miles = spec.miles_per_month.draw(rng);
        if (calories) {
            trial.factor = spec.cals_per_mile.draw(rng);
        } else {
            trial.factor = spec.car_emissions.draw(rng) - spec.bike_emissions.draw(rng);
        }
        if (trial.factor < 0.0) ++result.negative_factor_trials;

        const MonthlySeries fleet = active_fleet(sales, trial.lifespan_months, spec.fleet_stat);
        std::vector<double> values(fleet.size());
        kernels::scale(fleet.values(), trial.factor * trial.miles / 1000.0, values);
        trial.monthly = MonthlySeries(fleet.first_key(), std::move(values));
        trial.annual = december_windows(trial.monthly);
        result.trials.push_back(std::move(trial));
    }
    return result;
}

}  // namespace

SimResult run_co2(const MonthlySeries& sales, const SimSpec& spec) {
    return run(sales, spec, false);
}

SimResult run_calories(const MonthlySeries& sales, const SimSpec& spec) {
    return run(sales, spec, true);
}

std::vector<int> SimResult::covered_years() const {
    std::vector<int> years;
    if (trials.empty()) return years;
    years = trials.front().annual.years;
    for (const Trial& t : trials) {
        std::erase_if(years, [&](int y) { return !t.annual.contains(y); });
    }
    return years;
}

Summary summarize(const SimResult& result, int year) {
    if (result.trials.empty()) throw Error(errc::precondition, "no trials to summarize");
    std::vector<double> values;
    values.reserve(result.trials.size());
    for (const Trial& t : result.trials) {
        if (!t.annual.contains(year)) {
            throw Error(errc::precondition,
                        "year " + std::to_string(year) + " not covered by every trial");
        }
        values.push_back(t.annual.at(year));
    }
    Summary s;
    s.mean = kernels::sum(values) / static_cast<double>(values.size());
    if (values.size() < 2) {
        s.degenerate_std = true;
        return s;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return s;
}

}  // namespace ebikecast::impact
