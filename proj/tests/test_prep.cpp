#include <doctest.h>

#include <cmath>

#include "ebikecast/error.hpp"
#include "ebikecast/ingest.hpp"
#include "ebikecast/prep.hpp"
#include "test_util.hpp"

using namespace ebikecast;

TEST_CASE("us_from_european: reference-year identity and proportionality") {
    CHECK(prep::us_from_european(500, 500, 423) == 423.0);
    CHECK(prep::us_from_european(250, 500, 400) == 200.0);
    CHECK(prep::us_from_european(0, 500, 400) == 0.0);
    CHECK_THROWS_AS(prep::us_from_european(100, 0, 400), Error);
    CHECK_THROWS_AS(prep::us_from_european(-1, 500, 400), Error);
}

TEST_CASE("merge_series: pass-through, scaling, and gap detection") {
    const auto eu = AnnualSeries::from_rows({{2006, 250}, {2007, 300}, {2008, 400}, {2019, 500}});
    const auto us = AnnualSeries::from_rows({{2019, 423}});
    const auto inputs = prep::MergeInputs::from_series(eu, us, 2019);

    SUBCASE("contiguity spans the union and known years pass through") {
        // 2009..2018 covered by neither source.
        CHECK_THROWS_WITH_AS(prep::merge_series(inputs, us), doctest::Contains("2009"), Error);
    }
    SUBCASE("scaled years follow the reference proportion exactly") {
        const auto eu_full = AnnualSeries::from_rows(
            {{2017, 250}, {2018, 300}, {2019, 500}});
        const auto in2 = prep::MergeInputs::from_series(eu_full, us, 2019);
        const auto merged = prep::merge_series(in2, us);
        REQUIRE(merged.size() == 3);
        CHECK(merged.at(2019) == 423.0);          // known value, untouched
        CHECK(merged.at(2017) == doctest::Approx(423.0 * 0.5).epsilon(1e-15));
    }
    SUBCASE("idempotent on years already known") {
        const auto us_two = AnnualSeries::from_rows({{2018, 369}, {2019, 423}});
        const auto eu_two = AnnualSeries::from_rows({{2018, 9999}, {2019, 500}});
        const auto in2 = prep::MergeInputs::from_series(eu_two, us_two, 2019);
        const auto merged = prep::merge_series(in2, us_two);
        CHECK(merged.at(2018) == 369.0);  // known U.S. wins over the scaled value
    }
}

TEST_CASE("disaggregate: symmetry, direct proportion, zero-year rejection") {
    const auto annual = AnnualSeries::from_rows({{2019, 120}});

    SUBCASE("equal frequencies split evenly") {
        std::vector<std::pair<MonthKey, int>> rows;
        for (int m = 1; m <= 12; ++m) rows.push_back({{2019, m}, 7});
        const auto trends = TrendTable::from_rows(rows);
        const auto monthly = prep::disaggregate(annual, trends);
        REQUIRE(monthly.size() == 12);
        for (std::size_t i = 0; i < 12; ++i) CHECK(monthly[i] == doctest::Approx(10.0));
    }
    SUBCASE("mass concentrates where the frequency is") {
        std::vector<std::pair<MonthKey, int>> rows;
        for (int m = 1; m <= 12; ++m) rows.push_back({{2019, m}, m <= 2 ? 50 : 0});
        const auto trends = TrendTable::from_rows(rows);
        const auto monthly = prep::disaggregate(AnnualSeries::from_rows({{2019, 100}}), trends);
        CHECK(monthly[0] == doctest::Approx(50.0));
        CHECK(monthly[1] == doctest::Approx(50.0));
        for (std::size_t i = 2; i < 12; ++i) CHECK(monthly[i] == 0.0);
    }
    SUBCASE("an all-zero trend year is undefined") {
        std::vector<std::pair<MonthKey, int>> rows;
        for (int m = 1; m <= 12; ++m) rows.push_back({{2019, m}, 0});
        const auto trends = TrendTable::from_rows(rows);
        CHECK_THROWS_AS(prep::disaggregate(annual, trends), Error);
    }
}

TEST_CASE("disaggregate: conservation oracle on the bundled dataset") {
    const auto trends = ingest::read_trends(testutil::data_dir() /
                                            "ElectricBikesGoogleSearchTrends.csv");
    const auto us = ingest::read_annual(testutil::data_dir() / "AnnualUSEbikeSales.csv");
    const auto eu = ingest::read_annual(testutil::data_dir() / "EuropeanAnnualEbikeSales.csv");
    const auto merged = prep::merge_series(prep::MergeInputs::from_series(eu, us, 2019), us);
    const auto monthly = prep::disaggregate(merged, trends);

    REQUIRE(monthly.size() == merged.size() * 12);
    for (std::size_t y = 0; y < merged.size(); ++y) {
        double total = 0.0;
        for (std::size_t m = 0; m < 12; ++m) total += monthly[y * 12 + m];
        CHECK(std::abs(total - merged.value(y)) <= 1e-9 * std::abs(merged.value(y)));
    }
}

TEST_CASE("disaggregate: scale equivariance and trend-scale invariance") {
    std::vector<std::pair<MonthKey, int>> rows;
    const int freqs[12] = {8, 9, 12, 14, 17, 21, 22, 19, 14, 11, 9, 8};
    for (int m = 1; m <= 12; ++m) rows.push_back({{2020, m}, freqs[m - 1]});
    const auto trends = TrendTable::from_rows(rows);

    const auto base = prep::disaggregate(AnnualSeries::from_rows({{2020, 77}}), trends);
    const auto scaled = prep::disaggregate(AnnualSeries::from_rows({{2020, 3 * 77}}), trends);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(scaled[i] == doctest::Approx(3.0 * base[i]).epsilon(1e-12));
    }

    std::vector<std::pair<MonthKey, int>> doubled;
    for (int m = 1; m <= 12; ++m) doubled.push_back({{2020, m}, 2 * freqs[m - 1]});
    const auto doubled_out =
        prep::disaggregate(AnnualSeries::from_rows({{2020, 77}}),
                           TrendTable::from_rows(doubled));
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(doubled_out[i] == doctest::Approx(base[i]).epsilon(1e-12));
    }
}
