#include <doctest.h>

#include <cmath>
#include <vector>

#include "ebikecast/arima.hpp"
#include "ebikecast/diagnostics.hpp"
#include "ebikecast/error.hpp"
#include "ebikecast/rng.hpp"

using namespace ebikecast;

namespace {

std::vector<double> simulate_ar1(double phi, double intercept, std::size_t n, Rng& rng) {
    std::vector<double> out(n);
    double level = intercept / (1.0 - phi);
    for (double& v : out) {
        level = intercept + phi * level + rng.normal();
        v = level;
    }
    return out;
}

std::vector<double> simulate_ma1(double theta, std::size_t n, Rng& rng) {
    std::vector<double> out(n);
    double prev_eps = rng.normal();
    for (double& v : out) {
        const double eps = rng.normal();
        v = eps + theta * prev_eps;
        prev_eps = eps;
    }
    return out;
}

}  // namespace

TEST_CASE("ar_stationary / ma_invertible: root checks") {
    CHECK(arima::ar_stationary(std::vector<double>{0.6}));
    CHECK_FALSE(arima::ar_stationary(std::vector<double>{1.2}));
    CHECK_FALSE(arima::ar_stationary(std::vector<double>{1.0}));
    CHECK(arima::ar_stationary(std::vector<double>{0.5, 0.4}));   // roots outside
    CHECK_FALSE(arima::ar_stationary(std::vector<double>{0.5, 0.6}));
    CHECK(arima::ar_stationary({}));

    CHECK(arima::ma_invertible(std::vector<double>{0.5}));
    CHECK_FALSE(arima::ma_invertible(std::vector<double>{-1.1}));
    CHECK(arima::ma_invertible(std::vector<double>{-0.9}));
}

TEST_CASE("psi_weights: known expansions") {
    const auto ar = arima::psi_weights(std::vector<double>{0.5}, {}, 5);
    CHECK(ar == std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625});

    const auto ma = arima::psi_weights({}, std::vector<double>{0.3}, 4);
    CHECK(ma == std::vector<double>{1.0, 0.3, 0.0, 0.0});

    // ARMA(1,1): psi_1 = phi + theta, psi_k = phi * psi_{k-1} afterwards.
    const auto arma = arima::psi_weights(std::vector<double>{0.5}, std::vector<double>{0.2}, 4);
    CHECK(arma[1] == doctest::Approx(0.7));
    CHECK(arma[2] == doctest::Approx(0.35));
    CHECK(arma[3] == doctest::Approx(0.175));
}

TEST_CASE("fit: AR(1) simulation recovery") {
    Rng rng(305);
    const auto data = simulate_ar1(0.6, 0.0, 500, rng);
    const auto model = arima::fit(data, arima::ArimaOrder{1, 0, 0}, 42);
    REQUIRE(model.phi.size() == 1);
    CHECK(std::abs(model.phi[0] - 0.6) <= 0.10);
    CHECK(arima::ar_stationary(model.phi));
    CHECK(model.sigma2 > 0.5);
    CHECK(model.sigma2 < 2.0);
}

TEST_CASE("fit: MA(1) simulation recovery") {
    Rng rng(306);
    const auto data = simulate_ma1(0.5, 500, rng);
    const auto model = arima::fit(data, arima::ArimaOrder{0, 0, 1}, 42);
    REQUIRE(model.theta.size() == 1);
    CHECK(std::abs(model.theta[0] - 0.5) <= 0.10);
    CHECK(arima::ma_invertible(model.theta));
}

TEST_CASE("fit: AR CSS optimum matches the OLS route") {
    // Conditioning on the first observation, the AR(1)-with-intercept CSS
    // objective is exactly the least-squares objective of y_t on
    // (1, y_{t-1}); the simplex must land on the normal-equation solution.
    Rng rng(808);
    const auto data = simulate_ar1(0.55, 0.8, 400, rng);
    const auto model = arima::fit(data, arima::ArimaOrder{1, 0, 0}, 6);

    const std::size_t n = data.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        sx += data[t - 1];
        sy += data[t];
        sxx += data[t - 1] * data[t - 1];
        sxy += data[t - 1] * data[t];
    }
    const double m = static_cast<double>(n - 1);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;

    CHECK(model.phi[0] == doctest::Approx(slope).epsilon(1e-5));
    CHECK(model.intercept == doctest::Approx(intercept).epsilon(1e-4));

    // The reported variance is the residual mean square of that regression.
    double ssr = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        const double e = data[t] - intercept - slope * data[t - 1];
        ssr += e * e;
    }
    CHECK(model.sigma2 == doctest::Approx(ssr / m).epsilon(1e-6));
}

TEST_CASE("fit: pure integrated model has a closed form") {
    const std::vector<double> data{1.0, 3.0, 4.0, 8.0, 9.0};
    const auto model = arima::fit(data, arima::ArimaOrder{0, 1, 0}, 0);
    // Differences are 2,1,4,1 with mean 2.
    CHECK(model.intercept == doctest::Approx(2.0));
    REQUIRE(model.residuals.size() == 4);
    CHECK(model.residuals[0] == doctest::Approx(0.0));
    CHECK(model.residuals[2] == doctest::Approx(2.0));
    CHECK(model.converged);
}

TEST_CASE("fit: validation errors") {
    CHECK_THROWS_AS(arima::fit(std::vector<double>{1, 2, 3}, arima::ArimaOrder{12, 1, 1}, 0),
                    Error);
    CHECK_THROWS_AS(arima::fit(std::vector<double>{1, 2, 3, 4}, arima::ArimaOrder{0, 0, 0}, 0),
                    Error);
    CHECK_THROWS_AS(arima::fit(std::vector<double>{1, 2, 3, 4}, arima::ArimaOrder{-1, 0, 1}, 0),
                    Error);
    CHECK_THROWS_AS(arima::fit(std::vector<double>{1, 2, 3, 4}, arima::ArimaOrder{25, 0, 1}, 0),
                    Error);
}

TEST_CASE("fit: bit-identical for identical inputs and seed") {
    Rng rng(307);
    const auto data = simulate_ar1(0.4, 1.0, 300, rng);
    const auto a = arima::fit(data, arima::ArimaOrder{2, 0, 1}, 9);
    const auto b = arima::fit(data, arima::ArimaOrder{2, 0, 1}, 9);
    CHECK(a.intercept == b.intercept);
    CHECK(a.phi == b.phi);
    CHECK(a.theta == b.theta);
    CHECK(a.sigma2 == b.sigma2);
    CHECK(a.residuals == b.residuals);
}

TEST_CASE("forecast: random-walk identities") {
    arima::ArimaModel model;
    model.order = arima::ArimaOrder{0, 1, 0};
    model.intercept = 0.0;
    model.sigma2 = 1.0;
    model.train_tail = {123.456};

    const auto flat = arima::forecast(model, 24, 0.95);
    for (double v : flat.mean) CHECK(v == 123.456);

    model.intercept = 0.75;
    const auto drift = arima::forecast(model, 10, 0.95);
    for (std::size_t h = 0; h < drift.mean.size(); ++h) {
        CHECK(drift.mean[h] ==
              doctest::Approx(123.456 + 0.75 * static_cast<double>(h + 1)).epsilon(1e-12));
    }
}

TEST_CASE("forecast: AR(1) geometric decay") {
    arima::ArimaModel model;
    model.order = arima::ArimaOrder{1, 0, 0};
    model.phi = {0.5};
    model.intercept = 0.0;
    model.sigma2 = 1.0;
    model.train_tail = {8.0};

    const auto fc = arima::forecast(model, 3, 0.95);
    CHECK(fc.mean[0] == doctest::Approx(4.0));
    CHECK(fc.mean[1] == doctest::Approx(2.0));
    CHECK(fc.mean[2] == doctest::Approx(1.0));

    CHECK_THROWS_AS(arima::forecast(model, 0, 0.95), Error);
    CHECK_THROWS_AS(arima::forecast(model, 5, 1.0), Error);
}

TEST_CASE("forecast: interval half-widths never shrink with horizon") {
    Rng rng(308);
    const auto data = simulate_ar1(0.5, 0.2, 200, rng);
    for (const auto order : {arima::ArimaOrder{1, 1, 0}, arima::ArimaOrder{1, 1, 1},
                             arima::ArimaOrder{0, 1, 1}}) {
        const auto model = arima::fit(data, order, 3);
        const auto fc = arima::forecast(model, 30, 0.9);
        for (std::size_t h = 1; h < fc.mean.size(); ++h) {
            const double prev = fc.upper[h - 1] - fc.lower[h - 1];
            const double cur = fc.upper[h] - fc.lower[h];
            CHECK(cur >= prev - 1e-12);
        }
        CHECK(arima::ar_stationary(model.phi));
        CHECK(arima::ma_invertible(model.theta));
    }
}

TEST_CASE("forecast_pipeline: a constant series forecasts itself") {
    const MonthlySeries constant(MonthKey{2015, 1}, std::vector<double>(48, 100.0));
    const auto result =
        arima::forecast_pipeline(constant, arima::ArimaOrder{0, 1, 0}, 30, 1.0, 0);
    for (double v : result.forecast.mean) CHECK(v == doctest::Approx(100.0).epsilon(1e-12));

    // 30 months from 2019-01: 2019 complete, 2020 complete, 2021 partial.
    CHECK(result.start == MonthKey{2019, 1});
    CHECK(result.annual.contains(2019));
    CHECK(result.annual.at(2019) == doctest::Approx(1200.0).epsilon(1e-12));
    CHECK(result.annual.contains(2020));
    CHECK_FALSE(result.annual.contains(2021));
    REQUIRE(result.partial_years.size() == 1);
    CHECK(result.partial_years[0] == 2021);
}

TEST_CASE("forecast_pipeline: train fraction boundary and validation") {
    Rng rng(309);
    std::vector<double> values(60);
    for (double& v : values) v = std::exp(rng.uniform(0.0, 2.0));
    const MonthlySeries monthly(MonthKey{2010, 1}, values);

    const auto full = arima::forecast_pipeline(monthly, arima::ArimaOrder{1, 1, 0}, 12, 1.0, 5);
    CHECK(full.start == MonthKey{2015, 1});

    CHECK_THROWS_AS(arima::forecast_pipeline(monthly, arima::ArimaOrder{1, 1, 0}, 12, 0.0, 5),
                    Error);
    CHECK_THROWS_AS(arima::forecast_pipeline(monthly, arima::ArimaOrder{1, 1, 0}, 12, 1.5, 5),
                    Error);

    // Positive-value precondition comes from the log transform.
    std::vector<double> with_zero = values;
    with_zero[10] = 0.0;
    CHECK_THROWS_AS(arima::forecast_pipeline(MonthlySeries(MonthKey{2010, 1}, with_zero),
                                             arima::ArimaOrder{1, 1, 0}, 12, 1.0, 5),
                    Error);
}

TEST_CASE("fit: residual whiteness on well-specified simulations") {
    // Ljung-Box at m=10 with fitted_params = p+q should reject rarely when
    // the model matches the data-generating process.
    int rejections = 0;
    const int replicates = 200;
    for (int s = 0; s < replicates; ++s) {
        Rng rng = Rng::derive(271, static_cast<std::uint64_t>(s));
        const auto data = simulate_ar1(0.5, 0.0, 300, rng);
        const auto model = arima::fit(data, arima::ArimaOrder{1, 0, 0}, 17);
        const auto lb = diagnostics::ljung_box(model.residuals, 10, 1);
        if (lb.p_value < 0.05) ++rejections;
    }
    CHECK(rejections <= replicates / 10);
}
