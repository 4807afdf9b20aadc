#pragma once

// Univariate ARIMA(p,d,q) with intercept, estimated by conditional sum of
// squares and forecast through the ARMA recursion with psi-weight intervals.

#include <cstdint>
#include <span>
#include <vector>

#include "ebikecast/monthly.hpp"

namespace ebikecast::arima {

struct ArimaOrder {
    int p = 0;  ///< autoregressive terms
    int d = 0;  ///< differences
    int q = 0;  ///< moving-average terms

    /// Throws unless 0 <= p,d,q <= 24 and the model has at least one of
    /// an ARMA term or a difference.
    void validate() const;
};

struct ArimaModel {
    ArimaOrder order;
    std::vector<double> phi;    ///< AR coefficients, lag 1 first
    std::vector<double> theta;  ///< MA coefficients, lag 1 first
    double intercept = 0.0;
    double sigma2 = 0.0;        ///< innovation variance, CSS / n_effective
    std::vector<double> residuals;   ///< one per recursion step (n - d - p)
    std::vector<double> train_tail;  ///< last max(p,q)+d input observations
    double loglik_css = 0.0;
    bool converged = true;     ///< false when the optimizer hit its budget
};

struct Forecast {
    std::vector<double> mean;
    std::vector<double> lower;
    std::vector<double> upper;
    double confidence = 0.95;
};

/// True when the AR polynomial 1 - phi_1 B - ... - phi_p B^p has all roots
/// outside the unit circle (Schur-Cohn test via reverse Levinson recursion).
bool ar_stationary(std::span<const double> phi);

/// Invertibility of 1 + theta_1 B + ... + theta_q B^q.
bool ma_invertible(std::span<const double> theta);

/// Coefficients psi_0..psi_{count-1} of the pure moving-average form of the
/// ARMA(p,q) part; forecast-error variances are sigma2 * cumulative sums of
/// their squares.
std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta,
                                std::size_t count);

/**
 * Fits by minimizing the conditional sum of squares
 *   e_t = z_t - c - sum_i phi_i z_{t-i} - sum_j theta_j e_{t-j}
 * over the d-times differenced series z, with pre-sample residuals zero and
 * the recursion starting after the first p observations.
 *
 * The optimizer is a seeded multi-start Nelder-Mead simplex; candidates
 * violating stationarity or invertibility score +infinity. Identical
 * (values, order, seed) inputs give bit-identical models. If no start
 * converges within its budget the best point found is returned with
 * `converged` cleared rather than failing the pipeline.
 */
ArimaModel fit(std::span<const double> values, const ArimaOrder& order, std::uint64_t seed = 42);

/// Mean path via the ARMA recursion with future shocks zero, undifferenced
/// against the training tail; intervals are symmetric on this (fit) scale.
Forecast forecast(const ArimaModel& model, int horizon, double confidence = 0.95);

struct PipelineResult {
    Forecast forecast;        ///< level scale (after exponentiation)
    MonthKey start;           ///< first forecast month
    AnnualSeries annual;      ///< calendar-year sums over complete years
    std::vector<int> partial_years;  ///< years only partly inside the horizon
};

/**
 * The full forecasting procedure: log-transform, fit on the chronological
 * prefix of floor(train_fraction * n) points, forecast `horizon` months,
 * exponentiate, and aggregate complete calendar years.
 */
PipelineResult forecast_pipeline(const MonthlySeries& monthly, const ArimaOrder& order,
                                 int horizon, double train_fraction, std::uint64_t seed = 42,
                                 double confidence = 0.95);

}  // namespace ebikecast::arima
