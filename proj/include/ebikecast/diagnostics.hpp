#pragma once

// Hypothesis tests and shape statistics used to justify and validate the
// forecasting model: the augmented Dickey-Fuller unit-root test, the
// Ljung-Box portmanteau test, and kurtosis.

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace ebikecast::diagnostics {

/**
 * Augmented Dickey-Fuller result, constant-only regression.
 *
 * The null hypothesis is that the series has a unit root (is not
 * stationary); small p-values reject it.
 */
struct AdfResult {
    double statistic = 0.0;  ///< t-ratio on the lagged level
    double p_value = 1.0;
    int lags_used = 0;       ///< augmentation lags chosen by AIC
    int n_obs = 0;           ///< observations entering the final regression
    std::map<int, double> critical_values;  ///< keys 1, 5, 10 (percent)
};

/**
 * Fits dy_t = alpha + beta * y_{t-1} + sum_i gamma_i * dy_{t-i} + e_t by
 * least squares for each lag count k in 0..max_lag, selects k by AIC on the
 * common trimmed sample, and reports the t-ratio of beta from a refit on
 * the longest sample that k allows.
 *
 * The p-value comes from the MacKinnon response-surface approximation for
 * the constant-only case; critical values from the matching finite-sample
 * regression table.
 *
 * Default max_lag is floor(12 * (n/100)^(1/4)). Requires at least 15
 * observations after lag trimming; a constant series is an error.
 */
AdfResult adf_test(std::span<const double> values, std::optional<int> max_lag = std::nullopt);

/// The response-surface p-value for a given ADF t-ratio (constant-only
/// case), exposed so the mapping can be checked against published
/// percentiles independently of any regression.
double adf_pvalue(double statistic);

struct LjungBoxResult {
    double q = 0.0;          ///< portmanteau statistic, >= 0
    double p_value = 1.0;    ///< upper-tail chi-square(dof) at q
    int m = 0;               ///< number of lags accumulated
    int dof = 0;             ///< m - fitted_params
};

/**
 * Ljung-Box lack-of-fit test: Q(m) = n(n+2) * sum_{j=1..m} r_j^2 / (n-j),
 * with r_j the sample autocorrelations of `values`.
 *
 * fitted_params is subtracted from m to form the degrees of freedom; pass
 * p+q when testing model residuals, 0 for a raw series.
 */
LjungBoxResult ljung_box(std::span<const double> values, int m, int fitted_params = 0);

/// The Q statistic evaluated on precomputed autocorrelations r_1..r_m for a
/// series of length n. Exposed so the formula itself is testable.
LjungBoxResult ljung_box_from_acf(std::span<const double> acf, int n, int fitted_params = 0);

/// Fourth standardized moment sum (y_i - mean)^4 / (n * s^4) with s the
/// sample standard deviation (divisor n-1). Requires n >= 4, nonconstant.
double kurtosis(std::span<const double> values);

/// kurtosis(values) - 3, the normal-referenced variant.
double excess_kurtosis(std::span<const double> values);

}  // namespace ebikecast::diagnostics
