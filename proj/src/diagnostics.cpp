#include "ebikecast/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ebikecast/dist.hpp"
#include "ebikecast/error.hpp"
#include "ebikecast/kernels.hpp"
#include "ebikecast/series.hpp"

namespace ebikecast::diagnostics {

namespace {

// ---------------------------------------------------------------------------
// Small dense OLS via normal equations + Cholesky. The regressor count here
// is at most a couple dozen, so this stays well conditioned for the series
// the ADF test sees.
// ---------------------------------------------------------------------------

struct OlsFit {
    std::vector<double> beta;
    double ssr = 0.0;
    std::size_t n = 0;
    // Diagonal of (X'X)^-1, for coefficient standard errors.
    std::vector<double> xtx_inv_diag;
};

// Cholesky factorization in place; throws on a non-positive pivot.
void cholesky(std::vector<double>& g, std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
        double diag = g[j * k + j];
        for (std::size_t s = 0; s < j; ++s) diag -= g[j * k + s] * g[j * k + s];
        if (!(diag > 0.0)) {
            throw Error(errc::degenerate, "singular regression (constant or collinear series)");
        }
        g[j * k + j] = std::sqrt(diag);
        for (std::size_t i = j + 1; i < k; ++i) {
            double v = g[i * k + j];
            for (std::size_t s = 0; s < j; ++s) v -= g[i * k + s] * g[j * k + s];
            g[i * k + j] = v / g[j * k + j];
        }
    }
}

std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t k,
                                   std::vector<double> rhs) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t s = 0; s < i; ++s) rhs[i] -= l[i * k + s] * rhs[s];
        rhs[i] /= l[i * k + i];
    }
    for (std::size_t i = k; i-- > 0;) {
        for (std::size_t s = i + 1; s < k; ++s) rhs[i] -= l[s * k + i] * rhs[s];
        rhs[i] /= l[i * k + i];
    }
    return rhs;
}

OlsFit ols(const std::vector<std::span<const double>>& columns, std::span<const double> y) {
    const std::size_t k = columns.size();
    const std::size_t n = y.size();
    std::vector<double> gram(k * k, 0.0);
    std::vector<double> xty(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = kernels::dot(columns[i], columns[j]);
            gram[i * k + j] = g;
            gram[j * k + i] = g;
        }
        xty[i] = kernels::dot(columns[i], y);
    }
    std::vector<double> l = gram;
    cholesky(l, k);

    OlsFit fit;
    fit.n = n;
    fit.beta = cholesky_solve(l, k, xty);
    fit.xtx_inv_diag.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> e(k, 0.0);
        e[i] = 1.0;
        fit.xtx_inv_diag[i] = cholesky_solve(l, k, std::move(e))[i];
    }
    std::vector<double> resid(n);
    for (std::size_t t = 0; t < n; ++t) {
        double fitted = 0.0;
        for (std::size_t i = 0; i < k; ++i) fitted += fit.beta[i] * columns[i][t];
        resid[t] = y[t] - fitted;
    }
    fit.ssr = kernels::dot(resid, resid);
    return fit;
}

// ---------------------------------------------------------------------------
// MacKinnon (1994, 2010) response-surface estimates for the Dickey-Fuller
// distribution, constant-only regression, one unit root. The p-value maps
// the t-ratio through a low-order polynomial and the normal CDF; critical
// values come from the finite-sample regression in the 2010 update.
// ---------------------------------------------------------------------------

constexpr double kTauMin = -18.83;
constexpr double kTauMax = 2.74;
constexpr double kTauStar = -1.61;
// Polynomials in ascending powers of tau, published scaling already applied;
// the small-p branch covers tau <= tau_star, the large-p branch the rest,
// and the two agree at the seam (p ~= 0.48 at tau_star).
constexpr double kSmallP[] = {2.1659, 1.4412, 3.8269e-2};
constexpr double kLargeP[] = {1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2};

double mackinnon_pvalue(double tau) {
    if (tau <= kTauMin) return 0.0;
    if (tau >= kTauMax) return 1.0;
    double z;
    if (tau <= kTauStar) {
        z = kSmallP[0] + tau * (kSmallP[1] + tau * kSmallP[2]);
    } else {
        z = kLargeP[0] + tau * (kLargeP[1] + tau * (kLargeP[2] + tau * kLargeP[3]));
    }
    return dist::normal_cdf(z);
}

// Critical value = b0 + b1/n + b2/n^2 + b3/n^3 at 1/5/10 percent.
constexpr double kCrit[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
};

std::map<int, double> mackinnon_critical_values(int nobs) {
    const double inv = 1.0 / static_cast<double>(nobs);
    std::map<int, double> out;
    const int levels[3] = {1, 5, 10};
    for (int i = 0; i < 3; ++i) {
        out[levels[i]] =
            kCrit[i][0] + inv * (kCrit[i][1] + inv * (kCrit[i][2] + inv * kCrit[i][3]));
    }
    return out;
}

// Regression columns for the ADF design at a given lag count over rows
// [start, m) of the differenced series.
struct AdfDesign {
    std::vector<double> ones;
    std::vector<std::span<const double>> columns;
    std::span<const double> dependent;
};

AdfDesign adf_design(std::span<const double> y, std::span<const double> dy, int lags,
                     std::size_t start) {
    const std::size_t m = dy.size();
    const std::size_t rows = m - start;
    AdfDesign d;
    d.ones.assign(rows, 1.0);
    d.columns.reserve(static_cast<std::size_t>(lags) + 2);
    d.columns.emplace_back(d.ones);
    d.columns.emplace_back(y.subspan(start, rows));  // y_{t-1}
    for (int j = 1; j <= lags; ++j) {
        d.columns.emplace_back(dy.subspan(start - static_cast<std::size_t>(j), rows));
    }
    d.dependent = dy.subspan(start, rows);
    return d;
}

}  // namespace

double adf_pvalue(double statistic) { return mackinnon_pvalue(statistic); }

AdfResult adf_test(std::span<const double> values, std::optional<int> max_lag) {
    const std::size_t n = values.size();
    if (n < 4) throw Error(errc::precondition, "series too short for the ADF test");
    const std::size_t m = n - 1;  // differenced length
    std::vector<double> dy(m);
    for (std::size_t i = 0; i < m; ++i) dy[i] = values[i + 1] - values[i];

    constexpr std::size_t kMinObs = 15;
    int lag_bound;
    if (max_lag.has_value()) {
        lag_bound = *max_lag;
        if (lag_bound < 0 || m < kMinObs + static_cast<std::size_t>(lag_bound)) {
            throw Error(errc::precondition, "series too short for the requested ADF max lag");
        }
    } else {
        // Schwert's rule of thumb, clamped so the trimmed sample keeps at
        // least kMinObs rows.
        lag_bound = static_cast<int>(
            std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
        if (m < kMinObs) throw Error(errc::precondition, "series too short for the ADF test");
        lag_bound = std::min<int>(lag_bound, static_cast<int>(m - kMinObs));
        lag_bound = std::max(lag_bound, 0);
    }

    // Lag selection by AIC on the common sample trimmed at the maximum lag,
    // so every candidate sees identical observations.
    const std::size_t common_start = static_cast<std::size_t>(lag_bound);
    const double n_common = static_cast<double>(m - common_start);
    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= lag_bound; ++k) {
        AdfDesign design = adf_design(values, dy, k, common_start);
        OlsFit fit = ols(design.columns, design.dependent);
        const double aic =
            n_common * std::log(fit.ssr / n_common) + 2.0 * static_cast<double>(k + 2);
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = k;
        }
    }

    // Refit with the chosen lag on the longest sample it allows.
    AdfDesign design = adf_design(values, dy, best_lag, static_cast<std::size_t>(best_lag));
    OlsFit fit = ols(design.columns, design.dependent);
    const std::size_t n_params = design.columns.size();
    if (fit.n <= n_params) throw Error(errc::precondition, "series too short for the ADF test");
    const double sigma2 = fit.ssr / static_cast<double>(fit.n - n_params);
    const double se_beta = std::sqrt(sigma2 * fit.xtx_inv_diag[1]);
    if (!(se_beta > 0.0)) {
        throw Error(errc::degenerate, "singular regression (constant series)");
    }

    AdfResult result;
    result.statistic = fit.beta[1] / se_beta;
    result.p_value = mackinnon_pvalue(result.statistic);
    result.lags_used = best_lag;
    result.n_obs = static_cast<int>(fit.n);
    result.critical_values = mackinnon_critical_values(result.n_obs);
    return result;
}

LjungBoxResult ljung_box(std::span<const double> values, int m, int fitted_params) {
    if (m < 1) throw Error(errc::precondition, "ljung_box requires m >= 1");
    if (values.size() < static_cast<std::size_t>(m) + 1) {
        throw Error(errc::precondition, "ljung_box requires m + 1 <= series length");
    }
    const auto acf = series::autocorrelation(values, static_cast<std::size_t>(m));
    return ljung_box_from_acf(acf, static_cast<int>(values.size()), fitted_params);
}

LjungBoxResult ljung_box_from_acf(std::span<const double> acf, int n, int fitted_params) {
    const int m = static_cast<int>(acf.size());
    if (m < 1) throw Error(errc::precondition, "ljung_box requires at least one autocorrelation");
    if (n <= m) throw Error(errc::precondition, "ljung_box requires n > m");
    const int dof = m - fitted_params;
    if (dof < 1) throw Error(errc::precondition, "ljung_box degrees of freedom must be >= 1");

    double q = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double r = acf[static_cast<std::size_t>(j - 1)];
        q += r * r / static_cast<double>(n - j);
    }
    q *= static_cast<double>(n) * static_cast<double>(n + 2);

    LjungBoxResult result;
    result.q = q;
    result.p_value = dist::chi_square_upper(dof, q);
    result.m = m;
    result.dof = dof;
    return result;
}

double kurtosis(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) throw Error(errc::precondition, "kurtosis requires at least 4 points");
    const double mean = kernels::sum(values) / static_cast<double>(n);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    if (m2 == 0.0) throw Error(errc::degenerate, "kurtosis undefined for a constant series");
    const double sample_var = m2 / static_cast<double>(n - 1);
    return m4 / (static_cast<double>(n) * sample_var * sample_var);
}

double excess_kurtosis(std::span<const double> values) { return kurtosis(values) - 3.0; }

}  // namespace ebikecast::diagnostics
