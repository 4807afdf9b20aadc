#pragma once

// Distribution functions needed by the hypothesis tests and forecast
// intervals. Kept minimal: standard normal CDF/quantile and the chi-square
// upper tail via the regularized incomplete gamma function.

namespace ebikecast::dist {

/// P(Z <= x) for standard normal Z.
double normal_cdf(double x);

/// Inverse of normal_cdf; p must lie in (0, 1).
/// Acklam's rational approximation, |relative error| < 1.15e-9.
double normal_quantile(double p);

/// Upper-tail probability P(X > x) for X ~ chi-square(dof), x >= 0, dof > 0.
double chi_square_upper(double dof, double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

}  // namespace ebikecast::dist
