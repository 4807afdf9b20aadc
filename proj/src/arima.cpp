#include "ebikecast/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ebikecast/dist.hpp"
#include "ebikecast/error.hpp"
#include "ebikecast/kernels.hpp"
#include "ebikecast/optim.hpp"
#include "ebikecast/rng.hpp"
#include "ebikecast/series.hpp"

namespace ebikecast::arima {

void ArimaOrder::validate() const {
    if (p < 0 || d < 0 || q < 0 || p > 24 || d > 24 || q > 24) {
        throw Error(errc::precondition, "ARIMA order components must lie in 0..24");
    }
    if (p + q < 1 && d < 1) {
        throw Error(errc::precondition, "ARIMA order must include an ARMA term or a difference");
    }
}

bool ar_stationary(std::span<const double> phi) {
    std::vector<double> a(phi.begin(), phi.end());
    for (std::size_t k = a.size(); k > 0; --k) {
        const double r = a[k - 1];
        if (!(std::abs(r) < 1.0)) return false;
        if (k == 1) break;
        const double denom = 1.0 - r * r;
        std::vector<double> next(k - 1);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            next[i] = (a[i] + r * a[k - 2 - i]) / denom;
        }
        a = std::move(next);
    }
    return true;
}

bool ma_invertible(std::span<const double> theta) {
    std::vector<double> negated(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) negated[i] = -theta[i];
    return ar_stationary(negated);
}

std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta,
                                std::size_t count) {
    std::vector<double> psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k) {
        double value = k <= theta.size() ? theta[k - 1] : 0.0;
        const std::size_t reach = std::min(k, phi.size());
        for (std::size_t i = 1; i <= reach; ++i) value += phi[i - 1] * psi[k - i];
        psi[k] = value;
    }
    return psi;
}

namespace {

// Conditional sum of squares; writes the recursion residuals (one per step,
// starting at t = p) into `residuals` when non-null.
double css(std::span<const double> z, double intercept, std::span<const double> phi_rev,
           std::span<const double> theta, std::vector<double>* residuals) {
    const std::size_t n = z.size();
    const std::size_t p = phi_rev.size();
    const std::size_t q = theta.size();
    std::vector<double> eps(n, 0.0);
    double total = 0.0;
    for (std::size_t t = p; t < n; ++t) {
        double pred = intercept;
        if (p > 0) pred += kernels::dot(phi_rev, z.subspan(t - p, p));
        for (std::size_t j = 1; j <= q && j <= t; ++j) pred += theta[j - 1] * eps[t - j];
        eps[t] = z[t] - pred;
        total += eps[t] * eps[t];
    }
    if (residuals != nullptr) {
        residuals->assign(eps.begin() + static_cast<std::ptrdiff_t>(p), eps.end());
    }
    return total;
}

struct ParamView {
    double intercept;
    std::span<const double> phi;
    std::span<const double> theta;
};

ParamView unpack(std::span<const double> x, int p, int q) {
    return ParamView{x[0], x.subspan(1, static_cast<std::size_t>(p)),
                     x.subspan(1 + static_cast<std::size_t>(p), static_cast<std::size_t>(q))};
}

}  // namespace

ArimaModel fit(std::span<const double> values, const ArimaOrder& order, std::uint64_t seed) {
    order.validate();
    const std::size_t required =
        static_cast<std::size_t>(order.p + order.q + order.d + 2);
    if (values.size() < required) {
        throw Error(errc::precondition, "series too short for the requested ARIMA order");
    }

    auto differenced = series::difference(values, order.d);
    const std::span<const double> z(differenced.values);
    const std::size_t n_z = z.size();
    const std::size_t p = static_cast<std::size_t>(order.p);
    const std::size_t q = static_cast<std::size_t>(order.q);
    const std::size_t n_eff = n_z - p;

    ArimaModel model;
    model.order = order;
    const std::size_t tail = std::max(p, q) + static_cast<std::size_t>(order.d);
    model.train_tail.assign(values.end() - static_cast<std::ptrdiff_t>(tail), values.end());

    const double z_mean = kernels::sum(z) / static_cast<double>(n_z);

    if (p == 0 && q == 0) {
        // Pure integrated model: the intercept is the mean of the
        // differenced series and the residuals are its deviations.
        model.intercept = z_mean;
        model.residuals.resize(n_z);
        for (std::size_t i = 0; i < n_z; ++i) model.residuals[i] = z[i] - z_mean;
        model.sigma2 = kernels::dot(model.residuals, model.residuals) / static_cast<double>(n_z);
    } else {
        const std::size_t dim = 1 + p + q;
        auto objective = [&](std::span<const double> x) {
            const ParamView view = unpack(x, order.p, order.q);
            if (!ar_stationary(view.phi) || !ma_invertible(view.theta)) {
                return std::numeric_limits<double>::infinity();
            }
            std::vector<double> phi_rev(view.phi.rbegin(), view.phi.rend());
            return css(z, view.intercept, phi_rev, view.theta, nullptr);
        };

        optim::SimplexOptions options;
        options.max_iter = 2000 * static_cast<int>(dim);

        constexpr int kStarts = 5;
        std::vector<double> best_x;
        double best_f = std::numeric_limits<double>::infinity();
        bool best_converged = false;
        for (int s = 0; s < kStarts; ++s) {
            std::vector<double> x0(dim, 0.0);
            x0[0] = z_mean;
            if (s > 0) {
                // Jittered feasible starts: coefficient vectors with L1 norm
                // under 0.8 are always stationary/invertible.
                Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(s));
                x0[0] = z_mean * rng.uniform(0.5, 1.5);
                for (std::size_t i = 0; i < p; ++i) {
                    x0[1 + i] = rng.uniform(-0.8, 0.8) / static_cast<double>(p);
                }
                for (std::size_t j = 0; j < q; ++j) {
                    x0[1 + p + j] = rng.uniform(-0.8, 0.8) / static_cast<double>(q);
                }
            }
            const auto result = optim::nelder_mead(objective, x0, options);
            if (result.fval < best_f) {
                best_f = result.fval;
                best_x = result.x;
                best_converged = result.converged;
            }
        }

        const ParamView view = unpack(best_x, order.p, order.q);
        model.intercept = view.intercept;
        model.phi.assign(view.phi.begin(), view.phi.end());
        model.theta.assign(view.theta.begin(), view.theta.end());
        model.converged = best_converged;

        std::vector<double> phi_rev(model.phi.rbegin(), model.phi.rend());
        const double final_css = css(z, model.intercept, phi_rev, model.theta, &model.residuals);
        model.sigma2 = final_css / static_cast<double>(n_eff);
    }

    if (!(model.sigma2 > 0.0)) {
        // A perfectly fit (deterministic) series; keep variance strictly
        // positive so interval widths stay defined.
        model.sigma2 = std::numeric_limits<double>::min();
    }
    const double n_d = static_cast<double>(model.residuals.size());
    model.loglik_css =
        -0.5 * n_d * (std::log(2.0 * std::numbers::pi * model.sigma2) + 1.0);
    return model;
}

Forecast forecast(const ArimaModel& model, int horizon, double confidence) {
    if (horizon < 1) throw Error(errc::precondition, "forecast horizon must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(errc::precondition, "confidence must lie in (0, 1)");
    }
    const std::size_t p = model.phi.size();
    const std::size_t q = model.theta.size();
    const int d = model.order.d;
    const std::size_t h = static_cast<std::size_t>(horizon);
    if (model.train_tail.size() < std::max(p, q) + static_cast<std::size_t>(d)) {
        throw Error(errc::precondition, "model train_tail shorter than max(p,q)+d");
    }

    // Split the training tail into the last level of each differencing stage
    // plus the differenced-scale values that seed the AR recursion.
    std::vector<double> stage(model.train_tail);
    std::vector<double> stage_last(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        stage_last[static_cast<std::size_t>(j)] = stage.back();
        for (std::size_t i = 0; i + 1 < stage.size(); ++i) stage[i] = stage[i + 1] - stage[i];
        stage.pop_back();
    }

    // History buffers: differenced observations and residuals, oldest first.
    std::vector<double> z_hist(stage);
    std::vector<double> e_hist(q, 0.0);
    const std::size_t avail = std::min(q, model.residuals.size());
    for (std::size_t j = 0; j < avail; ++j) {
        e_hist[q - 1 - j] = model.residuals[model.residuals.size() - 1 - j];
    }

    Forecast out;
    out.confidence = confidence;
    out.mean.resize(h);
    for (std::size_t step = 0; step < h; ++step) {
        double value = model.intercept;
        for (std::size_t i = 1; i <= p; ++i) value += model.phi[i - 1] * z_hist[z_hist.size() - i];
        for (std::size_t j = 1; j <= q; ++j) value += model.theta[j - 1] * e_hist[e_hist.size() - j];
        out.mean[step] = value;
        z_hist.push_back(value);
        e_hist.push_back(0.0);
    }

    // Undifference the mean path, then the interval bounds on the same scale.
    std::vector<double> level(out.mean);
    for (std::size_t j = stage_last.size(); j-- > 0;) {
        double running = stage_last[j];
        for (double& v : level) {
            running += v;
            v = running;
        }
    }
    out.mean = std::move(level);

    // Forecast-error variance from the integrated psi weights.
    std::vector<double> psi = psi_weights(model.phi, model.theta, h);
    for (int j = 0; j < d; ++j) {
        for (std::size_t i = 1; i < psi.size(); ++i) psi[i] += psi[i - 1];
    }
    const double z_crit = dist::normal_quantile(0.5 * (1.0 + confidence));
    out.lower.resize(h);
    out.upper.resize(h);
    double cum = 0.0;
    for (std::size_t step = 0; step < h; ++step) {
        cum += psi[step] * psi[step];
        const double half = z_crit * std::sqrt(model.sigma2 * cum);
        out.lower[step] = out.mean[step] - half;
        out.upper[step] = out.mean[step] + half;
    }
    return out;
}

PipelineResult forecast_pipeline(const MonthlySeries& monthly, const ArimaOrder& order,
                                 int horizon, double train_fraction, std::uint64_t seed,
                                 double confidence) {
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw Error(errc::precondition, "train fraction must lie in (0, 1]");
    }
    if (monthly.empty()) throw Error(errc::precondition, "empty input series");

    const auto logged = series::log_transform(monthly.values());
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(monthly.size())));
    if (n_train < 1) throw Error(errc::precondition, "train fraction leaves no data");

    ArimaModel model = fit(std::span<const double>(logged).subspan(0, n_train), order, seed);
    Forecast fc = forecast(model, horizon, confidence);
    // Quantiles map through the monotone back-transform directly.
    const auto tag = series::TransformTag::log();
    for (auto* seq : {&fc.mean, &fc.lower, &fc.upper}) {
        *seq = series::invert(tag, *seq);
    }

    PipelineResult result;
    result.start =
        MonthKey::from_index(monthly.first_key().index() + static_cast<long>(n_train));
    result.forecast = std::move(fc);

    // Calendar-year sums; a year counts only when all 12 months lie inside
    // the forecast window.
    std::vector<std::pair<int, double>> annual;
    const long start_idx = result.start.index();
    std::size_t i = 0;
    const std::size_t h = result.forecast.mean.size();
    while (i < h) {
        const int year = MonthKey::from_index(start_idx + static_cast<long>(i)).year;
        double total = 0.0;
        std::size_t months = 0;
        while (i < h && MonthKey::from_index(start_idx + static_cast<long>(i)).year == year) {
            total += result.forecast.mean[i];
            ++months;
            ++i;
        }
        if (months == 12) {
            annual.emplace_back(year, total);
        } else {
            result.partial_years.push_back(year);
        }
    }
    result.annual = AnnualSeries::from_rows(std::move(annual));
    return result;
}

}  // namespace ebikecast::arima
