// ebikecast — e-bike sales reconstruction, forecasting, driver ranking, and
// impact simulation over the bundled CSV schemas.
//
// Subcommands: prep, diagnose, fit, forecast, importance, simulate, pipeline.
// All output is deterministic for a given seed; stdout carries data tables,
// stderr carries diagnostics.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ebikecast/arima.hpp"
#include "ebikecast/diagnostics.hpp"
#include "ebikecast/error.hpp"
#include "ebikecast/forest.hpp"
#include "ebikecast/impact.hpp"
#include "ebikecast/ingest.hpp"
#include "ebikecast/kernels.hpp"
#include "ebikecast/prep.hpp"
#include "ebikecast/series.hpp"
#include "ebikecast/svg.hpp"

namespace fs = std::filesystem;
using namespace ebikecast;

namespace {

// ---------------------------------------------------------------------------
// Option bundles
// ---------------------------------------------------------------------------

struct PrepArgs {
    std::string trends;
    std::string annual_us;
    std::string annual_eu;
    int ref_year = 2019;
    std::string output;
    std::string annual_output;
};

struct OrderArg {
    int p = 12;
    int d = 1;
    int q = 1;
};

struct SimArgs {
    int trials = 100;
    std::string fleet_stat = "sum";
    std::vector<std::string> params;
};

OrderArg parse_order(const std::string& text) {
    OrderArg order;
    if (std::sscanf(text.c_str(), "%d,%d,%d", &order.p, &order.d, &order.q) != 3) {
        throw CLI::ValidationError("--order", "expected p,d,q");
    }
    return order;
}

impact::FleetStat parse_fleet_stat(const std::string& text) {
    if (text == "sum") return impact::FleetStat::sum;
    if (text == "mean") return impact::FleetStat::mean;
    throw CLI::ValidationError("--fleet-stat", "expected 'sum' or 'mean'");
}

impact::SimSpec build_spec(const SimArgs& args, std::uint64_t seed) {
    impact::SimSpec spec;
    spec.trials = args.trials;
    spec.fleet_stat = parse_fleet_stat(args.fleet_stat);
    spec.seed = seed;
    for (const std::string& text : args.params) {
        const auto eq = text.find('=');
        const auto comma = text.find(',', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || comma == std::string::npos) {
            throw CLI::ValidationError("--param", "expected name=mean,std");
        }
        const std::string name = text.substr(0, eq);
        double mean = 0.0;
        double std_dev = 0.0;
        try {
            mean = std::stod(text.substr(eq + 1, comma - eq - 1));
            std_dev = std::stod(text.substr(comma + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--param", "expected name=mean,std");
        }
        impact::NormalParam* target = nullptr;
        if (name == "lifespan") target = &spec.lifespan_months;
        else if (name == "miles") target = &spec.miles_per_month;
        else if (name == "car") target = &spec.car_emissions;
        else if (name == "bike") target = &spec.bike_emissions;
        else if (name == "cals") target = &spec.cals_per_mile;
        else throw CLI::ValidationError("--param", "unknown parameter '" + name + "'");
        target->mean = mean;
        target->std = std_dev;
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

double year_fraction(MonthKey key) {
    return static_cast<double>(key.year) + (key.month - 1) / 12.0;
}

AnnualSeries run_prep(const PrepArgs& args, MonthlySeries* monthly_out) {
    const TrendTable trends = ingest::read_trends(args.trends);
    const AnnualSeries us = ingest::read_annual(args.annual_us);
    const AnnualSeries eu = ingest::read_annual(args.annual_eu);
    const auto inputs = prep::MergeInputs::from_series(eu, us, args.ref_year);
    AnnualSeries merged = prep::merge_series(inputs, us);
    MonthlySeries monthly = prep::disaggregate(merged, trends);
    ingest::write_monthly(monthly, args.output);
    if (!args.annual_output.empty()) ingest::write_annual(merged, args.annual_output);
    if (monthly_out != nullptr) *monthly_out = std::move(monthly);
    return merged;
}

void print_adf_row(const char* label, const diagnostics::AdfResult& r) {
    std::printf("%-14s %12.6f %12.6g %6d %6d\n", label, r.statistic, r.p_value, r.lags_used,
                r.n_obs);
}

void run_diagnose(const MonthlySeries& monthly, std::optional<int> max_lag, int lags) {
    const auto raw = monthly.values();
    const auto logged = series::log_transform(raw);
    const auto diffed = series::difference(logged, 1);

    std::printf("== Augmented Dickey-Fuller (constant-only) ==\n");
    std::printf("%-14s %12s %12s %6s %6s\n", "series", "statistic", "p-value", "lags", "nobs");
    const auto adf_raw = diagnostics::adf_test(raw, max_lag);
    print_adf_row("raw", adf_raw);
    const auto adf_diff = diagnostics::adf_test(diffed.values, max_lag);
    print_adf_row("log, diff 1", adf_diff);
    std::printf("critical values (log, diff 1): 1%% %.4f  5%% %.4f  10%% %.4f\n",
                adf_diff.critical_values.at(1), adf_diff.critical_values.at(5),
                adf_diff.critical_values.at(10));

    const auto lb = diagnostics::ljung_box(diffed.values, lags, 0);
    std::printf("== Ljung-Box (log, diff 1) ==\n");
    std::printf("m=%d  Q=%.6f  dof=%d  p-value=%.6g\n", lb.m, lb.q, lb.dof, lb.p_value);

    std::printf("== Kurtosis (raw) ==\n");
    std::printf("kurtosis=%.6f  excess=%.6f\n", diagnostics::kurtosis(raw),
                diagnostics::excess_kurtosis(raw));
}

arima::ArimaModel run_fit(const MonthlySeries& monthly, const OrderArg& order,
                          double train_fraction, bool log_scale, std::uint64_t seed,
                          bool print_table) {
    std::vector<double> values(monthly.values().begin(), monthly.values().end());
    if (log_scale) values = series::log_transform(values);
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(values.size())));
    const arima::ArimaOrder arima_order{order.p, order.d, order.q};
    const auto model =
        arima::fit(std::span<const double>(values).subspan(0, n_train), arima_order, seed);

    if (print_table) {
        std::printf("ARIMA(%d,%d,%d) fit on %s series (train %zu of %zu points)\n", order.p,
                    order.d, order.q, log_scale ? "log" : "raw", n_train, values.size());
        std::printf("converged: %s\n", model.converged ? "yes" : "no (best found returned)");
        std::printf("%-12s %14.8f\n", "intercept", model.intercept);
        for (std::size_t i = 0; i < model.phi.size(); ++i) {
            std::printf("phi[%-2zu]      %14.8f\n", i + 1, model.phi[i]);
        }
        for (std::size_t j = 0; j < model.theta.size(); ++j) {
            std::printf("theta[%-2zu]    %14.8f\n", j + 1, model.theta[j]);
        }
        std::printf("%-12s %14.8g\n", "sigma2", model.sigma2);
        std::printf("%-12s %14.6f\n", "loglik(CSS)", model.loglik_css);
        const int fitted = order.p + order.q;
        const int m = std::max(10, fitted + 1);
        if (static_cast<std::size_t>(m) + 1 <= model.residuals.size()) {
            const auto lb = diagnostics::ljung_box(model.residuals, m, fitted);
            std::printf("Ljung-Box residuals: m=%d Q=%.6f dof=%d p-value=%.6g\n", lb.m, lb.q,
                        lb.dof, lb.p_value);
        }
    }
    return model;
}

void write_forecast_csv(const arima::PipelineResult& result, const fs::path& path) {
    std::ostringstream out;
    out << "Month,Mean,Lower,Upper\n";
    for (std::size_t i = 0; i < result.forecast.mean.size(); ++i) {
        const MonthKey key = MonthKey::from_index(result.start.index() + static_cast<long>(i));
        out << key.str() << ',' << ingest::format_double(result.forecast.mean[i]) << ','
            << ingest::format_double(result.forecast.lower[i]) << ','
            << ingest::format_double(result.forecast.upper[i]) << '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << out.str())) throw Error(errc::io_write, "cannot write " + path.string());
}

void write_forecast_plot(const MonthlySeries& history, const arima::PipelineResult& result,
                         const fs::path& path) {
    svg::PlotSeries hist{"history", {}, {}};
    for (std::size_t i = 0; i < history.size(); ++i) {
        hist.x.push_back(year_fraction(history.key(i)));
        hist.y.push_back(history[i]);
    }
    svg::PlotSeries mean{"forecast", {}, {}};
    svg::PlotSeries lower{"lower", {}, {}};
    svg::PlotSeries upper{"upper", {}, {}};
    for (std::size_t i = 0; i < result.forecast.mean.size(); ++i) {
        const double x =
            year_fraction(MonthKey::from_index(result.start.index() + static_cast<long>(i)));
        mean.x.push_back(x);
        mean.y.push_back(result.forecast.mean[i]);
        lower.x.push_back(x);
        lower.y.push_back(result.forecast.lower[i]);
        upper.x.push_back(x);
        upper.y.push_back(result.forecast.upper[i]);
    }
    svg::PlotOptions options;
    options.title = "US e-bike sales forecast";
    options.x_label = "year";
    options.y_label = "thousands of units / month";
    svg::emit_plot({hist, mean, lower, upper}, path, options);
}

arima::PipelineResult run_forecast(const MonthlySeries& monthly, const OrderArg& order,
                                   int horizon, double train_fraction, double confidence,
                                   std::uint64_t seed, const fs::path& output,
                                   const fs::path& annual_output, const fs::path& plot) {
    const arima::ArimaOrder arima_order{order.p, order.d, order.q};
    auto result =
        arima::forecast_pipeline(monthly, arima_order, horizon, train_fraction, seed, confidence);
    write_forecast_csv(result, output);
    if (!annual_output.empty()) ingest::write_annual(result.annual, annual_output);
    if (!plot.empty()) write_forecast_plot(monthly, result, plot);
    return result;
}

forest::ForestModel run_importance(const FactorTable& table, double test_fraction, int trees,
                                   std::uint64_t seed, std::uint64_t split_seed) {
    const auto split = forest::split_data(table, test_fraction, split_seed);
    const auto model = forest::fit_forest(split.train, trees, seed);

    std::vector<std::size_t> order(table.n_features());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return model.importances[a] != model.importances[b]
                   ? model.importances[a] > model.importances[b]
                   : a < b;
    });
    std::printf("%-44s %s\n", "variable", "coefficient");
    for (std::size_t i : order) {
        std::printf("%-44s %.6f\n", table.feature_names()[i].c_str(), model.importances[i]);
    }
    const auto metrics = forest::evaluate(model, split.test);
    std::printf("MAE %.4f (thousands)  MAPE %.2f%%  accuracy %.2f%%\n", metrics.mae,
                metrics.mape, metrics.accuracy);
    return model;
}

void write_trials_csv(const impact::SimResult& result, const fs::path& path) {
    std::ostringstream out;
    out << "Trial,Month,Value\n";
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        const auto& series = result.trials[t].monthly;
        for (std::size_t i = 0; i < series.size(); ++i) {
            out << t << ',' << series.key(i).str() << ',' << ingest::format_double(series[i])
                << '\n';
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << out.str())) throw Error(errc::io_write, "cannot write " + path.string());
}

void write_trials_plot(const impact::SimResult& result, const std::string& title,
                       const fs::path& path) {
    std::vector<svg::PlotSeries> series;
    series.reserve(result.trials.size());
    for (const auto& trial : result.trials) {
        svg::PlotSeries s;
        for (std::size_t i = 0; i < trial.monthly.size(); ++i) {
            s.x.push_back(year_fraction(trial.monthly.key(i)));
            s.y.push_back(trial.monthly[i]);
        }
        series.push_back(std::move(s));
    }
    svg::PlotOptions options;
    options.title = title;
    options.x_label = "year";
    svg::emit_plot(series, path, options);
}

void run_simulate(const MonthlySeries& monthly, const impact::SimSpec& spec,
                  const fs::path& outdir) {
    fs::create_directories(outdir);
    const auto co2 = impact::run_co2(monthly, spec);
    const auto cal = impact::run_calories(monthly, spec);
    write_trials_csv(co2, outdir / "co2_trials.csv");
    write_trials_csv(cal, outdir / "kcal_trials.csv");
    write_trials_plot(co2, "CO2 saved per month (kg x fleet thousands)",
                      outdir / "co2_trials.svg");
    write_trials_plot(cal, "Kilocalories burned per month (x fleet thousands)",
                      outdir / "kcal_trials.svg");

    // Reported units multiply out the series' thousands scaling: plain kg
    // and kcal per trailing-12-month window.
    std::vector<int> years = co2.covered_years();
    const std::vector<int> cal_years = cal.covered_years();
    std::erase_if(years, [&](int y) {
        return std::find(cal_years.begin(), cal_years.end(), y) == cal_years.end();
    });
    std::ostringstream out;
    out << "Year,CO2kg_mean,CO2kg_std,kCal_mean,kCal_std\n";
    for (int year : years) {
        const auto co2_summary = impact::summarize(co2, year);
        const auto cal_summary = impact::summarize(cal, year);
        out << year << ',' << ingest::format_double(co2_summary.mean * 1000.0) << ','
            << ingest::format_double(co2_summary.std * 1000.0) << ','
            << ingest::format_double(cal_summary.mean * 1000.0) << ','
            << ingest::format_double(cal_summary.std * 1000.0) << '\n';
    }
    const fs::path summary_path = outdir / "impact_summary.csv";
    std::ofstream f(summary_path, std::ios::binary);
    if (!f || !(f << out.str())) {
        throw Error(errc::io_write, "cannot write " + summary_path.string());
    }
    if (co2.negative_factor_trials > 0) {
        std::fprintf(stderr, "note: %d trial(s) drew E_car < E_bike (negative savings kept)\n",
                     co2.negative_factor_trials);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"e-bike sales analysis pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --seed appear after the subcommand name

    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "base RNG seed")->envname("EBIKECAST_SEED");

    // --- prep ---------------------------------------------------------------
    PrepArgs prep_args;
    auto* cmd_prep = app.add_subcommand("prep", "reconstruct annual sales and split to months");
    cmd_prep->add_option("--trends", prep_args.trends, "monthly search-trend CSV")->required();
    cmd_prep->add_option("--annual-us", prep_args.annual_us, "known U.S. annual sales CSV")
        ->required();
    cmd_prep->add_option("--annual-eu", prep_args.annual_eu, "European annual sales CSV")
        ->required();
    cmd_prep->add_option("--ref-year", prep_args.ref_year, "reference year for scaling");
    cmd_prep->add_option("--output", prep_args.output, "monthly sales CSV to write")->required();
    cmd_prep->add_option("--annual-output", prep_args.annual_output,
                         "also write the merged annual CSV here");

    // --- diagnose -----------------------------------------------------------
    std::string diag_input;
    int diag_max_lag = -1;
    int diag_lags = 10;
    auto* cmd_diag = app.add_subcommand("diagnose", "stationarity and shape statistics");
    cmd_diag->add_option("--input", diag_input, "monthly sales CSV")->required();
    cmd_diag->add_option("--max-lag", diag_max_lag, "ADF lag bound (default: rule of thumb)");
    cmd_diag->add_option("--lags", diag_lags, "Ljung-Box lag count");

    // --- fit ----------------------------------------------------------------
    std::string fit_input;
    std::string fit_order_text = "12,1,1";
    double fit_train_fraction = 0.8;
    bool fit_no_log = false;
    auto* cmd_fit = app.add_subcommand("fit", "estimate an ARIMA model and print diagnostics");
    cmd_fit->add_option("--input", fit_input, "monthly sales CSV")->required();
    cmd_fit->add_option("--order", fit_order_text, "p,d,q");
    cmd_fit->add_option("--train-fraction", fit_train_fraction, "chronological prefix to fit on");
    cmd_fit->add_flag("--no-log", fit_no_log, "fit on the raw scale instead of logs");

    // --- forecast -----------------------------------------------------------
    std::string fc_input;
    std::string fc_order_text = "12,1,1";
    int fc_horizon = 137;
    double fc_train_fraction = 0.8;
    double fc_confidence = 0.95;
    std::string fc_output;
    std::string fc_annual_output;
    std::string fc_plot;
    auto* cmd_fc = app.add_subcommand("forecast", "forecast monthly sales and annual totals");
    cmd_fc->add_option("--input", fc_input, "monthly sales CSV")->required();
    cmd_fc->add_option("--order", fc_order_text, "p,d,q");
    cmd_fc->add_option("--horizon", fc_horizon, "months to forecast");
    cmd_fc->add_option("--train-fraction", fc_train_fraction, "chronological prefix to fit on");
    cmd_fc->add_option("--confidence", fc_confidence, "interval coverage in (0,1)");
    cmd_fc->add_option("--output", fc_output, "forecast CSV (Month,Mean,Lower,Upper)")
        ->required();
    cmd_fc->add_option("--annual-output", fc_annual_output, "annual summary CSV (Year,Sales)");
    cmd_fc->add_option("--plot", fc_plot, "forecast SVG path");

    // --- importance ---------------------------------------------------------
    std::string imp_input;
    double imp_test_fraction = 0.3;
    int imp_trees = 1000;
    std::uint64_t imp_split_seed = 1;
    auto* cmd_imp = app.add_subcommand("importance", "random-forest driver ranking");
    cmd_imp->add_option("--input", imp_input, "factors CSV")->required();
    cmd_imp->add_option("--test-fraction", imp_test_fraction, "held-out fraction");
    cmd_imp->add_option("--trees", imp_trees, "number of trees");
    cmd_imp->add_option("--split-seed", imp_split_seed, "seed for the train/test shuffle");

    // --- simulate -----------------------------------------------------------
    std::string sim_input;
    std::string sim_outdir;
    SimArgs sim_args;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo CO2 and calorie impacts");
    cmd_sim->add_option("--input", sim_input, "monthly sales CSV")->required();
    cmd_sim->add_option("--output", sim_outdir, "output directory")->required();
    cmd_sim->add_option("--trials", sim_args.trials, "Monte Carlo trials");
    cmd_sim->add_option("--fleet-stat", sim_args.fleet_stat, "sum (default) or mean");
    cmd_sim->add_option("--param", sim_args.params,
                        "override name=mean,std (lifespan|miles|car|bike|cals)");

    // --- pipeline -----------------------------------------------------------
    PrepArgs pl_prep;
    std::string pl_outdir;
    std::string pl_order_text = "12,1,1";
    int pl_horizon = 137;
    double pl_train_fraction = 0.8;
    double pl_confidence = 0.95;
    std::string pl_factors;
    double pl_test_fraction = 0.3;
    int pl_trees = 1000;
    std::uint64_t pl_split_seed = 1;
    SimArgs pl_sim;
    auto* cmd_pl = app.add_subcommand("pipeline", "run every stage into an output directory");
    cmd_pl->add_option("--trends", pl_prep.trends, "monthly search-trend CSV")->required();
    cmd_pl->add_option("--annual-us", pl_prep.annual_us, "known U.S. annual sales CSV")
        ->required();
    cmd_pl->add_option("--annual-eu", pl_prep.annual_eu, "European annual sales CSV")->required();
    cmd_pl->add_option("--factors", pl_factors, "factors CSV")->required();
    cmd_pl->add_option("--output", pl_outdir, "output directory")->required();
    cmd_pl->add_option("--ref-year", pl_prep.ref_year, "reference year for scaling");
    cmd_pl->add_option("--order", pl_order_text, "p,d,q");
    cmd_pl->add_option("--horizon", pl_horizon, "months to forecast");
    cmd_pl->add_option("--train-fraction", pl_train_fraction, "chronological prefix to fit on");
    cmd_pl->add_option("--confidence", pl_confidence, "interval coverage in (0,1)");
    cmd_pl->add_option("--test-fraction", pl_test_fraction, "forest held-out fraction");
    cmd_pl->add_option("--trees", pl_trees, "number of trees");
    cmd_pl->add_option("--split-seed", pl_split_seed, "seed for the train/test shuffle");
    cmd_pl->add_option("--trials", pl_sim.trials, "Monte Carlo trials");
    cmd_pl->add_option("--fleet-stat", pl_sim.fleet_stat, "sum (default) or mean");
    cmd_pl->add_option("--param", pl_sim.params,
                       "override name=mean,std (lifespan|miles|car|bike|cals)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(errc::usage);
    }

    try {
        if (cmd_prep->parsed()) {
            run_prep(prep_args, nullptr);
        } else if (cmd_diag->parsed()) {
            const auto monthly = ingest::read_monthly(diag_input);
            run_diagnose(monthly,
                         diag_max_lag >= 0 ? std::optional<int>(diag_max_lag) : std::nullopt,
                         diag_lags);
        } else if (cmd_fit->parsed()) {
            const auto monthly = ingest::read_monthly(fit_input);
            run_fit(monthly, parse_order(fit_order_text), fit_train_fraction, !fit_no_log, seed,
                    true);
        } else if (cmd_fc->parsed()) {
            const auto monthly = ingest::read_monthly(fc_input);
            run_forecast(monthly, parse_order(fc_order_text), fc_horizon, fc_train_fraction,
                         fc_confidence, seed, fc_output, fc_annual_output, fc_plot);
        } else if (cmd_imp->parsed()) {
            const auto table = ingest::read_factors(imp_input);
            run_importance(table, imp_test_fraction, imp_trees, seed, imp_split_seed);
        } else if (cmd_sim->parsed()) {
            const auto monthly = ingest::read_monthly(sim_input);
            run_simulate(monthly, build_spec(sim_args, seed), sim_outdir);
        } else if (cmd_pl->parsed()) {
            const fs::path outdir = pl_outdir;
            fs::create_directories(outdir);
            pl_prep.output = (outdir / "monthly.csv").string();
            pl_prep.annual_output = (outdir / "annual_merged.csv").string();
            MonthlySeries monthly;
            run_prep(pl_prep, &monthly);
            run_diagnose(monthly, std::nullopt, 10);
            const OrderArg order = parse_order(pl_order_text);
            run_fit(monthly, order, pl_train_fraction, true, seed, true);
            run_forecast(monthly, order, pl_horizon, pl_train_fraction, pl_confidence, seed,
                         outdir / "forecast.csv", outdir / "forecast_annual.csv",
                         outdir / "forecast.svg");
            const auto table = ingest::read_factors(pl_factors);
            run_importance(table, pl_test_fraction, pl_trees, seed, pl_split_seed);
            run_simulate(monthly, build_spec(pl_sim, seed), outdir);
        }
    } catch (const CLI::ParseError& e) {
        // Late validation (e.g. a malformed --param value).
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(errc::usage);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
