// Acceptance suite: runs every pipeline-level criterion at its stated
// tolerance and prints one PASS/FAIL line each. Exit code is the number of
// failed criteria.
//
// Usage: acceptance <data-dir> <ebikecast-binary>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ebikecast/arima.hpp"
#include "ebikecast/diagnostics.hpp"
#include "ebikecast/forest.hpp"
#include "ebikecast/impact.hpp"
#include "ebikecast/ingest.hpp"
#include "ebikecast/prep.hpp"
#include "ebikecast/rng.hpp"

namespace fs = std::filesystem;
using namespace ebikecast;
using Clock = std::chrono::steady_clock;

namespace {

fs::path g_data_dir;
fs::path g_binary;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

MonthlySeries bundled_monthly() {
    const auto trends = ingest::read_trends(g_data_dir / "ElectricBikesGoogleSearchTrends.csv");
    const auto us = ingest::read_annual(g_data_dir / "AnnualUSEbikeSales.csv");
    const auto eu = ingest::read_annual(g_data_dir / "EuropeanAnnualEbikeSales.csv");
    const auto merged = prep::merge_series(prep::MergeInputs::from_series(eu, us, 2019), us);
    return prep::disaggregate(merged, trends);
}

// --- criterion bodies -------------------------------------------------------

bool conservation(std::string& detail) {
    const auto start = Clock::now();
    const auto trends = ingest::read_trends(g_data_dir / "ElectricBikesGoogleSearchTrends.csv");
    const auto us = ingest::read_annual(g_data_dir / "AnnualUSEbikeSales.csv");
    const auto eu = ingest::read_annual(g_data_dir / "EuropeanAnnualEbikeSales.csv");
    const auto merged = prep::merge_series(prep::MergeInputs::from_series(eu, us, 2019), us);
    const auto monthly = prep::disaggregate(merged, trends);

    double worst = 0.0;
    for (std::size_t y = 0; y < merged.size(); ++y) {
        double total = 0.0;
        for (std::size_t m = 0; m < 12; ++m) total += monthly[y * 12 + m];
        worst = std::max(worst, std::abs(total - merged.value(y)) / merged.value(y));
    }
    const double elapsed = seconds_since(start);
    std::ostringstream oss;
    oss << "worst relative error " << worst << ", " << elapsed << " s";
    detail = oss.str();
    return worst <= 1e-9 && elapsed < 1.0;
}

bool adf_calibration(std::string& detail) {
    const auto start = Clock::now();
    const int replicates = 100;
    const std::size_t n = 500;
    int iid_rejects = 0;
    int walk_accepts = 0;
    for (int s = 0; s < replicates; ++s) {
        Rng rng = Rng::derive(1004, static_cast<std::uint64_t>(s));
        std::vector<double> iid(n);
        for (double& v : iid) v = rng.normal();
        if (diagnostics::adf_test(iid).p_value < 0.05) ++iid_rejects;

        std::vector<double> walk(n);
        double level = 0.0;
        for (double& v : walk) {
            level += rng.normal();
            v = level;
        }
        if (diagnostics::adf_test(walk).p_value > 0.05) ++walk_accepts;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream oss;
    oss << "iid rejected " << iid_rejects << "/100, walks kept " << walk_accepts << "/100, "
        << elapsed << " s";
    detail = oss.str();
    return iid_rejects >= 95 && walk_accepts >= 95 && elapsed < 30.0;
}

bool ljung_box_calibration(std::string& detail) {
    int rejections = 0;
    const int replicates = 1000;
    for (int s = 0; s < replicates; ++s) {
        Rng rng = Rng::derive(2002, static_cast<std::uint64_t>(s));
        std::vector<double> noise(200);
        for (double& v : noise) v = rng.normal();
        if (diagnostics::ljung_box(noise, 10, 0).p_value < 0.05) ++rejections;
    }
    const double rate = 100.0 * rejections / replicates;

    const auto hand = diagnostics::ljung_box_from_acf(std::vector<double>{0.5}, 5, 0);
    const double expected = 5.0 * 7.0 * 0.25 / 4.0;  // n(n+2) * r1^2 / (n-1)
    const bool hand_exact = hand.q == expected;

    std::ostringstream oss;
    oss << "rejection rate " << rate << "%, hand case Q=" << hand.q;
    detail = oss.str();
    return rate >= 2.0 && rate <= 8.0 && hand_exact;
}

bool arima_recovery(std::string& detail) {
    const auto start = Clock::now();
    const std::size_t n = 500;
    int ar_hits = 0;
    int ma_hits = 0;
    for (int s = 0; s < 20; ++s) {
        Rng rng = Rng::derive(3003, static_cast<std::uint64_t>(s));
        std::vector<double> ar(n);
        double level = 0.0;
        for (double& v : ar) {
            level = 0.6 * level + rng.normal();
            v = level;
        }
        const auto ar_model = arima::fit(ar, arima::ArimaOrder{1, 0, 0}, 42);
        if (std::abs(ar_model.phi[0] - 0.6) <= 0.10) ++ar_hits;

        std::vector<double> ma(n);
        double prev = rng.normal();
        for (double& v : ma) {
            const double eps = rng.normal();
            v = eps + 0.5 * prev;
            prev = eps;
        }
        const auto ma_model = arima::fit(ma, arima::ArimaOrder{0, 0, 1}, 42);
        if (std::abs(ma_model.theta[0] - 0.5) <= 0.10) ++ma_hits;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream oss;
    oss << "AR " << ar_hits << "/20, MA " << ma_hits << "/20 within 0.10, " << elapsed << " s";
    detail = oss.str();
    return ar_hits >= 18 && ma_hits >= 18 && elapsed < 60.0;
}

bool random_walk_identity(std::string& detail) {
    arima::ArimaModel model;
    model.order = arima::ArimaOrder{0, 1, 0};
    model.intercept = 0.0;
    model.sigma2 = 1.0;
    model.train_tail = {87.125};
    const auto fc = arima::forecast(model, 137, 0.95);
    for (double v : fc.mean) {
        if (v != 87.125) {
            detail = "forecast departed from the last observation";
            return false;
        }
    }
    detail = "all 137 means equal the last observation exactly";
    return true;
}

bool forecast_pipeline_band(std::string& detail) {
    const auto monthly = bundled_monthly();
    const auto result =
        arima::forecast_pipeline(monthly, arima::ArimaOrder{12, 1, 1}, 137, 0.8, 42);
    if (!result.annual.contains(2025) || !result.annual.contains(2028)) {
        detail = "2025/2028 not fully covered by the horizon";
        return false;
    }
    const double y2025 = result.annual.at(2025);
    const double y2028 = result.annual.at(2028);
    std::ostringstream oss;
    oss << "2025 = " << y2025 << ", 2028 = " << y2028 << " (thousands)";
    detail = oss.str();
    return y2025 > 0.0 && y2028 > y2025 && y2025 >= 300.0 && y2025 <= 6000.0 &&
           y2028 >= 300.0 && y2028 <= 6000.0;
}

FactorTable planted_signal(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> years;
    std::vector<double> features;
    std::vector<double> target;
    for (std::size_t i = 0; i < 200; ++i) {
        years.push_back(static_cast<int>(i));
        const double x1 = rng.uniform(0.0, 1.0);
        features.push_back(x1);
        for (int f = 0; f < 3; ++f) features.push_back(rng.uniform(0.0, 1.0));
        target.push_back(10.0 * x1 + 0.1 * rng.normal());
    }
    return FactorTable(std::move(years), {"x1", "x2", "x3", "x4"}, std::move(features),
                       std::move(target));
}

bool planted_importance(std::string& detail) {
    double lowest = 1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto table = planted_signal(seed);
        const auto model = forest::fit_forest(table, 200, seed);
        lowest = std::min(lowest, model.importances[0]);
    }
    std::ostringstream oss;
    oss << "minimum importance(x1) over 5 seeds = " << lowest;
    detail = oss.str();
    return lowest >= 0.8;
}

bool table2_ranking(std::string& detail) {
    const auto table = ingest::read_factors(g_data_dir / "factors_annual.csv");
    double worst_combined = 1.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto split = forest::split_data(table, 0.3, 1);
        const auto model = forest::fit_forest(split.train, 1000, seed);
        const auto& imp = model.importances;
        // Columns: 0 environment, 1 gas, 2 disposable income, 3 popularity.
        const double combined = imp[2] + imp[3];
        worst_combined = std::min(worst_combined, combined);
        const bool top_two = imp[2] > imp[0] && imp[2] > imp[1] && imp[3] > imp[0] &&
                             imp[3] > imp[1];
        if (!top_two) {
            std::ostringstream oss;
            oss << "seed " << seed << ": income/popularity not the top two (" << imp[0] << ", "
                << imp[1] << ", " << imp[2] << ", " << imp[3] << ")";
            detail = oss.str();
            return false;
        }
    }
    std::ostringstream oss;
    oss << "income+popularity combined >= " << worst_combined << " over 10 seeds";
    detail = oss.str();
    return worst_combined >= 0.75;
}

bool monte_carlo_moments(std::string& detail) {
    // Zero-variance degeneracy against the closed forms.
    impact::SimSpec zero;
    zero.lifespan_months.std = 0.0;
    zero.miles_per_month.std = 0.0;
    zero.car_emissions.std = 0.0;
    zero.bike_emissions.std = 0.0;
    zero.cals_per_mile.std = 0.0;
    zero.trials = 2;
    const double s = 4.0;
    const MonthlySeries sales(MonthKey{2006, 1}, std::vector<double>(96, s));
    const double tc_expected = (431.2 - 9.01) * (48.0 * s) * 63.33 / 1000.0;
    const double tcal_expected = 21.0 * (48.0 * s) * 63.33 / 1000.0;
    for (const auto& trial : impact::run_co2(sales, zero).trials) {
        for (std::size_t i = 0; i < trial.monthly.size(); ++i) {
            if (std::abs(trial.monthly[i] - tc_expected) > 1e-9 * tc_expected) {
                detail = "CO2 zero-variance value diverged from the closed form";
                return false;
            }
        }
    }
    for (const auto& trial : impact::run_calories(sales, zero).trials) {
        for (std::size_t i = 0; i < trial.monthly.size(); ++i) {
            if (std::abs(trial.monthly[i] - tcal_expected) > 1e-9 * tcal_expected) {
                detail = "calorie zero-variance value diverged from the closed form";
                return false;
            }
        }
    }

    // Moment convergence: mean over 10,000 trials of (E_car - E_bike) * d.
    impact::SimSpec spec;
    spec.trials = 10000;
    spec.seed = 4001;
    const MonthlySeries unit(MonthKey{2006, 1}, std::vector<double>(150, 1.0));
    const auto result = impact::run_co2(unit, spec);
    double mean = 0.0;
    for (const auto& t : result.trials) mean += t.factor * t.miles;
    mean /= static_cast<double>(result.trials.size());
    double ss = 0.0;
    for (const auto& t : result.trials) {
        ss += (t.factor * t.miles - mean) * (t.factor * t.miles - mean);
    }
    const double se = std::sqrt(ss / static_cast<double>(result.trials.size() - 1)) /
                      std::sqrt(static_cast<double>(result.trials.size()));
    const double analytic = 422.19 * 63.33;
    std::ostringstream oss;
    oss << "closed forms exact; mean " << mean << " vs " << analytic << " (|z| = "
        << std::abs(mean - analytic) / se << ")";
    detail = oss.str();
    return std::abs(mean - analytic) <= 3.0 * se;
}

int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return status < 0 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

bool pipeline_determinism(std::string& detail) {
    const auto start = Clock::now();
    static const unsigned tag = std::random_device{}();
    const fs::path base = fs::temp_directory_path() / ("ebikecast_accept_" + std::to_string(tag));
    fs::create_directories(base);

    const std::string common = "'" + g_binary.string() + "' pipeline --trends '" +
                               (g_data_dir / "ElectricBikesGoogleSearchTrends.csv").string() +
                               "' --annual-us '" +
                               (g_data_dir / "AnnualUSEbikeSales.csv").string() +
                               "' --annual-eu '" +
                               (g_data_dir / "EuropeanAnnualEbikeSales.csv").string() +
                               "' --factors '" + (g_data_dir / "factors_annual.csv").string() +
                               "' --seed 42 --output '";
    const fs::path run1 = base / "run1";
    const fs::path run2 = base / "run2";
    bool ok = run_cmd(common + run1.string() + "' > '" + (base / "out1.txt").string() +
                      "' 2>/dev/null") == 0;
    ok = ok && run_cmd(common + run2.string() + "' > '" + (base / "out2.txt").string() +
                       "' 2>/dev/null") == 0;
    if (!ok) {
        detail = "pipeline run failed";
        fs::remove_all(base);
        return false;
    }

    std::size_t files = 0;
    bool identical = slurp(base / "out1.txt") == slurp(base / "out2.txt");
    for (const auto& entry : fs::directory_iterator(run1)) {
        ++files;
        const auto other = run2 / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            identical = false;
            detail = "mismatch in " + entry.path().filename().string();
        }
    }
    const double elapsed = seconds_since(start);
    fs::remove_all(base);
    if (!identical) return false;

    std::ostringstream oss;
    oss << files << " output files byte-identical across runs, " << elapsed << " s total";
    detail = oss.str();
    return files >= 10 && elapsed < 60.0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <data-dir> <ebikecast-binary>\n");
        return 64;
    }
    g_data_dir = argv[1];
    g_binary = argv[2];

    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria{
        {"disaggregation conservation (1e-9, <1s)", conservation},
        {"ADF calibration (100 replicates, n=500, <30s)", adf_calibration},
        {"Ljung-Box calibration (1000 seeds) + hand-computed Q", ljung_box_calibration},
        {"ARIMA parameter recovery (20 seeds each, <60s)", arima_recovery},
        {"random-walk forecast identity (exact)", random_walk_identity},
        {"forecast pipeline band: 2025/2028 in [300,6000], increasing", forecast_pipeline_band},
        {"forest planted signal >= 0.8 (5 seeds)", planted_importance},
        {"driver ranking: income+popularity top two, >= 0.75 (10 seeds)", table2_ranking},
        {"Monte Carlo degeneracy + moment convergence (3 SE)", monte_carlo_moments},
        {"pipeline determinism: byte-identical files (<60s)", pipeline_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %zu. %s — %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
