#include "ebikecast/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ebikecast::optim {

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> start, const SimplexOptions& options) {
    const std::size_t dim = start.size();
    constexpr double alpha = 1.0;  // reflection
    constexpr double gamma = 2.0;  // expansion
    constexpr double rho = 0.5;    // contraction
    constexpr double sigma = 0.5;  // shrink

    std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(start.begin(), start.end()));
    for (std::size_t i = 0; i < dim; ++i) {
        double& coord = simplex[i + 1][i];
        coord = coord != 0.0 ? coord * 1.05 : 2.5e-4;
    }
    std::vector<double> fvals(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fvals[i] = objective(simplex[i]);
    int evals = static_cast<int>(dim) + 1;

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), candidate(dim);

    SimplexResult result;
    while (evals < options.max_iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim > 0 ? dim - 1 : 0];

        double f_spread = 0.0;
        double x_spread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            f_spread = std::max(f_spread, std::abs(fvals[i] - fvals[best]));
            for (std::size_t j = 0; j < dim; ++j) {
                x_spread = std::max(x_spread, std::abs(simplex[i][j] - simplex[best][j]));
            }
        }
        if (std::isfinite(fvals[best]) && f_spread <= options.f_tol && x_spread <= options.x_tol) {
            result.converged = true;
            break;
        }

        // Centroid of all points but the worst.
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double t) {
            for (std::size_t j = 0; j < dim; ++j) {
                candidate[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
            }
        };

        blend(alpha);
        const double f_reflect = objective(candidate);
        ++evals;
        if (f_reflect < fvals[order[0]]) {
            std::vector<double> reflect = candidate;
            blend(gamma);
            const double f_expand = objective(candidate);
            ++evals;
            if (f_expand < f_reflect) {
                simplex[worst] = candidate;
                fvals[worst] = f_expand;
            } else {
                simplex[worst] = std::move(reflect);
                fvals[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < fvals[second_worst]) {
            simplex[worst] = candidate;
            fvals[worst] = f_reflect;
            continue;
        }
        blend(f_reflect < fvals[worst] ? rho : -rho);
        const double f_contract = objective(candidate);
        ++evals;
        if (f_contract < std::min(f_reflect, fvals[worst])) {
            simplex[worst] = candidate;
            fvals[worst] = f_contract;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
            }
            fvals[i] = objective(simplex[i]);
            ++evals;
        }
    }

    const std::size_t best = static_cast<std::size_t>(
        std::min_element(fvals.begin(), fvals.end()) - fvals.begin());
    result.x = simplex[best];
    result.fval = fvals[best];
    result.iterations = evals;
    return result;
}

}  // namespace ebikecast::optim
