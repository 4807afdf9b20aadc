#pragma once

// Nelder-Mead simplex minimizer. Derivative-free, deterministic for a given
// starting point; the objective may return +infinity to reject a region.

#include <functional>
#include <span>
#include <vector>

namespace ebikecast::optim {

struct SimplexOptions {
    int max_iter = 4000;      // objective evaluations, roughly
    double x_tol = 1e-9;      // max coordinate spread of the simplex
    double f_tol = 1e-12;     // max objective spread of the simplex
};

struct SimplexResult {
    std::vector<double> x;
    double fval = 0.0;
    int iterations = 0;
    bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> start, const SimplexOptions& options = {});

}  // namespace ebikecast::optim
