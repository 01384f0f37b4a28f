#pragma once

#include <functional>
#include <vector>

namespace spillnet {

struct NelderMeadOptions {
    int max_evals = 2000;
    double x_tol = 1e-8;   // simplex size
    double f_tol = 1e-10;  // spread of function values
    double initial_step = 0.1;
    int restarts = 1;  // re-seed simplex at the incumbent after convergence
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

// Derivative-free simplex minimizer. Deterministic: no randomness, fixed
// tie handling. Objectives signal infeasible points by returning a huge
// value (>= 1e99), which the simplex walks away from.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& opt = {});

}  // namespace spillnet
