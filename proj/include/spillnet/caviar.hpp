#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "spillnet/optim.hpp"

namespace spillnet {

// Asymmetric-slope conditional autoregressive quantile:
//   f_t = g1 + g2 f_{t-1} + g3 max(r_{t-1},0) + g4 (-min(r_{t-1},0)),
// estimated by minimizing the tau check loss. The recursion starts at the
// empirical tau-quantile of the first `burn_in` observations.
struct CaviarFit {
    double tau = 0.05;
    std::array<double, 4> gammas{};  // intercept, AR, positive-part, negative-part
    std::vector<double> var_series;
    double objective = 0.0;       // in-sample check loss
    double violation_rate = 0.0;  // share of r_t < f_t over t >= 2
    bool explosive = false;       // |g2| >= 1 at the optimum
};

struct CaviarOptions {
    int n_starts = 10000;  // random candidates screened
    int refine_top = 10;   // best candidates polished with Nelder-Mead
    int burn_in = 100;
    std::uint64_t seed = 1;
    NelderMeadOptions refine{.max_evals = 2000, .restarts = 1};
};

CaviarFit fit_caviar(std::span<const double> r, double tau, const CaviarOptions& options = {});

// Check loss of an explicit parameter vector; exposed for the lattice
// oracle tests.
double caviar_loss(std::span<const double> r, double tau, const std::array<double, 4>& gammas,
                   int burn_in = 100);

}  // namespace spillnet
