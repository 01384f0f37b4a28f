#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spillnet/optim.hpp"

namespace spillnet {

// Conditional autoregressive expectile:
//   d_t = e0 + e1 d_{t-1} + e2 |r_{t-1}|,
// estimated by minimizing the psi-weighted squared loss. The recursion
// starts at the sample psi-expectile of the first `burn_in` observations.
struct CareFit {
    double psi = 0.5;
    std::array<double, 3> etas{};
    std::vector<double> expectile_series;
    double objective = 0.0;
    double violation_rate = 0.0;  // share of r_t < d_t over t >= 2
    bool explosive = false;
};

struct CareOptions {
    int n_starts = 10000;
    int refine_top = 10;
    int burn_in = 100;
    std::uint64_t seed = 1;
    NelderMeadOptions refine{.max_evals = 2000, .restarts = 1};
    // Skips the random screen and refines from this point only; the
    // calibration grid uses it to chain fits across neighboring psi.
    std::optional<std::array<double, 3>> warm_start;
};

CareFit fit_care(std::span<const double> r, double psi, const CareOptions& options = {});

double care_loss(std::span<const double> r, double psi, const std::array<double, 3>& etas,
                 int burn_in = 100);

// Expected shortfall implied by an expectile via the closed-form
// expectile/ES relationship at level tau.
double es_from_expectile(double expectile_value, double psi, double tau, double mean_return);

struct CaresFit {
    double tau = 0.05;
    double psi_star = 0.0;
    std::array<double, 3> etas{};
    std::vector<double> expectile_series;  // d(r_t, psi*)
    std::vector<double> es_series;         // ES series at level tau
    double violation_rate = 0.0;
    bool within_tolerance = true;  // |violation_rate - tau| <= 0.02 achieved
};

struct CaresOptions {
    double psi_start = 1e-4;
    double psi_step = 1e-4;
    double psi_max = 0.5;  // exclusive
    CareOptions care;      // multi-start options for the first grid point
    NelderMeadOptions chain{.max_evals = 400, .restarts = 0};
    // Once the violation rate has exceeded tau + early_stop_margin for
    // early_stop_patience consecutive grid points the scan stops; the rate
    // is nondecreasing in psi apart from estimation noise, so later points
    // cannot come closer to tau. Set early_stop_patience = 0 to scan the
    // whole grid.
    double early_stop_margin = 0.05;
    int early_stop_patience = 200;
};

// Walks the psi grid, fits the expectile recursion at each level, picks the
// psi whose in-sample violation share is closest to tau (smaller psi wins
// ties) and maps the winning expectile series to expected shortfall.
CaresFit calibrate_cares(std::span<const double> r, double tau, const CaresOptions& options = {});

}  // namespace spillnet
