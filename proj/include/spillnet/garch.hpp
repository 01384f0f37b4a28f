#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "spillnet/distributions.hpp"
#include "spillnet/exec.hpp"
#include "spillnet/series.hpp"

namespace spillnet {

enum class VarianceFamily { Standard, EGARCH, GJR };

std::string to_string(VarianceFamily f);

struct GarchSpec {
    int ar_order = 0;     // k in the mean equation
    int ma_order = 0;     // q in the mean equation
    int arch_order = 1;   // m in the variance equation
    int garch_order = 1;  // s in the variance equation
    VarianceFamily family = VarianceFamily::Standard;
    InnovationDist dist = InnovationDist::Gaussian;

    int n_params() const;
    std::string name() const;
};

struct GarchFit {
    GarchSpec spec;
    // phi0, phi_1..k, xi_1..q
    Eigen::VectorXd mean_params;
    // Standard: omega0, arch_1..m, garch_1..s
    // GJR:      omega0, arch_1..m, asym_1..m, garch_1..s
    // EGARCH:   omega0, size_1..m, sign_1..m, garch_1..s  (log-variance scale)
    Eigen::VectorXd variance_params;
    Eigen::VectorXd dist_params;  // shape, skew (as applicable)
    double log_likelihood = 0.0;
    double bic = 0.0;
    std::vector<double> cond_vol;      // sigma_t, same units as returns
    std::vector<double> innovations;   // a_t
    bool converged = false;
};

struct GarchFitOptions {
    int max_evals = 4000;
    int restarts = 1;
    bool throw_on_nonconvergence = true;
};

struct GarchSearchOptions {
    // Stage-1 slots get a short optimizer budget; the best `polish_top`
    // candidates by BIC are refit with the full fit_garch budget.
    int screen_evals_base = 150;
    int screen_evals_per_param = 50;
    int polish_top = 20;
    GarchFitOptions polish;
    // Restricts the exhaustive grid (used by the pipeline's quick mode);
    // empty = the full 1296-spec grid.
    std::vector<GarchSpec> restrict_to;
};

// Maximum-likelihood fit of one ARMA(k,q)+GARCH-family(m,s) specification.
// Pre-sample variance is initialized at the sample variance of r.
GarchFit fit_garch(std::span<const double> r, const GarchSpec& spec,
                   const GarchFitOptions& options = {});

// Exhaustive BIC search over mean orders, variance orders, families and
// innovation distributions. Ties break toward fewer parameters, then
// enumeration order.
GarchFit select_garch(std::span<const double> r, const GarchSearchOptions& options = {},
                      const Exec& exec = Exec::openmp());

// The full enumeration grid in canonical order.
std::vector<GarchSpec> garch_search_grid();

IndicatorSeries conditional_log_volatility(const GarchFit& fit,
                                           std::vector<std::string> dates = {},
                                           std::string ticker = {});

}  // namespace spillnet
