#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spillnet/exec.hpp"

namespace spillnet {

// A date-aligned matrix of indicator values, one column per node.
struct SeriesPanel {
    std::vector<std::string> dates;
    std::vector<std::string> labels;
    Eigen::MatrixXd values;  // dates x nodes
};

using SupportMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;  // n x (n*p)

struct VarModel {
    int n = 0;
    int p = 0;
    Eigen::VectorXd alpha;               // n intercepts
    std::vector<Eigen::MatrixXd> betas;  // p lag matrices, each n x n
    Eigen::MatrixXd sigma;               // residual covariance, 1/(T-p) divisor
    Eigen::MatrixXd residuals;           // (T-p) x n
    std::optional<SupportMask> support_mask;
};

// MA coefficients Phi_0..Phi_H of the VAR's moving-average representation.
struct MaCoefficients {
    std::vector<Eigen::MatrixXd> phis;
};

struct LassoOptions {
    int folds = 5;
    int path_length = 100;
    double path_ratio = 1e-4;   // lambda_min = lambda_max * path_ratio
    double tol = 1e-10;         // coordinate-descent stop, max coefficient change
    int max_sweeps = 100000;
    bool standardize = true;
    // OneSE picks the sparsest lambda whose CV error is within
    // se_multiplier standard errors of the minimum; Min picks the raw CV
    // minimizer (which tends to overselect).
    enum class CvRule { OneSE, Min };
    CvRule cv_rule = CvRule::OneSE;
    double se_multiplier = 1.0;
    // When set, skips cross-validation and fits every equation at this
    // penalty (used by the unpenalized-limit and shutdown tests).
    std::optional<double> fixed_lambda;
};

VarModel estimate_var_ols(const SeriesPanel& panel, int p);

int select_lag_bic(const SeriesPanel& panel, int p_max);

VarModel estimate_var_lasso(const SeriesPanel& panel, int p, const LassoOptions& options = {},
                            const Exec& exec = Exec::serial());

VarModel post_lasso(const SeriesPanel& panel, int p, const SupportMask& mask);

MaCoefficients ma_coefficients(const VarModel& model, int horizon);

// Largest companion-matrix eigenvalue modulus; reported, not enforced.
double companion_spectral_radius(const VarModel& model);

std::string var_model_to_json(const VarModel& model);

}  // namespace spillnet
