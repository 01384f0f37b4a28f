#include "spillnet/var.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "spillnet/errors.hpp"

namespace spillnet {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Lagged design: row t-p holds [x_{t-1,1..n}, x_{t-2,1..n}, ..., x_{t-p,1..n}].
// `target_offset` reserves extra leading rows so candidate models with
// different p share the same estimation sample (BIC comparability).
MatrixXd lag_matrix(const MatrixXd& x, int p, int target_offset) {
    const Index T = x.rows();
    const Index n = x.cols();
    const Index rows = T - target_offset;
    MatrixXd z(rows, static_cast<Index>(p) * n);
    for (Index r = 0; r < rows; ++r) {
        const Index t = r + target_offset;
        for (int lag = 1; lag <= p; ++lag)
            z.block(r, static_cast<Index>(lag - 1) * n, 1, n) = x.row(t - lag);
    }
    return z;
}

std::string regressor_name(const SeriesPanel& panel, int p, Index col) {
    const Index n = static_cast<Index>(panel.labels.size());
    const int lag = static_cast<int>(col / n) + 1;
    const Index var = col % n;
    const std::string base = panel.labels.empty() ? ("x" + std::to_string(var))
                                                  : panel.labels[static_cast<std::size_t>(var)];
    (void)p;
    return base + ".l" + std::to_string(lag);
}

struct EquationFit {
    VectorXd coef;  // over selected columns
    double intercept = 0.0;
    VectorXd residuals;
};

// Intercept + selected-column OLS via rank-revealing QR. Throws on rank
// deficiency, naming the offending columns.
EquationFit solve_equation(const VectorXd& y, const MatrixXd& z,
                           const std::vector<Index>& selected,
                           const std::function<std::string(Index)>& name) {
    const Index rows = y.size();
    MatrixXd design(rows, static_cast<Index>(selected.size()) + 1);
    design.col(0).setOnes();
    for (std::size_t k = 0; k < selected.size(); ++k)
        design.col(static_cast<Index>(k) + 1) = z.col(selected[k]);

    Eigen::ColPivHouseholderQR<MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < design.cols()) {
        const auto& perm = qr.colsPermutation().indices();
        std::string cols;
        for (Index i = qr.rank(); i < design.cols(); ++i) {
            const Index orig = perm(i);
            if (!cols.empty()) cols += ", ";
            if (orig == 0) cols += "(intercept)";
            else cols += name(selected[static_cast<std::size_t>(orig - 1)]);
        }
        throw EstimationError("rank-deficient regressor matrix; collinear columns: " + cols);
    }
    const VectorXd solution = qr.solve(y);
    EquationFit fit;
    fit.intercept = solution(0);
    fit.coef = solution.tail(solution.size() - 1);
    fit.residuals = y - design * solution;
    return fit;
}

VarModel restricted_ols(const SeriesPanel& panel, int p, const SupportMask& mask) {
    const MatrixXd& x = panel.values;
    const Index T = x.rows();
    const Index n = x.cols();
    if (p < 1) throw EstimationError("estimate_var_ols: p must be >= 1");
    if (T - p <= static_cast<Index>(n) * p + 1)
        throw EstimationError("estimate_var_ols: insufficient observations (T-p <= n*p+1)");
    if (mask.rows() != n || mask.cols() != static_cast<Index>(p) * n)
        throw EstimationError("support mask shape mismatch");

    const MatrixXd z = lag_matrix(x, p, p);
    const Index rows = z.rows();

    VarModel model;
    model.n = static_cast<int>(n);
    model.p = p;
    model.alpha.resize(n);
    model.betas.assign(static_cast<std::size_t>(p), MatrixXd::Zero(n, n));
    model.residuals.resize(rows, n);

    auto name = [&](Index col) { return regressor_name(panel, p, col); };
    for (Index j = 0; j < n; ++j) {
        std::vector<Index> selected;
        for (Index k = 0; k < mask.cols(); ++k)
            if (mask(j, k)) selected.push_back(k);
        const VectorXd y = x.col(j).tail(rows);
        EquationFit fit;
        try {
            fit = solve_equation(y, z, selected, name);
        } catch (const EstimationError& e) {
            throw EstimationError("equation " + std::to_string(j) + ": " + e.what());
        }
        model.alpha(j) = fit.intercept;
        for (std::size_t k = 0; k < selected.size(); ++k) {
            const Index col = selected[k];
            const int lag = static_cast<int>(col / n);
            model.betas[static_cast<std::size_t>(lag)](j, col % n) = fit.coef(static_cast<Index>(k));
        }
        model.residuals.col(j) = fit.residuals;
    }
    model.sigma = (model.residuals.transpose() * model.residuals) / static_cast<double>(rows);
    return model;
}

}  // namespace

VarModel estimate_var_ols(const SeriesPanel& panel, int p) {
    const Index n = panel.values.cols();
    SupportMask full = SupportMask::Constant(n, static_cast<Index>(p) * n, true);
    return restricted_ols(panel, p, full);
}

VarModel post_lasso(const SeriesPanel& panel, int p, const SupportMask& mask) {
    VarModel model = restricted_ols(panel, p, mask);
    model.support_mask = mask;
    return model;
}

int select_lag_bic(const SeriesPanel& panel, int p_max) {
    if (p_max < 1) throw EstimationError("select_lag_bic: p_max must be >= 1");
    const MatrixXd& x = panel.values;
    const Index T = x.rows();
    const Index n = x.cols();
    const Index t_star = T - p_max;
    if (t_star <= static_cast<Index>(n) * p_max + 1)
        throw EstimationError("select_lag_bic: insufficient observations for p_max");

    int best_p = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        const MatrixXd z = lag_matrix(x, p, p_max);
        MatrixXd resid(t_star, n);
        auto name = [&](Index col) { return regressor_name(panel, p, col); };
        std::vector<Index> all(static_cast<std::size_t>(z.cols()));
        for (Index k = 0; k < z.cols(); ++k) all[static_cast<std::size_t>(k)] = k;
        for (Index j = 0; j < n; ++j) {
            const VectorXd y = x.col(j).tail(t_star);
            resid.col(j) = solve_equation(y, z, all, name).residuals;
        }
        const MatrixXd sigma = (resid.transpose() * resid) / static_cast<double>(t_star);
        const double log_det = Eigen::FullPivLU<MatrixXd>(sigma).matrixLU().diagonal().array().abs().log().sum();
        const double bic = log_det + (std::log(static_cast<double>(t_star)) /
                                      static_cast<double>(t_star)) *
                                         static_cast<double>(p) * static_cast<double>(n * n);
        if (bic < best_bic) {
            best_bic = bic;
            best_p = p;
        }
    }
    return best_p;
}

namespace {

// Coordinate descent on RSS + lambda * l1(slopes), centered (and usually
// standardized) inputs. `beta` is the warm start and the result.
void coordinate_descent(const MatrixXd& z, const VectorXd& y, double lambda, VectorXd& beta,
                        VectorXd& residual, const LassoOptions& opt) {
    const Index m = z.cols();
    VectorXd col_ssq(m);
    for (Index k = 0; k < m; ++k) col_ssq(k) = z.col(k).squaredNorm();
    residual = y - z * beta;
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Index k = 0; k < m; ++k) {
            if (col_ssq(k) <= 1e-28) continue;
            const double old = beta(k);
            const double zk = z.col(k).dot(residual) + col_ssq(k) * old;
            double next = 0.0;
            const double threshold = lambda / 2.0;
            if (zk > threshold) next = (zk - threshold) / col_ssq(k);
            else if (zk < -threshold) next = (zk + threshold) / col_ssq(k);
            if (next != old) {
                beta(k) = next;
                residual -= (next - old) * z.col(k);
                max_change = std::max(max_change, std::abs(next - old));
            }
        }
        if (max_change <= opt.tol) break;
    }
}

struct Standardized {
    MatrixXd z;          // centered, unit sum-of-squares/rows columns
    VectorXd y;          // centered
    VectorXd mean_z, sd_z;
    double mean_y = 0.0;
    std::vector<bool> constant;  // zero-variance columns, excluded from the fit
};

Standardized standardize(const MatrixXd& z, const VectorXd& y, bool enabled) {
    Standardized s;
    const Index rows = z.rows();
    const Index m = z.cols();
    s.mean_z = z.colwise().mean();
    s.mean_y = y.mean();
    s.y = y.array() - s.mean_y;
    s.z = z.rowwise() - s.mean_z.transpose();
    s.sd_z.resize(m);
    s.constant.assign(static_cast<std::size_t>(m), false);
    for (Index k = 0; k < m; ++k) {
        const double ssq = s.z.col(k).squaredNorm() / static_cast<double>(rows);
        const double sd = std::sqrt(ssq);
        if (sd <= 1e-14) {
            s.constant[static_cast<std::size_t>(k)] = true;
            s.sd_z(k) = 1.0;
            s.z.col(k).setZero();
        } else if (enabled) {
            s.sd_z(k) = sd;
            s.z.col(k) /= sd;
        } else {
            s.sd_z(k) = 1.0;
        }
    }
    return s;
}

}  // namespace

VarModel estimate_var_lasso(const SeriesPanel& panel, int p, const LassoOptions& options,
                            const Exec& exec) {
    const MatrixXd& x = panel.values;
    const Index T = x.rows();
    const Index n = x.cols();
    if (p < 1) throw EstimationError("estimate_var_lasso: p must be >= 1");
    if (T - p <= options.folds)
        throw EstimationError("estimate_var_lasso: insufficient observations for CV folds");

    const MatrixXd z = lag_matrix(x, p, p);
    const Index rows = z.rows();
    const Index m = z.cols();

    // contiguous chronological CV blocks
    std::vector<std::pair<Index, Index>> blocks;
    for (int f = 0; f < options.folds; ++f) {
        const Index lo = rows * f / options.folds;
        const Index hi = rows * (f + 1) / options.folds;
        blocks.emplace_back(lo, hi);
    }

    VarModel model;
    model.n = static_cast<int>(n);
    model.p = p;
    model.alpha.resize(n);
    model.betas.assign(static_cast<std::size_t>(p), MatrixXd::Zero(n, n));
    model.residuals.resize(rows, n);
    SupportMask mask = SupportMask::Constant(n, m, false);

    std::vector<std::string> equation_errors(static_cast<std::size_t>(n));
    parallel_for(exec, static_cast<std::size_t>(n), [&](std::size_t eq) {
        const Index j = static_cast<Index>(eq);
        const VectorXd y = x.col(j).tail(rows);
        const Standardized full = standardize(z, y, options.standardize);

        // smallest lambda with all-zero slopes: |2 z_k'y| <= lambda
        double lambda_max = 0.0;
        for (Index k = 0; k < m; ++k)
            lambda_max = std::max(lambda_max, 2.0 * std::abs(full.z.col(k).dot(full.y)));
        if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
            equation_errors[eq] = "degenerate equation (no usable signal)";
            return;
        }

        std::vector<double> path;
        if (options.fixed_lambda) {
            path.push_back(*options.fixed_lambda);
        } else {
            const double ratio = std::pow(options.path_ratio,
                                          1.0 / static_cast<double>(options.path_length - 1));
            double lambda = lambda_max;
            for (int i = 0; i < options.path_length; ++i, lambda *= ratio) path.push_back(lambda);
        }

        double chosen = path.front();
        if (!options.fixed_lambda) {
            std::vector<std::vector<double>> fold_mse(blocks.size(),
                                                      std::vector<double>(path.size(), 0.0));
            for (std::size_t f = 0; f < blocks.size(); ++f) {
                const auto& [lo, hi] = blocks[f];
                const Index held = hi - lo;
                const Index train_rows = rows - held;
                MatrixXd z_train(train_rows, m);
                VectorXd y_train(train_rows);
                z_train.topRows(lo) = z.topRows(lo);
                y_train.head(lo) = y.head(lo);
                z_train.bottomRows(rows - hi) = z.bottomRows(rows - hi);
                y_train.tail(rows - hi) = y.tail(rows - hi);

                const Standardized st = standardize(z_train, y_train, options.standardize);
                VectorXd beta = VectorXd::Zero(m);
                VectorXd resid;
                for (std::size_t li = 0; li < path.size(); ++li) {
                    coordinate_descent(st.z, st.y, path[li], beta, resid, options);
                    // held-out error on the original scale
                    double sse = 0.0;
                    for (Index r = lo; r < hi; ++r) {
                        double pred = st.mean_y;
                        for (Index k = 0; k < m; ++k) {
                            if (beta(k) == 0.0) continue;
                            pred += beta(k) * (z(r, k) - st.mean_z(k)) / st.sd_z(k);
                        }
                        const double err = y(r) - pred;
                        sse += err * err;
                    }
                    fold_mse[f][li] = sse / static_cast<double>(held);
                }
            }
            std::vector<double> mean_mse(path.size(), 0.0);
            for (std::size_t li = 0; li < path.size(); ++li) {
                for (std::size_t f = 0; f < blocks.size(); ++f) mean_mse[li] += fold_mse[f][li];
                mean_mse[li] /= static_cast<double>(blocks.size());
            }
            std::size_t best = 0;
            for (std::size_t li = 1; li < path.size(); ++li)
                if (mean_mse[li] < mean_mse[best]) best = li;  // ties keep the larger lambda
            std::size_t pick = best;
            if (options.cv_rule == LassoOptions::CvRule::OneSE) {
                double var_best = 0.0;
                for (std::size_t f = 0; f < blocks.size(); ++f) {
                    const double d = fold_mse[f][best] - mean_mse[best];
                    var_best += d * d;
                }
                var_best /= static_cast<double>(blocks.size() - 1);
                const double cutoff =
                    mean_mse[best] + options.se_multiplier *
                                         std::sqrt(var_best / static_cast<double>(blocks.size()));
                for (std::size_t li = 0; li <= best; ++li) {
                    if (mean_mse[li] <= cutoff) {
                        pick = li;  // path descends, so the first hit is the sparsest
                        break;
                    }
                }
            }
            chosen = path[pick];
        }

        VectorXd beta = VectorXd::Zero(m);
        VectorXd resid;
        coordinate_descent(full.z, full.y, chosen, beta, resid, options);

        double intercept = full.mean_y;
        for (Index k = 0; k < m; ++k) {
            if (full.constant[static_cast<std::size_t>(k)]) beta(k) = 0.0;
            const double original = beta(k) / full.sd_z(k);
            if (original != 0.0) {
                const int lag = static_cast<int>(k / n);
                model.betas[static_cast<std::size_t>(lag)](j, k % n) = original;
                mask(j, k) = true;
                intercept -= original * full.mean_z(k);
            }
        }
        model.alpha(j) = intercept;
        VectorXd fitted = VectorXd::Constant(rows, model.alpha(j));
        for (Index k = 0; k < m; ++k) {
            const int lag = static_cast<int>(k / n);
            const double b = model.betas[static_cast<std::size_t>(lag)](j, k % n);
            if (b != 0.0) fitted += b * z.col(k);
        }
        model.residuals.col(j) = y - fitted;
    });

    for (std::size_t eq = 0; eq < equation_errors.size(); ++eq)
        if (!equation_errors[eq].empty())
            throw EstimationError("estimate_var_lasso: equation " + std::to_string(eq) + ": " +
                                  equation_errors[eq]);

    model.sigma = (model.residuals.transpose() * model.residuals) / static_cast<double>(rows);
    model.support_mask = mask;
    return model;
}

MaCoefficients ma_coefficients(const VarModel& model, int horizon) {
    if (horizon < 0) throw EstimationError("ma_coefficients: horizon must be >= 0");
    MaCoefficients out;
    const Index n = model.n;
    out.phis.reserve(static_cast<std::size_t>(horizon) + 1);
    out.phis.push_back(MatrixXd::Identity(n, n));
    for (int i = 1; i <= horizon; ++i) {
        MatrixXd phi = MatrixXd::Zero(n, n);
        for (int j = 1; j <= model.p && j <= i; ++j)
            phi += model.betas[static_cast<std::size_t>(j - 1)] * out.phis[static_cast<std::size_t>(i - j)];
        out.phis.push_back(std::move(phi));
    }
    return out;
}

double companion_spectral_radius(const VarModel& model) {
    const Index n = model.n;
    const Index dim = n * model.p;
    MatrixXd companion = MatrixXd::Zero(dim, dim);
    for (int lag = 0; lag < model.p; ++lag)
        companion.block(0, static_cast<Index>(lag) * n, n, n) = model.betas[static_cast<std::size_t>(lag)];
    if (model.p > 1)
        companion.block(n, 0, dim - n, dim - n).setIdentity();
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

std::string var_model_to_json(const VarModel& model) {
    nlohmann::json j;
    j["n"] = model.n;
    j["p"] = model.p;
    j["alpha"] = std::vector<double>(model.alpha.data(), model.alpha.data() + model.alpha.size());
    auto matrix_rows = [](const MatrixXd& m) {
        std::vector<std::vector<double>> rows;
        for (Index r = 0; r < m.rows(); ++r) {
            std::vector<double> row;
            for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["betas"] = nlohmann::json::array();
    for (const auto& beta : model.betas) j["betas"].push_back(matrix_rows(beta));
    j["sigma"] = matrix_rows(model.sigma);
    if (model.support_mask) {
        std::vector<std::vector<int>> mask_rows;
        for (Index r = 0; r < model.support_mask->rows(); ++r) {
            std::vector<int> row;
            for (Index c = 0; c < model.support_mask->cols(); ++c)
                row.push_back((*model.support_mask)(r, c) ? 1 : 0);
            mask_rows.push_back(std::move(row));
        }
        j["support_mask"] = mask_rows;
    }
    j["companion_spectral_radius"] = companion_spectral_radius(model);
    return j.dump(2);
}

}  // namespace spillnet
