#include <doctest.h>

#include <cmath>

#include "spillnet/errors.hpp"
#include "spillnet/sim.hpp"
#include "spillnet/var.hpp"
#include "support/oracles.hpp"

using namespace spillnet;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

SeriesPanel make_panel(const MatrixXd& values) {
    SeriesPanel panel;
    panel.values = values;
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        panel.labels.push_back("x" + std::to_string(j));
    return panel;
}

}  // namespace

TEST_CASE("ols on white noise finds near-zero coefficients") {
    GaussianRng rng(101);
    const int n = 4;
    MatrixXd x = simulate_var(VectorXd::Zero(n), {MatrixXd::Zero(n, n)},
                              MatrixXd::Identity(n, n), 5000, rng);
    const VarModel model = estimate_var_ols(make_panel(x), 1);
    CHECK(model.betas[0].cwiseAbs().maxCoeff() < 0.05);
    CHECK(model.alpha.cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("ols recovers a univariate ar(1)") {
    GaussianRng rng(102);
    MatrixXd beta(1, 1);
    beta << 0.5;
    MatrixXd x = simulate_var(VectorXd::Zero(1), {beta}, MatrixXd::Identity(1, 1), 10000, rng);
    const VarModel model = estimate_var_ols(make_panel(x), 1);
    CHECK(model.betas[0](0, 0) > 0.47);
    CHECK(model.betas[0](0, 0) < 0.53);
}

TEST_CASE("duplicated column raises a rank error naming the culprit") {
    GaussianRng rng(103);
    MatrixXd x(300, 3);
    for (Eigen::Index t = 0; t < 300; ++t) {
        x(t, 0) = rng.normal();
        x(t, 1) = x(t, 0);  // exact duplicate
        x(t, 2) = rng.normal();
    }
    try {
        estimate_var_ols(make_panel(x), 1);
        FAIL("expected EstimationError");
    } catch (const EstimationError& e) {
        const std::string what = e.what();
        CHECK(what.find("collinear") != std::string::npos);
        CHECK(what.find(".l1") != std::string::npos);
    }
}

TEST_CASE("ols residuals are orthogonal to the regressors") {
    GaussianRng rng(104);
    MatrixXd beta(2, 2);
    beta << 0.4, 0.1, -0.2, 0.3;
    MatrixXd x = simulate_var(VectorXd::Constant(2, 0.1), {beta}, MatrixXd::Identity(2, 2), 800,
                              rng);
    const VarModel model = estimate_var_ols(make_panel(x), 1);
    const Eigen::Index rows = model.residuals.rows();
    for (Eigen::Index j = 0; j < 2; ++j) {
        const VectorXd resid = model.residuals.col(j);
        CHECK(std::abs(resid.sum()) / rows < 1e-8);  // intercept column
        for (Eigen::Index k = 0; k < 2; ++k) {
            const VectorXd lagged = x.col(k).segment(0, rows);
            CHECK(std::abs(lagged.dot(resid)) / (lagged.norm() * resid.norm() + 1e-12) < 1e-8);
        }
    }
}

TEST_CASE("sigma uses the 1/(T-p) divisor") {
    GaussianRng rng(105);
    MatrixXd x = simulate_var(VectorXd::Zero(1), {MatrixXd::Zero(1, 1)},
                              MatrixXd::Identity(1, 1), 50, rng);
    const VarModel model = estimate_var_ols(make_panel(x), 1);
    const double expected = model.residuals.col(0).squaredNorm() / (50.0 - 1.0);
    CHECK(model.sigma(0, 0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("bic lag selection is consistent on simulated var(1) and var(2)") {
    int correct1 = 0;
    for (int rep = 0; rep < 20; ++rep) {
        GaussianRng rng(200 + static_cast<std::uint64_t>(rep));
        MatrixXd beta(3, 3);
        beta << 0.5, 0.1, 0.0, 0.0, 0.4, 0.1, 0.1, 0.0, 0.3;
        MatrixXd x =
            simulate_var(VectorXd::Zero(3), {beta}, MatrixXd::Identity(3, 3), 600, rng);
        if (select_lag_bic(make_panel(x), 5) == 1) ++correct1;
    }
    CHECK(correct1 >= 18);  // >= 90% of 20 replications

    GaussianRng rng(300);
    MatrixXd b1 = MatrixXd::Zero(2, 2), b2(2, 2);
    b1 << 0.2, 0.0, 0.0, 0.2;
    b2 << 0.5, 0.15, 0.15, 0.5;  // strong lag-2 dynamics
    MatrixXd x = simulate_var(VectorXd::Zero(2), {b1, b2}, MatrixXd::Identity(2, 2), 2000, rng);
    CHECK(select_lag_bic(make_panel(x), 5) == 2);
}

TEST_CASE("lasso at lambda zero reproduces ols") {
    GaussianRng rng(401);
    MatrixXd beta(3, 3);
    beta << 0.5, 0.2, 0.0, 0.0, 0.4, 0.0, 0.0, 0.0, 0.3;
    MatrixXd x = simulate_var(VectorXd::Zero(3), {beta}, MatrixXd::Identity(3, 3), 400, rng);
    const SeriesPanel panel = make_panel(x);

    LassoOptions options;
    options.fixed_lambda = 0.0;
    const VarModel lasso = estimate_var_lasso(panel, 1, options);
    const VarModel ols = estimate_var_ols(panel, 1);
    CHECK((lasso.betas[0] - ols.betas[0]).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((lasso.alpha - ols.alpha).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("lasso above lambda_max shuts every slope off exactly") {
    GaussianRng rng(402);
    MatrixXd beta(2, 2);
    beta << 0.5, 0.1, 0.1, 0.5;
    MatrixXd x = simulate_var(VectorXd::Zero(2), {beta}, MatrixXd::Identity(2, 2), 300, rng);
    LassoOptions options;
    options.fixed_lambda = 1e9;
    const VarModel model = estimate_var_lasso(make_panel(x), 1, options);
    CHECK(model.betas[0].cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(model.support_mask.has_value());
    CHECK_FALSE(model.support_mask->any());
}

TEST_CASE("post-lasso with the full mask equals ols bit for bit") {
    GaussianRng rng(403);
    MatrixXd beta(3, 3);
    beta << 0.5, 0.2, 0.0, 0.0, 0.4, 0.0, 0.1, 0.0, 0.3;
    MatrixXd x = simulate_var(VectorXd::Zero(3), {beta}, MatrixXd::Identity(3, 3), 350, rng);
    const SeriesPanel panel = make_panel(x);
    const VarModel ols = estimate_var_ols(panel, 1);
    const SupportMask full = SupportMask::Constant(3, 3, true);
    const VarModel post = post_lasso(panel, 1, full);
    CHECK((post.betas[0].array() == ols.betas[0].array()).all());
    CHECK((post.alpha.array() == ols.alpha.array()).all());
    CHECK((post.sigma.array() == ols.sigma.array()).all());
}

TEST_CASE("post-lasso with the empty mask is the intercept-only model") {
    GaussianRng rng(404);
    MatrixXd x = simulate_var(VectorXd::Constant(2, 0.3), {MatrixXd::Zero(2, 2)},
                              MatrixXd::Identity(2, 2), 320, rng);
    const SeriesPanel panel = make_panel(x);
    const SupportMask empty = SupportMask::Constant(2, 2, false);
    const VarModel model = post_lasso(panel, 1, empty);
    CHECK(model.betas[0].cwiseAbs().maxCoeff() == 0.0);
    const Eigen::Index rows = model.residuals.rows();
    const MatrixXd tail = x.bottomRows(rows);
    const Eigen::RowVectorXd means = tail.colwise().mean();
    CHECK((model.alpha.transpose() - means).cwiseAbs().maxCoeff() < 1e-12);
    const MatrixXd centered = tail.rowwise() - means;
    const MatrixXd cov = centered.transpose() * centered / static_cast<double>(rows);
    CHECK((model.sigma - cov).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("masked-out post-lasso coefficients are exactly zero") {
    GaussianRng rng(405);
    MatrixXd beta(2, 2);
    beta << 0.5, 0.3, 0.0, 0.4;
    MatrixXd x = simulate_var(VectorXd::Zero(2), {beta}, MatrixXd::Identity(2, 2), 300, rng);
    SupportMask mask = SupportMask::Constant(2, 2, false);
    mask(0, 0) = true;
    mask(1, 1) = true;
    const VarModel model = post_lasso(make_panel(x), 1, mask);
    CHECK(model.betas[0](0, 1) == 0.0);
    CHECK(model.betas[0](1, 0) == 0.0);
    CHECK(model.betas[0](0, 0) != 0.0);
}

namespace {

// per-equation exhaustive best-subset by Gaussian BIC; union over equations
SupportMask best_subset_bic(const MatrixXd& x, int p) {
    const Eigen::Index n = x.cols();
    const Eigen::Index rows = x.rows() - p;
    const Eigen::Index m = n * p;
    MatrixXd z(rows, m);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (int lag = 1; lag <= p; ++lag)
            z.block(r, static_cast<Eigen::Index>(lag - 1) * n, 1, n) = x.row(r + p - lag);
    SupportMask mask = SupportMask::Constant(n, m, false);
    for (Eigen::Index j = 0; j < n; ++j) {
        const VectorXd y = x.col(j).tail(rows);
        double best = std::numeric_limits<double>::infinity();
        unsigned best_bits = 0;
        for (unsigned bits = 0; bits < (1u << m); ++bits) {
            int k = 0;
            for (Eigen::Index c = 0; c < m; ++c)
                if (bits & (1u << c)) ++k;
            MatrixXd design(rows, k + 1);
            design.col(0).setOnes();
            int col = 1;
            for (Eigen::Index c = 0; c < m; ++c)
                if (bits & (1u << c)) design.col(col++) = z.col(c);
            const VectorXd coef =
                (design.transpose() * design).ldlt().solve(design.transpose() * y);
            const double rss = (y - design * coef).squaredNorm();
            const double bic = rows * std::log(rss / rows) + (k + 1) * std::log(double(rows));
            if (bic < best) {
                best = bic;
                best_bits = bits;
            }
        }
        for (Eigen::Index c = 0; c < m; ++c)
            if (best_bits & (1u << c)) mask(j, c) = true;
    }
    return mask;
}

}  // namespace

TEST_CASE("cv lasso recovers the sparse support chosen by best-subset bic") {
    int agreements = 0;
    const int reps = 10;
    for (int rep = 0; rep < reps; ++rep) {
        GaussianRng rng(500 + static_cast<std::uint64_t>(rep));
        MatrixXd beta = MatrixXd::Zero(3, 3);
        beta(0, 0) = 0.6;
        beta(1, 2) = 0.6;
        beta(2, 2) = 0.6;
        MatrixXd x = simulate_var(VectorXd::Zero(3), {beta},
                                  0.25 * MatrixXd::Identity(3, 3), 60, rng);
        const VarModel lasso = estimate_var_lasso(make_panel(x), 1);
        const SupportMask oracle = best_subset_bic(x, 1);
        if ((lasso.support_mask->array() == oracle.array()).all()) ++agreements;
    }
    CHECK(agreements >= 8);  // >= 80% of replications
}

TEST_CASE("post-lasso removes shrinkage bias on the selected support") {
    double lasso_err = 0.0, post_err = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        GaussianRng rng(600 + static_cast<std::uint64_t>(rep));
        MatrixXd beta = MatrixXd::Zero(3, 3);
        beta(0, 0) = 0.5;
        beta(1, 1) = 0.5;
        beta(2, 0) = 0.4;
        MatrixXd x = simulate_var(VectorXd::Zero(3), {beta}, MatrixXd::Identity(3, 3), 250, rng);
        const SeriesPanel panel = make_panel(x);
        const VarModel lasso = estimate_var_lasso(panel, 1);
        const VarModel post = post_lasso(panel, 1, *lasso.support_mask);
        lasso_err += (lasso.betas[0] - beta).cwiseAbs().sum();
        post_err += (post.betas[0] - beta).cwiseAbs().sum();
    }
    CHECK(post_err < lasso_err);
}

TEST_CASE("lasso objective at the solution beats the ols point") {
    GaussianRng rng(700);
    MatrixXd beta(2, 2);
    beta << 0.5, 0.1, 0.0, 0.4;
    MatrixXd x = simulate_var(VectorXd::Zero(2), {beta}, MatrixXd::Identity(2, 2), 300, rng);
    const SeriesPanel panel = make_panel(x);
    LassoOptions options;
    options.fixed_lambda = 25.0;
    const VarModel lasso = estimate_var_lasso(panel, 1, options);
    const VarModel ols = estimate_var_ols(panel, 1);

    const Eigen::Index rows = x.rows() - 1;
    for (Eigen::Index j = 0; j < 2; ++j) {
        auto objective = [&](const VarModel& model) {
            double rss = 0.0;
            for (Eigen::Index t = 1; t < x.rows(); ++t) {
                double fitted = model.alpha(j);
                for (Eigen::Index k = 0; k < 2; ++k) fitted += model.betas[0](j, k) * x(t - 1, k);
                rss += (x(t, j) - fitted) * (x(t, j) - fitted);
            }
            return rss + 25.0 * model.betas[0].row(j).cwiseAbs().sum();
        };
        CHECK(objective(lasso) <= objective(ols) + 1e-9 * rows);
    }
}

TEST_CASE("ma coefficients follow the lag recursion") {
    SUBCASE("zero betas truncate immediately") {
        VarModel model;
        model.n = 2;
        model.p = 1;
        model.betas = {MatrixXd::Zero(2, 2)};
        const MaCoefficients ma = ma_coefficients(model, 5);
        CHECK(ma.phis[0].isIdentity(0.0));
        for (int i = 1; i <= 5; ++i) CHECK(ma.phis[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("scalar ar(1) gives the geometric sequence") {
        VarModel model;
        model.n = 1;
        model.p = 1;
        model.betas = {MatrixXd::Constant(1, 1, 0.5)};
        const MaCoefficients ma = ma_coefficients(model, 8);
        for (int i = 0; i <= 8; ++i)
            CHECK(ma.phis[static_cast<std::size_t>(i)](0, 0) ==
                  doctest::Approx(std::pow(0.5, i)).epsilon(1e-14));
    }
    SUBCASE("var(2) matches the companion-power oracle") {
        MatrixXd b1(2, 2), b2(2, 2);
        b1 << 0.4, 0.15, -0.1, 0.3;
        b2 << 0.1, -0.05, 0.05, 0.2;
        VarModel model;
        model.n = 2;
        model.p = 2;
        model.betas = {b1, b2};
        const MaCoefficients ma = ma_coefficients(model, 5);
        const MatrixXd oracle = oracles::ma_by_companion({b1, b2}, 5);
        CHECK((ma.phis[5] - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("re-substituting the recursion leaves no residual") {
        MatrixXd b1(3, 3), b2(3, 3);
        b1 << 0.3, 0.1, 0.0, 0.0, 0.2, 0.1, 0.1, 0.0, 0.25;
        b2 = 0.1 * MatrixXd::Identity(3, 3);
        VarModel model;
        model.n = 3;
        model.p = 2;
        model.betas = {b1, b2};
        const MaCoefficients ma = ma_coefficients(model, 10);
        for (int i = 1; i <= 10; ++i) {
            MatrixXd expected = MatrixXd::Zero(3, 3);
            if (i - 1 >= 0) expected += b1 * ma.phis[static_cast<std::size_t>(i - 1)];
            if (i - 2 >= 0) expected += b2 * ma.phis[static_cast<std::size_t>(i - 2)];
            CHECK((ma.phis[static_cast<std::size_t>(i)] - expected).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}
