#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "spillnet/errors.hpp"
#include "spillnet/gfevd.hpp"
#include "spillnet/sim.hpp"
#include "support/oracles.hpp"
#include "support/table3.hpp"

using namespace spillnet;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VarModel model_from(const std::vector<MatrixXd>& betas, const MatrixXd& sigma) {
    VarModel model;
    model.n = static_cast<int>(sigma.rows());
    model.p = static_cast<int>(betas.size());
    model.betas = betas;
    model.sigma = sigma;
    model.alpha = VectorXd::Zero(model.n);
    return model;
}

oracles::Grid to_grid(const MatrixXd& m) {
    oracles::Grid g = oracles::zeros(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return g;
}

// random stable VAR with positive-definite sigma
VarModel random_system(std::uint64_t seed, int n, int p) {
    GaussianRng rng(seed);
    std::vector<MatrixXd> betas;
    for (int lag = 0; lag < p; ++lag) {
        MatrixXd b(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) b(i, j) = 0.25 * rng.normal() / (lag + 1);
        betas.push_back(0.5 * b);
    }
    MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
    MatrixXd sigma = a * a.transpose() + n * MatrixXd::Identity(n, n);
    VarModel model = model_from(betas, sigma);
    if (companion_spectral_radius(model) >= 0.95) return random_system(seed + 1000003, n, p);
    return model;
}

}  // namespace

TEST_CASE("orthogonal static system decomposes onto the identity") {
    const VarModel model = model_from({MatrixXd::Zero(3, 3)}, MatrixXd::Identity(3, 3));
    const SpilloverMatrix m = compute_gfevd(model, 10);
    CHECK((m.theta_norm - 100.0 * MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    const SpilloverSummary s = summarize(m);
    CHECK(s.total == 0.0);
    CHECK(s.net.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perfectly correlated shocks split 50/50") {
    MatrixXd sigma(2, 2);
    sigma << 1.0, 1.0, 1.0, 1.0;
    const VarModel model = model_from({MatrixXd::Zero(2, 2)}, sigma);
    const SpilloverMatrix m = compute_gfevd(model, 10);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            CHECK(m.theta_norm(i, j) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("fixed 2x2 system matches the direct oracle to 1e-10") {
    MatrixXd beta(2, 2);
    beta << 0.5, 0.2, 0.0, 0.5;
    const VarModel model = model_from({beta}, MatrixXd::Identity(2, 2));
    const SpilloverMatrix m = compute_gfevd(model, 10);
    const auto oracle = oracles::gfevd_direct({to_grid(beta)}, to_grid(model.sigma), 10);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            CHECK(std::abs(m.theta_norm(i, j) -
                           oracle[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) <
                  1e-10);
}

TEST_CASE("twenty random systems match the direct oracle to 1e-10") {
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + rep % 2;
        const int p = 1 + rep % 2;
        const VarModel model = random_system(900 + static_cast<std::uint64_t>(rep), n, p);
        const SpilloverMatrix m = compute_gfevd(model, 10);
        std::vector<oracles::Grid> betas;
        for (const auto& b : model.betas) betas.push_back(to_grid(b));
        const auto oracle = oracles::gfevd_direct(betas, to_grid(model.sigma), 10);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                CHECK(std::abs(m.theta_norm(i, j) -
                               oracle[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) <
                      1e-10);
    }
}

TEST_CASE("rows sum to 100 and net contributions conserve") {
    for (int rep = 0; rep < 10; ++rep) {
        const VarModel model = random_system(1500 + static_cast<std::uint64_t>(rep), 3, 1);
        const SpilloverMatrix m = compute_gfevd(model, 10);
        for (Eigen::Index i = 0; i < 3; ++i)
            CHECK(std::abs(m.theta_norm.row(i).sum() - 100.0) < 1e-9);
        const SpilloverSummary s = summarize(m);
        CHECK(std::abs(s.net.sum()) < 1e-9);
        CHECK(s.total == doctest::Approx(s.to_others.sum()).epsilon(1e-12));
        CHECK(s.total == doctest::Approx(s.from_others.sum()).epsilon(1e-12));
    }
}

TEST_CASE("the decomposition is invariant to variable ordering") {
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 3;
        const VarModel model = random_system(2000 + static_cast<std::uint64_t>(rep), n, 1);
        const SpilloverMatrix base = compute_gfevd(model, 10);

        // permute (rotate) the variables, recompute, un-permute
        std::vector<int> perm = {1, 2, 0};
        MatrixXd P = MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) P(i, perm[static_cast<std::size_t>(i)]) = 1.0;
        VarModel permuted = model;
        permuted.betas[0] = P * model.betas[0] * P.transpose();
        permuted.sigma = P * model.sigma * P.transpose();
        const SpilloverMatrix rotated = compute_gfevd(permuted, 10);
        const MatrixXd unrotated = P.transpose() * rotated.theta_norm * P;
        CHECK((unrotated - base.theta_norm).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("forecast-error sums accumulate monotonically in the horizon") {
    const VarModel model = random_system(3001, 3, 2);
    const MaCoefficients ma = ma_coefficients(model, 20);
    Eigen::VectorXd denom = Eigen::VectorXd::Zero(3);
    MatrixXd numer = MatrixXd::Zero(3, 3);
    for (int l = 0; l <= 20; ++l) {
        const MatrixXd a = ma.phis[static_cast<std::size_t>(l)] * model.sigma;
        const MatrixXd numer_next = numer + a.cwiseProduct(a);
        Eigen::VectorXd denom_next = denom;
        for (Eigen::Index i = 0; i < 3; ++i)
            denom_next(i) += a.row(i).dot(ma.phis[static_cast<std::size_t>(l)].row(i));
        CHECK((numer_next - numer).minCoeff() >= 0.0);
        CHECK((denom_next - denom).minCoeff() >= 0.0);
        numer = numer_next;
        denom = denom_next;
    }
}

TEST_CASE("rescaling a series leaves the normalized decomposition unchanged") {
    GaussianRng rng(3100);
    MatrixXd beta(3, 3);
    beta << 0.4, 0.1, 0.0, 0.1, 0.3, 0.1, 0.0, 0.1, 0.35;
    MatrixXd chol_sigma(3, 3);
    chol_sigma << 1.0, 0.3, 0.1, 0.3, 1.2, 0.2, 0.1, 0.2, 0.9;
    const MatrixXd sigma = chol_sigma * chol_sigma.transpose();
    MatrixXd x = simulate_var(VectorXd::Zero(3), {beta}, sigma, 2000, rng);

    SeriesPanel panel;
    panel.values = x;
    panel.labels = {"a", "b", "c"};
    const VarModel fit = estimate_var_ols(panel, 1);
    const SpilloverMatrix base = compute_gfevd(fit, 10);

    SeriesPanel scaled = panel;
    scaled.values.col(1) *= 7.5;
    const VarModel fit_scaled = estimate_var_ols(scaled, 1);
    const SpilloverMatrix rescaled = compute_gfevd(fit_scaled, 10);
    CHECK((rescaled.theta_norm - base.theta_norm).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("degenerate inputs are rejected with row context") {
    MatrixXd sigma = MatrixXd::Identity(2, 2);
    sigma(1, 1) = 0.0;
    CHECK_THROWS_AS(compute_gfevd(model_from({MatrixXd::Zero(2, 2)}, sigma), 10),
                    EstimationError);
    MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(compute_gfevd(model_from({MatrixXd::Zero(2, 2)}, asym), 10),
                    EstimationError);
}

TEST_CASE("printed subsector matrices reproduce their published summaries") {
    for (const auto& panel : fixtures::table3_panels()) {
        CAPTURE(panel.name);
        SpilloverMatrix m;
        m.h = 10;
        m.theta_norm = panel.matrix;
        m.theta_raw = panel.matrix / 100.0;
        m.labels = fixtures::kSubsectorLabels;
        const SpilloverSummary s = summarize(m);
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(s.from_others(i) - panel.from_others[static_cast<std::size_t>(i)]) <=
                  0.01 + 1e-12);
            CHECK(std::abs(s.to_others(i) - panel.to_others[static_cast<std::size_t>(i)]) <=
                  0.01 + 1e-12);
            CHECK(std::abs(s.net(i) - panel.net[static_cast<std::size_t>(i)]) <= 0.02 + 1e-12);
        }
        CHECK(std::abs(s.total - panel.total) <= 0.01 + 1e-12);
    }
}

TEST_CASE("spillover table csv round-trips the matrix") {
    const VarModel model = random_system(4200, 3, 1);
    const SpilloverMatrix m = compute_gfevd(model, 10, HorizonConvention::Inclusive,
                                            {"aa", "bb", "cc"});
    const std::string path =
        (std::filesystem::temp_directory_path() / "spill_roundtrip.csv").string();
    write_spillover_csv(path, m);
    const SpilloverMatrix back = read_spillover_csv(path);
    CHECK(back.labels == m.labels);
    CHECK((back.theta_norm - m.theta_norm).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("horizon conventions differ only in the number of summed terms") {
    MatrixXd beta(2, 2);
    beta << 0.6, 0.1, 0.0, 0.5;
    const VarModel model = model_from({beta}, MatrixXd::Identity(2, 2));
    const SpilloverMatrix inclusive = compute_gfevd(model, 10, HorizonConvention::Inclusive);
    const SpilloverMatrix truncated = compute_gfevd(model, 11, HorizonConvention::Truncated);
    CHECK((inclusive.theta_norm - truncated.theta_norm).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(compute_gfevd(model, 0, HorizonConvention::Truncated), EstimationError);
}
