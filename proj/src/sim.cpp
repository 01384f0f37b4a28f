#include "spillnet/sim.hpp"

#include <cmath>

#include "spillnet/errors.hpp"

namespace spillnet {

double GaussianRng::uniform() {
    double u;
    do {
        u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    } while (u <= 0.0);
    return u;
}

double GaussianRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Eigen::MatrixXd simulate_var(const Eigen::VectorXd& alpha,
                             const std::vector<Eigen::MatrixXd>& betas,
                             const Eigen::MatrixXd& sigma, int T, GaussianRng& rng, int burn) {
    const auto n = alpha.size();
    const int p = static_cast<int>(betas.size());
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw DataError("simulate_var: sigma is not positive definite");
    const Eigen::MatrixXd chol = llt.matrixL();

    Eigen::MatrixXd x(T + burn + p, n);
    x.setZero();
    Eigen::VectorXd z(n);
    for (int t = p; t < x.rows(); ++t) {
        for (Eigen::Index j = 0; j < n; ++j) z(j) = rng.normal();
        Eigen::VectorXd value = alpha + chol * z;
        for (int lag = 1; lag <= p; ++lag)
            value += betas[static_cast<std::size_t>(lag - 1)] * x.row(t - lag).transpose();
        x.row(t) = value.transpose();
    }
    return x.bottomRows(T);
}

std::vector<double> simulate_garch11(double omega, double alpha, double beta, int T,
                                     GaussianRng& rng, int burn) {
    std::vector<double> r(static_cast<std::size_t>(T));
    double sigma2 = omega / std::max(1e-12, 1.0 - alpha - beta);
    double prev_r = 0.0;
    for (int t = -burn; t < T; ++t) {
        sigma2 = omega + alpha * prev_r * prev_r + beta * sigma2;
        prev_r = std::sqrt(sigma2) * rng.normal();
        if (t >= 0) r[static_cast<std::size_t>(t)] = prev_r;
    }
    return r;
}

double student_t_draw(double dof, GaussianRng& rng) {
    // chi-square via sum of squared normals is fine for the moderate dof
    // used in the tests
    const int k = static_cast<int>(dof);
    double chi2 = 0.0;
    for (int i = 0; i < k; ++i) {
        const double z = rng.normal();
        chi2 += z * z;
    }
    const double t = rng.normal() / std::sqrt(chi2 / dof);
    return t * std::sqrt((dof - 2.0) / dof);
}

}  // namespace spillnet
