#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace spillnet {

// Deterministic standard-normal stream (Box-Muller over the raw mt19937_64
// output, so values do not depend on the standard library's distribution
// implementations).
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : rng_(seed) {}
    double uniform();  // (0,1)
    double normal();
    std::uint64_t raw() { return rng_(); }

private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// x_t = alpha + sum_i betas[i] x_{t-i} + chol * z_t, discarding `burn`
// initial draws.
Eigen::MatrixXd simulate_var(const Eigen::VectorXd& alpha,
                             const std::vector<Eigen::MatrixXd>& betas,
                             const Eigen::MatrixXd& sigma, int T, GaussianRng& rng,
                             int burn = 200);

// r_t = sigma_t z_t with sigma_t^2 = omega + alpha r_{t-1}^2 + beta sigma_{t-1}^2.
std::vector<double> simulate_garch11(double omega, double alpha, double beta, int T,
                                     GaussianRng& rng, int burn = 500);

// Standardized (unit-variance) Student-t draws.
double student_t_draw(double dof, GaussianRng& rng);

}  // namespace spillnet
