// Independent reference computations the tests check the library against.
// These deliberately avoid the library's code paths: plain loops and
// nested vectors instead of the Eigen pipeline.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Grid = std::vector<std::vector<double>>;

inline Grid zeros(int r, int c) { return Grid(static_cast<std::size_t>(r), std::vector<double>(static_cast<std::size_t>(c), 0.0)); }

inline Grid matmul(const Grid& a, const Grid& b) {
    const int r = static_cast<int>(a.size());
    const int k = static_cast<int>(b.size());
    const int c = static_cast<int>(b[0].size());
    Grid out = zeros(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            for (int t = 0; t < k; ++t)
                out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] *
                    b[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
    return out;
}

// Direct evaluation of the generalized decomposition: moving-average
// matrices from the lag recursion, then the ratio of squared impulse terms
// to the forecast-error variance, row-normalized to 100.
inline Grid gfevd_direct(const std::vector<Grid>& betas, const Grid& sigma, int h) {
    const int n = static_cast<int>(sigma.size());
    const int p = static_cast<int>(betas.size());

    std::vector<Grid> phi;
    Grid identity = zeros(n, n);
    for (int i = 0; i < n; ++i) identity[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    phi.push_back(identity);
    for (int l = 1; l <= h; ++l) {
        Grid acc = zeros(n, n);
        for (int j = 1; j <= p && j <= l; ++j) {
            const Grid term = matmul(betas[static_cast<std::size_t>(j - 1)], phi[static_cast<std::size_t>(l - j)]);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    acc[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                        term[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        }
        phi.push_back(acc);
    }

    Grid theta = zeros(n, n);
    for (int i = 0; i < n; ++i) {
        double denom = 0.0;
        for (int l = 0; l <= h; ++l) {
            // e_i' Phi_l Sigma Phi_l' e_i
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    denom += phi[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                             sigma[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                             phi[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
        }
        for (int j = 0; j < n; ++j) {
            double numer = 0.0;
            for (int l = 0; l <= h; ++l) {
                double impulse = 0.0;  // e_i' Phi_l Sigma e_j
                for (int a = 0; a < n; ++a)
                    impulse += phi[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                               sigma[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
                numer += impulse * impulse;
            }
            theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                numer / (sigma[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] * denom);
        }
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) row_sum += theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        for (int j = 0; j < n; ++j) theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *= 100.0 / row_sum;
    }
    return theta;
}

// MA matrix at lag `power` via companion-matrix powers (distinct route from
// the library's recursion).
inline Eigen::MatrixXd ma_by_companion(const std::vector<Eigen::MatrixXd>& betas, int power) {
    const auto n = betas.front().rows();
    const int p = static_cast<int>(betas.size());
    const auto dim = n * p;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(dim, dim);
    for (int lag = 0; lag < p; ++lag)
        companion.block(0, static_cast<Eigen::Index>(lag) * n, n, n) = betas[static_cast<std::size_t>(lag)];
    if (p > 1) companion.block(n, 0, dim - n, dim - n).setIdentity();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
    for (int i = 0; i < power; ++i) acc = companion * acc;
    return acc.topLeftCorner(n, n);
}

// Weighted-graph modularity straight from the definition, over a dense
// adjacency matrix.
inline double modularity_direct(const Eigen::MatrixXd& adjacency, const std::vector<int>& comm) {
    const auto n = adjacency.rows();
    const double two_m = adjacency.sum();
    if (two_m <= 0.0) return 0.0;
    Eigen::VectorXd degree = adjacency.rowwise().sum();
    double q = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (comm[static_cast<std::size_t>(i)] == comm[static_cast<std::size_t>(j)])
                q += adjacency(i, j) - degree(i) * degree(j) / two_m;
    return q / two_m;
}

}  // namespace oracles
