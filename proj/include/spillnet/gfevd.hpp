#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spillnet/var.hpp"

namespace spillnet {

// Upper limit of the forecast-error sums: Inclusive runs l = 0..h (h+1
// terms); Truncated runs l = 0..h-1, the convention parts of the
// connectedness literature use.
enum class HorizonConvention { Inclusive, Truncated };

struct SpilloverMatrix {
    int h = 0;
    Eigen::MatrixXd theta_raw;   // unnormalized shares
    Eigen::MatrixXd theta_norm;  // rows sum to 100
    std::vector<std::string> labels;
};

struct SpilloverSummary {
    Eigen::VectorXd from_others;  // row sums excluding the diagonal
    Eigen::VectorXd to_others;    // column sums excluding the diagonal
    Eigen::VectorXd net;          // to - from
    double total = 0.0;           // grand off-diagonal sum
    std::vector<std::string> labels;
};

// Generalized forecast error variance decomposition of the fitted VAR at
// horizon h: share of variable i's forecast error variance attributable to
// shocks in variable j, row-normalized to percentages. Invariant to the
// ordering of the variables.
SpilloverMatrix compute_gfevd(const VarModel& model, int h,
                              HorizonConvention convention = HorizonConvention::Inclusive,
                              std::vector<std::string> labels = {});

SpilloverSummary summarize(const SpilloverMatrix& m);

// Table-style CSV: matrix block with per-row "from_others", then
// to_others / net rows and the total spillover index.
void write_spillover_csv(const std::string& path, const SpilloverMatrix& m);

// Parses the exact layout written by write_spillover_csv (matrix block
// only; summary rows are recomputed, not trusted).
SpilloverMatrix read_spillover_csv(const std::string& path);

}  // namespace spillnet
