#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spillnet/exec.hpp"
#include "spillnet/gfevd.hpp"
#include "spillnet/var.hpp"

namespace spillnet {

enum class VarEstimator { OLS, PostLASSO };

struct LagRule {
    bool per_window_bic = false;
    int p = 1;      // fixed lag order when per_window_bic is false
    int p_max = 5;  // search bound otherwise
};

struct RollingConfig {
    int window = 250;
    int step = 1;
    int h = 10;
    LagRule lag;
    VarEstimator estimator = VarEstimator::OLS;
    LassoOptions lasso;
    HorizonConvention convention = HorizonConvention::Inclusive;
    double max_failure_frac = 0.2;
};

struct RollingResult {
    std::vector<std::string> window_end_dates;
    std::vector<double> total_series;  // NaN on failed windows
    Eigen::MatrixXd to_others;         // windows x nodes, NaN rows on failure
    Eigen::MatrixXd from_others;
    std::vector<std::string> labels;

    struct Failure {
        std::size_t window = 0;
        std::string message;
    };
    std::vector<Failure> failures;
};

// Number of windows for the given sample length.
std::size_t rolling_window_count(std::size_t T, int window, int step);

// Refits the VAR on every [t-window+1, t] slice and records the spillover
// summary per window. Windows are independent work items.
RollingResult rolling_spillovers(const SeriesPanel& panel, const RollingConfig& config,
                                 const Exec& exec = Exec::openmp());

struct Episode {
    std::string name;
    std::string start;  // ISO date, inclusive
    std::string end;    // ISO date, inclusive
};

struct EpisodeTable {
    struct Row {
        std::string name;
        std::string start;
        std::string end;
        std::size_t days = 0;  // windows whose end date falls in the episode
        double mean_total = 0.0;
        Eigen::VectorXd mean_to;  // per node
    };
    std::vector<Row> rows;
    std::vector<std::string> labels;
};

// Episode means by window end date (bounds inclusive); a residual
// "Normal times" row covers every unassigned window.
EpisodeTable episode_averages(const RollingResult& rolling, const std::vector<Episode>& episodes);

std::vector<Episode> load_episodes_csv(const std::string& path);

void write_rolling_csv(const std::string& path, const RollingResult& rolling);
void write_episode_csv(const std::string& path, const EpisodeTable& table);

}  // namespace spillnet
