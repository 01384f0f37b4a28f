#include "spillnet/rolling.hpp"

#include <cmath>
#include <limits>

#include "spillnet/csv.hpp"
#include "spillnet/errors.hpp"

namespace spillnet {

std::size_t rolling_window_count(std::size_t T, int window, int step) {
    if (T < static_cast<std::size_t>(window)) return 0;
    return (T - static_cast<std::size_t>(window)) / static_cast<std::size_t>(step) + 1;
}

RollingResult rolling_spillovers(const SeriesPanel& panel, const RollingConfig& config,
                                 const Exec& exec) {
    const auto T = static_cast<std::size_t>(panel.values.rows());
    const auto n = panel.values.cols();
    if (config.window <= 0 || config.step <= 0)
        throw EstimationError("rolling_spillovers: window and step must be positive");
    if (T < static_cast<std::size_t>(config.window))
        throw DataError("rolling_spillovers: sample shorter than the window (" +
                        std::to_string(T) + " < " + std::to_string(config.window) + ")");

    const std::size_t n_windows = rolling_window_count(T, config.window, config.step);
    RollingResult out;
    out.labels = panel.labels;
    out.window_end_dates.resize(n_windows);
    out.total_series.assign(n_windows, std::numeric_limits<double>::quiet_NaN());
    out.to_others.setConstant(static_cast<Eigen::Index>(n_windows), n,
                              std::numeric_limits<double>::quiet_NaN());
    out.from_others.setConstant(static_cast<Eigen::Index>(n_windows), n,
                                std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> window_errors(n_windows);

    parallel_for(exec, n_windows, [&](std::size_t w) {
        const std::size_t start = w * static_cast<std::size_t>(config.step);
        const std::size_t end = start + static_cast<std::size_t>(config.window) - 1;
        out.window_end_dates[w] = panel.dates.empty() ? std::to_string(end) : panel.dates[end];
        try {
            SeriesPanel slice;
            slice.labels = panel.labels;
            if (!panel.dates.empty())
                slice.dates.assign(panel.dates.begin() + static_cast<std::ptrdiff_t>(start),
                                   panel.dates.begin() + static_cast<std::ptrdiff_t>(end) + 1);
            slice.values = panel.values.middleRows(static_cast<Eigen::Index>(start), config.window);

            const int p = config.lag.per_window_bic ? select_lag_bic(slice, config.lag.p_max)
                                                    : config.lag.p;
            VarModel model;
            if (config.estimator == VarEstimator::OLS) {
                model = estimate_var_ols(slice, p);
            } else {
                VarModel lasso = estimate_var_lasso(slice, p, config.lasso, Exec::serial());
                model = post_lasso(slice, p, *lasso.support_mask);
            }
            const SpilloverMatrix m = compute_gfevd(model, config.h, config.convention, slice.labels);
            const SpilloverSummary s = summarize(m);
            out.total_series[w] = s.total;
            out.to_others.row(static_cast<Eigen::Index>(w)) = s.to_others.transpose();
            out.from_others.row(static_cast<Eigen::Index>(w)) = s.from_others.transpose();
        } catch (const std::exception& e) {
            window_errors[w] = e.what();
        }
    });

    for (std::size_t w = 0; w < n_windows; ++w)
        if (!window_errors[w].empty()) out.failures.push_back({w, window_errors[w]});
    if (static_cast<double>(out.failures.size()) >
        config.max_failure_frac * static_cast<double>(n_windows)) {
        throw EstimationError("rolling_spillovers: " + std::to_string(out.failures.size()) +
                              " of " + std::to_string(n_windows) + " windows failed; first: " +
                              out.failures.front().message);
    }
    return out;
}

EpisodeTable episode_averages(const RollingResult& rolling, const std::vector<Episode>& episodes) {
    const std::size_t n_windows = rolling.window_end_dates.size();
    const auto n = rolling.to_others.cols();
    EpisodeTable table;
    table.labels = rolling.labels;

    std::vector<bool> assigned(n_windows, false);
    auto accumulate = [&](const std::vector<std::size_t>& windows, const std::string& name,
                          const std::string& start, const std::string& end) {
        EpisodeTable::Row row;
        row.name = name;
        row.start = start;
        row.end = end;
        row.days = windows.size();
        row.mean_to = Eigen::VectorXd::Zero(n);
        std::size_t used = 0;
        double total = 0.0;
        for (auto w : windows) {
            if (std::isnan(rolling.total_series[w])) continue;  // failed window
            total += rolling.total_series[w];
            row.mean_to += rolling.to_others.row(static_cast<Eigen::Index>(w)).transpose();
            ++used;
        }
        if (used == 0) {
            row.mean_total = std::numeric_limits<double>::quiet_NaN();
            row.mean_to.setConstant(std::numeric_limits<double>::quiet_NaN());
        } else {
            row.mean_total = total / static_cast<double>(used);
            row.mean_to /= static_cast<double>(used);
        }
        table.rows.push_back(std::move(row));
    };

    for (const auto& episode : episodes) {
        std::vector<std::size_t> windows;
        for (std::size_t w = 0; w < n_windows; ++w) {
            const std::string& date = rolling.window_end_dates[w];
            if (date >= episode.start && date <= episode.end) {
                windows.push_back(w);
                assigned[w] = true;
            }
        }
        if (windows.empty())
            throw DataError("episode_averages: episode \"" + episode.name +
                            "\" contains no windows");
        accumulate(windows, episode.name, episode.start, episode.end);
    }

    std::vector<std::size_t> rest;
    for (std::size_t w = 0; w < n_windows; ++w)
        if (!assigned[w]) rest.push_back(w);
    if (!rest.empty()) {
        accumulate(rest, "Normal times", rolling.window_end_dates[rest.front()],
                   rolling.window_end_dates[rest.back()]);
    }
    return table;
}

std::vector<Episode> load_episodes_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    auto name = table.column("name");
    auto start = table.column("start");
    auto end = table.column("end");
    if (!name || !start || !end)
        throw IngestError(path + ": expected header name,start,end");
    std::vector<Episode> episodes;
    for (const auto& row : table.rows) {
        Episode e{row[*name], row[*start], row[*end]};
        if (e.start > e.end)
            throw IngestError(path + ": episode \"" + e.name + "\" has start after end");
        episodes.push_back(std::move(e));
    }
    return episodes;
}

void write_rolling_csv(const std::string& path, const RollingResult& rolling) {
    CsvTable table;
    table.header.push_back("window_end");
    table.header.push_back("total");
    for (const auto& label : rolling.labels) {
        table.header.push_back(label + "_to");
        table.header.push_back(label + "_from");
    }
    for (std::size_t w = 0; w < rolling.window_end_dates.size(); ++w) {
        std::vector<std::string> row;
        row.push_back(rolling.window_end_dates[w]);
        row.push_back(format_double(rolling.total_series[w]));  // blank when NaN
        for (Eigen::Index j = 0; j < rolling.to_others.cols(); ++j) {
            row.push_back(format_double(rolling.to_others(static_cast<Eigen::Index>(w), j)));
            row.push_back(format_double(rolling.from_others(static_cast<Eigen::Index>(w), j)));
        }
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

void write_episode_csv(const std::string& path, const EpisodeTable& table) {
    CsvTable csv;
    csv.header = {"period", "start", "end", "days", "mean_total"};
    for (const auto& label : table.labels) csv.header.push_back(label + "_to");
    for (const auto& row : table.rows) {
        std::vector<std::string> cells{row.name, row.start, row.end, std::to_string(row.days),
                                       format_double(row.mean_total)};
        for (Eigen::Index j = 0; j < row.mean_to.size(); ++j)
            cells.push_back(format_double(row.mean_to(j)));
        csv.rows.push_back(std::move(cells));
    }
    write_csv(path, csv);
}

}  // namespace spillnet
