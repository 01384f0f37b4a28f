#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "spillnet/exec.hpp"
#include "spillnet/gfevd.hpp"
#include "spillnet/indicators.hpp"
#include "spillnet/rolling.hpp"
#include "spillnet/series.hpp"

namespace spillnet {

enum class Tier { Markets, Subsectors, Companies };

std::string to_string(Tier tier);
Tier parse_tier(const std::string& s);

enum class EstimatorRule { Auto, OLS, PostLASSO };

// Defaults reproduce the headline configuration: tau 0.05, h 10, 250-day
// windows with 1-day steps, 30% liquidity threshold, Q3 pruning, OLS for
// small systems and post-LASSO for the company network.
struct PipelineConfig {
    std::string prices;         // company price CSV
    std::string caps;           // market-cap CSV (mirrors prices)
    std::string metadata;       // ticker,name,country,subsector
    std::string market_prices;  // index price CSV for the markets tier
    std::string episodes;       // name,start,end
    std::string out = "out";

    std::set<IndicatorKind> indicators = {IndicatorKind::LogReturn, IndicatorKind::LogVol,
                                          IndicatorKind::CAViaR, IndicatorKind::CARES};
    double tau = 0.05;
    int h = 10;
    int p = 0;  // 0 = full-sample BIC choice, then fixed
    int p_max = 5;
    int window = 250;
    int step = 1;
    double liquidity_threshold = 0.30;
    EstimatorRule estimator = EstimatorRule::Auto;
    int auto_lasso_above_n = 10;  // auto rule: post-LASSO when n exceeds this
    double prune_quantile = 0.75;
    bool prune_before_undirected = true;  // the figures display pruned directed networks
    std::uint64_t seed = 42;
    bool garch_quick = false;  // restrict the volatility-model search grid
    bool cares_scan_full = false;
    HorizonConvention convention = HorizonConvention::Inclusive;
    int threads = 0;  // 0 = runtime default; 1 = serial reference path

    Exec exec() const;
};

PipelineConfig load_config_file(const std::string& path);
void apply_config_override(PipelineConfig& config, const std::string& key,
                           const std::string& value);
void print_config(const PipelineConfig& config, std::ostream& out);

// Return series per tier, derived from the raw input files.
std::vector<IndicatorSeries> tier_returns(const PipelineConfig& config, Tier tier);

struct CommandLog {
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;  // files written
};

CommandLog cmd_ingest(const PipelineConfig& config);
CommandLog cmd_indicators(const PipelineConfig& config, Tier tier);
CommandLog cmd_static(const PipelineConfig& config, Tier tier);
CommandLog cmd_rolling(const PipelineConfig& config, Tier tier);
CommandLog cmd_network(const PipelineConfig& config);

enum class SweepKind { Horizon, LagOrder, Frequency };
CommandLog cmd_robustness(const PipelineConfig& config, SweepKind sweep);

// Weekly aggregation: non-overlapping 5-observation sums of log-returns;
// a trailing partial block is dropped.
IndicatorSeries aggregate_weekly(const IndicatorSeries& daily);

}  // namespace spillnet
