#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spillnet/series.hpp"

namespace spillnet {

enum class Subsector {
    InsuranceBrokers,
    LifeHealth,
    Multiline,
    PropertyCasualty,
    Reinsurance,
    Other,
};

std::string to_string(Subsector s);
Subsector parse_subsector(const std::string& s);
std::vector<Subsector> all_subsectors();

struct AssetMeta {
    std::string ticker;
    std::string name;
    std::string country;
    Subsector subsector = Subsector::Other;
    // Per-date market capitalization aligned with the owning panel's dates;
    // NaN where unavailable.
    std::vector<double> market_cap;
};

// Raw price levels. NaN marks a missing observation.
struct PricePanel {
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    Eigen::MatrixXd prices;          // dates x assets
    std::vector<AssetMeta> assets;
};

// Log-returns; missing cells stay NaN until apply_liquidity_filter
// finalizes the panel by zero-filling.
struct ReturnPanel {
    std::vector<std::string> dates;
    Eigen::MatrixXd returns;  // dates x assets
    std::vector<AssetMeta> assets;
    std::vector<bool> zero_filled;  // per asset: true once synthetic zeros were inserted
    bool percent = true;            // 100 * ln(p_t / p_{t-1}) convention, fixed panel-wide

    std::optional<std::size_t> asset_index(const std::string& ticker) const;
};

struct ColumnSpec {
    std::string date_column = "date";
};

// Input CSV: header `date,<ticker>,...`, ISO dates, blank = missing.
PricePanel load_price_csv(const std::string& path, const ColumnSpec& schema = {});

// Cap CSV mirrors the price CSV shape; dates must match the panel's.
void attach_market_caps(PricePanel& panel, const std::string& caps_path,
                        const ColumnSpec& schema = {});

// Metadata CSV: `ticker,name,country,subsector`.
void attach_metadata(PricePanel& panel, const std::string& metadata_path);

// r_t = 100 * ln(p_t / p_{t-1}); first date dropped; a return is missing
// when either price is missing.
ReturnPanel compute_log_returns(const PricePanel& panel);

// Missing returns replaced by zero (flagged), then assets whose nonzero
// count fails to exceed min_nonzero_frac * T are removed.
ReturnPanel apply_liquidity_filter(const ReturnPanel& panel, double min_nonzero_frac);

struct SubsectorIndexResult {
    IndicatorSeries series;
    std::vector<std::string> degenerate_dates;  // all caps zero/missing that day
};

// Value-weighted subsector return index. Assets missing a return or a cap
// on day t enter with weight zero; remaining caps are renormalized.
SubsectorIndexResult build_subsector_index(const ReturnPanel& panel, Subsector subsector);

}  // namespace spillnet
