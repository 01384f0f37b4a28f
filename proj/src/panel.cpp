#include "spillnet/panel.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "spillnet/csv.hpp"
#include "spillnet/errors.hpp"

namespace spillnet {

std::string to_string(Subsector s) {
    switch (s) {
        case Subsector::InsuranceBrokers: return "Ins.Bro.";
        case Subsector::LifeHealth: return "Lif.Hea.";
        case Subsector::Multiline: return "Mul.Lin.";
        case Subsector::PropertyCasualty: return "Pro.Cas.";
        case Subsector::Reinsurance: return "Reins.";
        case Subsector::Other: return "Other";
    }
    return "Other";
}

Subsector parse_subsector(const std::string& s) {
    if (s == "Ins.Bro.") return Subsector::InsuranceBrokers;
    if (s == "Lif.Hea.") return Subsector::LifeHealth;
    if (s == "Mul.Lin.") return Subsector::Multiline;
    if (s == "Pro.Cas.") return Subsector::PropertyCasualty;
    if (s == "Reins.") return Subsector::Reinsurance;
    if (s == "Other") return Subsector::Other;
    throw IngestError("unknown subsector \"" + s + "\"");
}

std::vector<Subsector> all_subsectors() {
    return {Subsector::InsuranceBrokers, Subsector::LifeHealth, Subsector::Multiline,
            Subsector::PropertyCasualty, Subsector::Reinsurance, Subsector::Other};
}

std::string to_string(IndicatorKind kind) {
    switch (kind) {
        case IndicatorKind::LogReturn: return "LogReturn";
        case IndicatorKind::LogVol: return "LogVol";
        case IndicatorKind::CAViaR: return "CAViaR";
        case IndicatorKind::CARES: return "CARES";
    }
    return "LogReturn";
}

IndicatorKind parse_indicator_kind(const std::string& s) {
    if (s == "LogReturn") return IndicatorKind::LogReturn;
    if (s == "LogVol") return IndicatorKind::LogVol;
    if (s == "CAViaR") return IndicatorKind::CAViaR;
    if (s == "CARES") return IndicatorKind::CARES;
    throw IngestError("unknown indicator kind \"" + s + "\"");
}

std::optional<std::size_t> ReturnPanel::asset_index(const std::string& ticker) const {
    for (std::size_t i = 0; i < assets.size(); ++i)
        if (assets[i].ticker == ticker) return i;
    return std::nullopt;
}

namespace {

// Shared shape check for price-like CSVs (`date` column + numeric columns).
struct WidePanel {
    std::vector<std::string> dates;
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;  // NaN = blank
};

WidePanel read_wide_csv(const std::string& path, const ColumnSpec& schema) {
    const CsvTable table = read_csv(path);
    auto date_col = table.column(schema.date_column);
    if (!date_col || *date_col != 0)
        throw IngestError(path + ": first column must be \"" + schema.date_column + "\"");
    if (table.header.size() < 2) throw IngestError(path + ": no asset columns");

    WidePanel panel;
    panel.tickers.assign(table.header.begin() + 1, table.header.end());
    {
        std::set<std::string> unique(panel.tickers.begin(), panel.tickers.end());
        if (unique.size() != panel.tickers.size())
            throw IngestError(path + ": duplicate ticker column");
    }

    const std::size_t n = panel.tickers.size();
    panel.values.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(n));
    panel.dates.reserve(table.rows.size());
    std::string prev_date;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != n + 1)
            throw IngestError(path + ": row " + std::to_string(r + 2) + " has " +
                              std::to_string(row.size()) + " cells, expected " +
                              std::to_string(n + 1));
        const std::string& date = row[0];
        if (date.empty())
            throw IngestError(path + ": row " + std::to_string(r + 2) + " has empty date");
        if (!prev_date.empty()) {
            if (date == prev_date)
                throw IngestError(path + ": duplicate date " + date + " at row " +
                                  std::to_string(r + 2));
            if (date < prev_date)
                throw IngestError(path + ": dates not increasing at row " + std::to_string(r + 2));
        }
        prev_date = date;
        panel.dates.push_back(date);
        for (std::size_t c = 0; c < n; ++c) {
            const std::string context =
                path + " row " + std::to_string(r + 2) + " column " + panel.tickers[c];
            auto value = parse_cell_number(row[c + 1], context);
            panel.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                value ? *value : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return panel;
}

}  // namespace

PricePanel load_price_csv(const std::string& path, const ColumnSpec& schema) {
    WidePanel wide = read_wide_csv(path, schema);
    PricePanel panel;
    panel.dates = std::move(wide.dates);
    panel.prices = std::move(wide.values);
    panel.assets.reserve(wide.tickers.size());
    for (auto& ticker : wide.tickers) {
        AssetMeta meta;
        meta.ticker = std::move(ticker);
        meta.market_cap.assign(panel.dates.size(), std::numeric_limits<double>::quiet_NaN());
        panel.assets.push_back(std::move(meta));
    }
    return panel;
}

void attach_market_caps(PricePanel& panel, const std::string& caps_path,
                        const ColumnSpec& schema) {
    WidePanel caps = read_wide_csv(caps_path, schema);
    if (caps.dates != panel.dates)
        throw IngestError(caps_path + ": cap dates do not match the price panel");
    std::unordered_map<std::string, std::size_t> cap_col;
    for (std::size_t c = 0; c < caps.tickers.size(); ++c) cap_col[caps.tickers[c]] = c;
    for (auto& asset : panel.assets) {
        auto it = cap_col.find(asset.ticker);
        if (it == cap_col.end()) continue;  // no caps for this asset: stays NaN
        for (std::size_t t = 0; t < panel.dates.size(); ++t) {
            const double v = caps.values(static_cast<Eigen::Index>(t),
                                         static_cast<Eigen::Index>(it->second));
            if (!std::isnan(v) && v < 0.0)
                throw IngestError(caps_path + ": negative market cap for " + asset.ticker +
                                  " on " + panel.dates[t]);
            asset.market_cap[t] = v;
        }
    }
}

void attach_metadata(PricePanel& panel, const std::string& metadata_path) {
    const CsvTable table = read_csv(metadata_path);
    auto ticker_col = table.column("ticker");
    auto name_col = table.column("name");
    auto country_col = table.column("country");
    auto subsector_col = table.column("subsector");
    if (!ticker_col || !name_col || !country_col || !subsector_col)
        throw IngestError(metadata_path + ": expected header ticker,name,country,subsector");
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& ticker = table.rows[r][*ticker_col];
        if (!row_of.emplace(ticker, r).second)
            throw IngestError(metadata_path + ": duplicate ticker " + ticker);
    }
    for (auto& asset : panel.assets) {
        auto it = row_of.find(asset.ticker);
        if (it == row_of.end()) continue;
        const auto& row = table.rows[it->second];
        asset.name = row[*name_col];
        asset.country = row[*country_col];
        asset.subsector = parse_subsector(row[*subsector_col]);
    }
}

ReturnPanel compute_log_returns(const PricePanel& panel) {
    if (panel.dates.size() < 2) throw DataError("compute_log_returns: need at least 2 dates");
    const auto T = static_cast<Eigen::Index>(panel.dates.size());
    const auto n = static_cast<Eigen::Index>(panel.assets.size());
    for (Eigen::Index t = 0; t < T; ++t)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double p = panel.prices(t, j);
            if (!std::isnan(p) && p <= 0.0)
                throw DataError("nonpositive price for " + panel.assets[j].ticker + " on " +
                                panel.dates[t]);
        }

    ReturnPanel out;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.returns.resize(T - 1, n);
    out.percent = true;
    for (Eigen::Index t = 1; t < T; ++t)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double p0 = panel.prices(t - 1, j);
            const double p1 = panel.prices(t, j);
            out.returns(t - 1, j) = (std::isnan(p0) || std::isnan(p1))
                                        ? std::numeric_limits<double>::quiet_NaN()
                                        : 100.0 * std::log(p1 / p0);
        }
    out.assets = panel.assets;
    for (auto& asset : out.assets)
        if (!asset.market_cap.empty())
            asset.market_cap.erase(asset.market_cap.begin());
    out.zero_filled.assign(panel.assets.size(), false);
    return out;
}

ReturnPanel apply_liquidity_filter(const ReturnPanel& panel, double min_nonzero_frac) {
    if (min_nonzero_frac <= 0.0 || min_nonzero_frac >= 1.0)
        throw DataError("apply_liquidity_filter: threshold must lie in (0,1)");
    const auto T = static_cast<Eigen::Index>(panel.dates.size());
    const auto n = static_cast<Eigen::Index>(panel.assets.size());

    std::vector<Eigen::Index> keep;
    std::vector<bool> filled(panel.assets.size(), false);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index nonzero = 0;
        for (Eigen::Index t = 0; t < T; ++t) {
            const double r = panel.returns(t, j);
            if (std::isnan(r)) filled[static_cast<std::size_t>(j)] = true;
            else if (r != 0.0) ++nonzero;
        }
        // strict: the nonzero count must exceed the threshold
        if (static_cast<double>(nonzero) > min_nonzero_frac * static_cast<double>(T))
            keep.push_back(j);
    }
    if (keep.empty()) throw DataError("apply_liquidity_filter: no asset survives the filter");

    ReturnPanel out;
    out.dates = panel.dates;
    out.percent = panel.percent;
    out.returns.resize(T, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const Eigen::Index j = keep[c];
        for (Eigen::Index t = 0; t < T; ++t) {
            const double r = panel.returns(t, j);
            out.returns(t, static_cast<Eigen::Index>(c)) = std::isnan(r) ? 0.0 : r;
        }
        out.assets.push_back(panel.assets[static_cast<std::size_t>(j)]);
        out.zero_filled.push_back(filled[static_cast<std::size_t>(j)]);
    }
    return out;
}

SubsectorIndexResult build_subsector_index(const ReturnPanel& panel, Subsector subsector) {
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < panel.assets.size(); ++j)
        if (panel.assets[j].subsector == subsector) members.push_back(j);
    if (members.empty())
        throw DataError("build_subsector_index: no asset in subsector " + to_string(subsector));

    SubsectorIndexResult out;
    out.series.kind = IndicatorKind::LogReturn;
    out.series.dates = panel.dates;
    out.series.source_ticker = to_string(subsector);
    out.series.values.resize(panel.dates.size());

    for (std::size_t t = 0; t < panel.dates.size(); ++t) {
        double cap_total = 0.0;
        for (auto j : members) {
            const double r = panel.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
            const double cap = t < panel.assets[j].market_cap.size()
                                   ? panel.assets[j].market_cap[t]
                                   : std::numeric_limits<double>::quiet_NaN();
            if (std::isnan(r) || std::isnan(cap)) continue;  // weight zero that day
            cap_total += cap;
        }
        double value = 0.0;
        if (cap_total <= 0.0) {
            out.degenerate_dates.push_back(panel.dates[t]);
        } else {
            for (auto j : members) {
                const double r =
                    panel.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
                const double cap = panel.assets[j].market_cap[t];
                if (std::isnan(r) || std::isnan(cap)) continue;
                value += (cap / cap_total) * r;
            }
        }
        out.series.values[t] = value;
    }
    return out;
}

}  // namespace spillnet
