#include "spillnet/indicators.hpp"

#include <nlohmann/json.hpp>

#include "spillnet/csv.hpp"
#include "spillnet/errors.hpp"
#include "spillnet/numerics.hpp"

namespace spillnet {

std::vector<AssetIndicators> derive_indicators(const std::vector<IndicatorSeries>& returns,
                                               const IndicatorConfig& config, const Exec& exec) {
    std::vector<AssetIndicators> out(returns.size());
    std::vector<std::string> errors(returns.size());

    parallel_for(exec, returns.size(), [&](std::size_t i) {
        const IndicatorSeries& r = returns[i];
        AssetIndicators& asset = out[i];
        asset.ticker = r.source_ticker;
        const std::uint64_t seed = mix_seed(config.root_seed, fnv1a64(r.source_ticker));
        try {
            if (config.kinds.count(IndicatorKind::LogReturn)) {
                IndicatorSeries copy = r;
                copy.kind = IndicatorKind::LogReturn;
                asset.series[IndicatorKind::LogReturn] = std::move(copy);
            }
            if (config.kinds.count(IndicatorKind::LogVol)) {
                GarchFit fit = select_garch(r.values, config.garch, Exec::serial());
                asset.garch_spec = fit.spec.name();
                asset.garch_bic = fit.bic;
                asset.garch_converged = fit.converged;
                asset.series[IndicatorKind::LogVol] =
                    conditional_log_volatility(fit, r.dates, r.source_ticker);
            }
            if (config.kinds.count(IndicatorKind::CAViaR)) {
                CaviarOptions opt = config.caviar;
                opt.seed = seed;
                CaviarFit fit = fit_caviar(r.values, config.tau, opt);
                asset.caviar_violation_rate = fit.violation_rate;
                asset.caviar_explosive = fit.explosive;
                IndicatorSeries s;
                s.kind = IndicatorKind::CAViaR;
                s.dates = r.dates;
                s.values = fit.var_series;
                s.source_ticker = r.source_ticker;
                asset.series[IndicatorKind::CAViaR] = std::move(s);
            }
            if (config.kinds.count(IndicatorKind::CARES)) {
                CaresOptions opt = config.cares;
                opt.care.seed = mix_seed(seed, 0xCA7E5);
                CaresFit fit = calibrate_cares(r.values, config.tau, opt);
                asset.cares_psi_star = fit.psi_star;
                asset.cares_violation_rate = fit.violation_rate;
                asset.cares_within_tolerance = fit.within_tolerance;
                IndicatorSeries s;
                s.kind = IndicatorKind::CARES;
                s.dates = r.dates;
                s.values = fit.es_series;
                s.source_ticker = r.source_ticker;
                asset.series[IndicatorKind::CARES] = std::move(s);
            }
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].empty()) continue;
        if (!config.lenient)
            throw EstimationError("indicator derivation failed for " + returns[i].source_ticker +
                                  ": " + errors[i]);
        out[i].error = errors[i];
        out[i].series.clear();
    }
    return out;
}

SeriesPanel indicator_panel(const std::vector<AssetIndicators>& assets, IndicatorKind kind) {
    SeriesPanel panel;
    bool first = true;
    for (const auto& asset : assets) {
        auto it = asset.series.find(kind);
        if (it == asset.series.end())
            throw DataError("indicator_panel: " + asset.ticker + " lacks " + to_string(kind));
        const IndicatorSeries& s = it->second;
        if (first) {
            panel.dates = s.dates;
            panel.values.resize(static_cast<Eigen::Index>(s.values.size()),
                                static_cast<Eigen::Index>(assets.size()));
            first = false;
        } else if (s.dates != panel.dates) {
            throw DataError("indicator_panel: date mismatch for " + asset.ticker);
        }
        const auto col = static_cast<Eigen::Index>(panel.labels.size());
        for (std::size_t t = 0; t < s.values.size(); ++t)
            panel.values(static_cast<Eigen::Index>(t), col) = s.values[t];
        panel.labels.push_back(asset.ticker);
    }
    return panel;
}

std::string indicator_filename(const std::string& ticker, IndicatorKind kind) {
    std::string safe = ticker;
    for (char& c : safe)
        if (c == '/' || c == '\\' || c == ' ') c = '_';
    return safe + "_" + to_string(kind) + ".csv";
}

void write_indicator_csv(const std::string& path, const IndicatorSeries& series) {
    CsvTable table;
    table.header = {"date", "ticker", "kind", "value"};
    for (std::size_t t = 0; t < series.values.size(); ++t)
        table.rows.push_back({series.dates[t], series.source_ticker, to_string(series.kind),
                              format_double(series.values[t])});
    write_csv(path, table);
}

IndicatorSeries read_indicator_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.header != std::vector<std::string>{"date", "ticker", "kind", "value"})
        throw IngestError(path + ": expected header date,ticker,kind,value");
    IndicatorSeries s;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row.size() != 4) throw IngestError(path + ": bad row " + std::to_string(i + 2));
        if (i == 0) {
            s.source_ticker = row[1];
            s.kind = parse_indicator_kind(row[2]);
        }
        s.dates.push_back(row[0]);
        auto v = parse_cell_number(row[3], path + " row " + std::to_string(i + 2));
        if (!v) throw IngestError(path + ": blank value at row " + std::to_string(i + 2));
        s.values.push_back(*v);
    }
    return s;
}

std::string diagnostics_to_json(const std::vector<AssetIndicators>& assets) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : assets) {
        nlohmann::json d;
        d["ticker"] = a.ticker;
        if (a.series.count(IndicatorKind::LogVol)) {
            d["garch"] = {{"spec", a.garch_spec},
                          {"bic", a.garch_bic},
                          {"converged", a.garch_converged}};
        }
        if (a.series.count(IndicatorKind::CAViaR)) {
            d["caviar"] = {{"violation_rate", a.caviar_violation_rate},
                           {"explosive", a.caviar_explosive}};
        }
        if (a.series.count(IndicatorKind::CARES)) {
            d["cares"] = {{"psi_star", a.cares_psi_star},
                          {"violation_rate", a.cares_violation_rate},
                          {"within_tolerance", a.cares_within_tolerance}};
        }
        j.push_back(std::move(d));
    }
    return j.dump(2);
}

}  // namespace spillnet
