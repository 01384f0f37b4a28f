#include "spillnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spillnet/csv.hpp"
#include "spillnet/errors.hpp"
#include "spillnet/network.hpp"
#include "spillnet/panel.hpp"
#include "spillnet/var.hpp"

namespace fs = std::filesystem;

namespace spillnet {

std::string to_string(Tier tier) {
    switch (tier) {
        case Tier::Markets: return "markets";
        case Tier::Subsectors: return "subsectors";
        case Tier::Companies: return "companies";
    }
    return "companies";
}

Tier parse_tier(const std::string& s) {
    if (s == "markets") return Tier::Markets;
    if (s == "subsectors") return Tier::Subsectors;
    if (s == "companies") return Tier::Companies;
    throw IngestError("unknown tier \"" + s + "\" (markets|subsectors|companies)");
}

Exec PipelineConfig::exec() const {
    return threads == 1 ? Exec::serial() : Exec::openmp(threads);
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw IngestError("config key " + key + ": expected boolean, got \"" + v + "\"");
}

std::set<IndicatorKind> parse_indicator_set(const std::string& v) {
    std::set<IndicatorKind> kinds;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) kinds.insert(parse_indicator_kind(item));
    }
    if (kinds.empty()) throw IngestError("config: empty indicator set");
    return kinds;
}

}  // namespace

void apply_config_override(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "prices") c.prices = value;
    else if (key == "caps") c.caps = value;
    else if (key == "metadata") c.metadata = value;
    else if (key == "market_prices") c.market_prices = value;
    else if (key == "episodes") c.episodes = value;
    else if (key == "out") c.out = value;
    else if (key == "indicators") c.indicators = parse_indicator_set(value);
    else if (key == "tau") c.tau = std::stod(value);
    else if (key == "h") c.h = std::stoi(value);
    else if (key == "p") c.p = std::stoi(value);
    else if (key == "p_max") c.p_max = std::stoi(value);
    else if (key == "window") c.window = std::stoi(value);
    else if (key == "step") c.step = std::stoi(value);
    else if (key == "liquidity_threshold") c.liquidity_threshold = std::stod(value);
    else if (key == "estimator") {
        if (value == "auto") c.estimator = EstimatorRule::Auto;
        else if (value == "ols") c.estimator = EstimatorRule::OLS;
        else if (value == "postlasso") c.estimator = EstimatorRule::PostLASSO;
        else throw IngestError("config: estimator must be auto|ols|postlasso");
    } else if (key == "auto_lasso_above_n") c.auto_lasso_above_n = std::stoi(value);
    else if (key == "prune_quantile") c.prune_quantile = std::stod(value);
    else if (key == "prune_before_undirected") c.prune_before_undirected = parse_bool(value, key);
    else if (key == "seed") c.seed = std::stoull(value);
    else if (key == "garch_search") {
        if (value == "full") c.garch_quick = false;
        else if (value == "quick") c.garch_quick = true;
        else throw IngestError("config: garch_search must be full|quick");
    } else if (key == "cares_scan_full") c.cares_scan_full = parse_bool(value, key);
    else if (key == "horizon_convention") {
        if (value == "inclusive") c.convention = HorizonConvention::Inclusive;
        else if (value == "truncated") c.convention = HorizonConvention::Truncated;
        else throw IngestError("config: horizon_convention must be inclusive|truncated");
    } else if (key == "threads") c.threads = std::stoi(value);
    else throw IngestError("unknown config key \"" + key + "\"");
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open config file: " + path);
    PipelineConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IngestError(path + ":" + std::to_string(line_no) + ": expected key = value");
        apply_config_override(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

void print_config(const PipelineConfig& c, std::ostream& out) {
    out << "prices = " << c.prices << "\n";
    out << "caps = " << c.caps << "\n";
    out << "metadata = " << c.metadata << "\n";
    out << "market_prices = " << c.market_prices << "\n";
    out << "episodes = " << c.episodes << "\n";
    out << "out = " << c.out << "\n";
    std::string kinds;
    for (auto k : c.indicators) {
        if (!kinds.empty()) kinds += ",";
        kinds += to_string(k);
    }
    out << "indicators = " << kinds << "\n";
    out << "tau = " << format_double(c.tau) << "\n";
    out << "h = " << c.h << "\n";
    out << "p = " << c.p << "\n";
    out << "p_max = " << c.p_max << "\n";
    out << "window = " << c.window << "\n";
    out << "step = " << c.step << "\n";
    out << "liquidity_threshold = " << format_double(c.liquidity_threshold) << "\n";
    out << "estimator = "
        << (c.estimator == EstimatorRule::Auto
                ? "auto"
                : (c.estimator == EstimatorRule::OLS ? "ols" : "postlasso"))
        << "\n";
    out << "auto_lasso_above_n = " << c.auto_lasso_above_n << "\n";
    out << "prune_quantile = " << format_double(c.prune_quantile) << "\n";
    out << "prune_before_undirected = " << (c.prune_before_undirected ? "true" : "false") << "\n";
    out << "seed = " << c.seed << "\n";
    out << "garch_search = " << (c.garch_quick ? "quick" : "full") << "\n";
    out << "cares_scan_full = " << (c.cares_scan_full ? "true" : "false") << "\n";
    out << "horizon_convention = "
        << (c.convention == HorizonConvention::Inclusive ? "inclusive" : "truncated") << "\n";
    out << "threads = " << c.threads << "\n";
}

namespace {

PricePanel load_company_panel(const PipelineConfig& config) {
    if (config.prices.empty()) throw IngestError("config: prices path not set");
    PricePanel panel = load_price_csv(config.prices);
    if (!config.caps.empty()) attach_market_caps(panel, config.caps);
    if (!config.metadata.empty()) attach_metadata(panel, config.metadata);
    return panel;
}

std::vector<IndicatorSeries> panel_columns(const ReturnPanel& panel) {
    std::vector<IndicatorSeries> out;
    for (std::size_t j = 0; j < panel.assets.size(); ++j) {
        IndicatorSeries s;
        s.kind = IndicatorKind::LogReturn;
        s.dates = panel.dates;
        s.source_ticker = panel.assets[j].ticker;
        s.values.resize(panel.dates.size());
        for (std::size_t t = 0; t < panel.dates.size(); ++t)
            s.values[t] = panel.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::vector<IndicatorSeries> tier_returns(const PipelineConfig& config, Tier tier) {
    switch (tier) {
        case Tier::Markets: {
            if (config.market_prices.empty())
                throw IngestError("config: market_prices path not set (markets tier)");
            const PricePanel prices = load_price_csv(config.market_prices);
            const ReturnPanel returns = compute_log_returns(prices);
            for (Eigen::Index t = 0; t < returns.returns.rows(); ++t)
                for (Eigen::Index j = 0; j < returns.returns.cols(); ++j)
                    if (std::isnan(returns.returns(t, j)))
                        throw DataError("markets tier: missing return for " +
                                        returns.assets[static_cast<std::size_t>(j)].ticker +
                                        " on " + returns.dates[static_cast<std::size_t>(t)]);
            return panel_columns(returns);
        }
        case Tier::Subsectors: {
            const PricePanel prices = load_company_panel(config);
            const ReturnPanel returns = compute_log_returns(prices);
            std::vector<IndicatorSeries> out;
            for (Subsector sub : {Subsector::InsuranceBrokers, Subsector::LifeHealth,
                                  Subsector::Multiline, Subsector::PropertyCasualty,
                                  Subsector::Reinsurance}) {
                bool any = false;
                for (const auto& asset : returns.assets)
                    if (asset.subsector == sub) any = true;
                if (!any) continue;
                out.push_back(build_subsector_index(returns, sub).series);
            }
            if (out.empty()) throw DataError("subsectors tier: no subsector has members");
            return out;
        }
        case Tier::Companies: {
            const PricePanel prices = load_company_panel(config);
            const ReturnPanel returns =
                apply_liquidity_filter(compute_log_returns(prices), config.liquidity_threshold);
            return panel_columns(returns);
        }
    }
    throw IngestError("unknown tier");
}

namespace {

std::string indicators_dir(const PipelineConfig& c, Tier tier) {
    return c.out + "/indicators/" + to_string(tier);
}
std::string static_dir(const PipelineConfig& c, Tier tier) {
    return c.out + "/static/" + to_string(tier);
}

void write_wide_returns(const std::string& path, const std::vector<IndicatorSeries>& series,
                        CommandLog& log) {
    CsvTable table;
    table.header.push_back("date");
    for (const auto& s : series) table.header.push_back(s.source_ticker);
    if (!series.empty()) {
        for (std::size_t t = 0; t < series.front().dates.size(); ++t) {
            std::vector<std::string> row{series.front().dates[t]};
            for (const auto& s : series) row.push_back(format_double(s.values[t]));
            table.rows.push_back(std::move(row));
        }
    }
    write_csv(path, table);
    log.outputs.push_back(path);
}

IndicatorConfig indicator_config(const PipelineConfig& config) {
    IndicatorConfig ic;
    ic.kinds = config.indicators;
    ic.tau = config.tau;
    ic.root_seed = config.seed;
    ic.lenient = true;
    if (config.garch_quick) {
        for (int k = 0; k <= 1; ++k)
            for (int q = 0; q <= 1; ++q)
                ic.garch.restrict_to.push_back(
                    GarchSpec{k, q, 1, 1, VarianceFamily::Standard, InnovationDist::Gaussian});
    }
    if (config.cares_scan_full) ic.cares.early_stop_patience = 0;
    return ic;
}

int resolve_lag(const PipelineConfig& config, const SeriesPanel& panel) {
    return config.p > 0 ? config.p : select_lag_bic(panel, config.p_max);
}

VarEstimator resolve_estimator(const PipelineConfig& config, int n) {
    switch (config.estimator) {
        case EstimatorRule::OLS: return VarEstimator::OLS;
        case EstimatorRule::PostLASSO: return VarEstimator::PostLASSO;
        case EstimatorRule::Auto:
            return n > config.auto_lasso_above_n ? VarEstimator::PostLASSO : VarEstimator::OLS;
    }
    return VarEstimator::OLS;
}

VarModel fit_var(const SeriesPanel& panel, int p, VarEstimator estimator, const Exec& exec) {
    if (estimator == VarEstimator::OLS) return estimate_var_ols(panel, p);
    VarModel lasso = estimate_var_lasso(panel, p, {}, exec);
    return post_lasso(panel, p, *lasso.support_mask);
}

// Indicator files written by cmd_indicators, keyed by the manifest.
struct Manifest {
    std::vector<std::string> tickers;
    std::vector<IndicatorKind> kinds;
};

void write_manifest(const std::string& dir, const Manifest& m) {
    nlohmann::json j;
    j["tickers"] = m.tickers;
    j["kinds"] = nlohmann::json::array();
    for (auto k : m.kinds) j["kinds"].push_back(to_string(k));
    std::ofstream out(dir + "/manifest.json");
    out << j.dump(2) << "\n";
}

Manifest read_manifest(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in)
        throw DataError("missing " + dir + "/manifest.json (run the indicators command first)");
    nlohmann::json j;
    in >> j;
    Manifest m;
    for (const auto& t : j.at("tickers")) m.tickers.push_back(t.get<std::string>());
    for (const auto& k : j.at("kinds")) m.kinds.push_back(parse_indicator_kind(k.get<std::string>()));
    return m;
}

SeriesPanel load_indicator_panel(const std::string& dir, const Manifest& manifest,
                                 IndicatorKind kind) {
    SeriesPanel panel;
    bool first = true;
    for (const auto& ticker : manifest.tickers) {
        const IndicatorSeries s = read_indicator_csv(dir + "/" + indicator_filename(ticker, kind));
        if (first) {
            panel.dates = s.dates;
            panel.values.resize(static_cast<Eigen::Index>(s.values.size()),
                                static_cast<Eigen::Index>(manifest.tickers.size()));
            first = false;
        } else if (s.dates != panel.dates) {
            throw DataError(dir + ": indicator dates differ for " + ticker);
        }
        const auto col = static_cast<Eigen::Index>(panel.labels.size());
        for (std::size_t t = 0; t < s.values.size(); ++t)
            panel.values(static_cast<Eigen::Index>(t), col) = s.values[t];
        panel.labels.push_back(ticker);
    }
    if (first) throw DataError(dir + ": empty manifest");
    return panel;
}

}  // namespace

CommandLog cmd_ingest(const PipelineConfig& config) {
    CommandLog log;
    fs::create_directories(config.out + "/ingest");
    if (!config.market_prices.empty()) {
        write_wide_returns(config.out + "/ingest/returns_markets.csv",
                           tier_returns(config, Tier::Markets), log);
    }
    if (!config.prices.empty()) {
        if (!config.metadata.empty()) {
            const auto subsectors = tier_returns(config, Tier::Subsectors);
            write_wide_returns(config.out + "/ingest/returns_subsectors.csv", subsectors, log);
        }
        write_wide_returns(config.out + "/ingest/returns_companies.csv",
                           tier_returns(config, Tier::Companies), log);
    }
    if (log.outputs.empty()) throw IngestError("ingest: no input paths configured");
    return log;
}

CommandLog cmd_indicators(const PipelineConfig& config, Tier tier) {
    CommandLog log;
    const std::vector<IndicatorSeries> returns = tier_returns(config, tier);
    const IndicatorConfig ic = indicator_config(config);
    std::vector<AssetIndicators> assets = derive_indicators(returns, ic, config.exec());

    std::vector<AssetIndicators> kept;
    for (auto& asset : assets) {
        if (asset.error.empty()) kept.push_back(std::move(asset));
        else log.warnings.push_back("dropped " + asset.ticker + ": " + asset.error);
    }
    if (kept.empty())
        throw EstimationError("cmd_indicators: every asset failed; first: " +
                              (log.warnings.empty() ? "?" : log.warnings.front()));

    const std::string dir = indicators_dir(config, tier);
    fs::create_directories(dir);
    Manifest manifest;
    for (const auto& asset : kept) manifest.tickers.push_back(asset.ticker);
    for (auto kind : ic.kinds) manifest.kinds.push_back(kind);
    for (const auto& asset : kept)
        for (const auto& [kind, series] : asset.series) {
            const std::string path = dir + "/" + indicator_filename(asset.ticker, kind);
            write_indicator_csv(path, series);
            log.outputs.push_back(path);
        }
    write_manifest(dir, manifest);
    std::ofstream diag(dir + "/diagnostics.json");
    diag << diagnostics_to_json(kept);
    log.outputs.push_back(dir + "/diagnostics.json");
    return log;
}

CommandLog cmd_static(const PipelineConfig& config, Tier tier) {
    CommandLog log;
    const std::string in_dir = indicators_dir(config, tier);
    const Manifest manifest = read_manifest(in_dir);
    const std::string dir = static_dir(config, tier);
    fs::create_directories(dir);
    for (auto kind : manifest.kinds) {
        if (!config.indicators.count(kind)) continue;
        const SeriesPanel panel = load_indicator_panel(in_dir, manifest, kind);
        const int p = resolve_lag(config, panel);
        const VarEstimator estimator =
            resolve_estimator(config, static_cast<int>(panel.labels.size()));
        VarModel model;
        try {
            model = fit_var(panel, p, estimator, config.exec());
        } catch (const std::exception& e) {
            throw EstimationError("static " + to_string(tier) + "/" + to_string(kind) + ": " +
                                  e.what());
        }
        const SpilloverMatrix m = compute_gfevd(model, config.h, config.convention, panel.labels);
        const std::string table_path = dir + "/spillover_" + to_string(kind) + ".csv";
        write_spillover_csv(table_path, m);
        log.outputs.push_back(table_path);
        std::ofstream dump(dir + "/model_" + to_string(kind) + ".json");
        dump << var_model_to_json(model) << "\n";
        log.outputs.push_back(dir + "/model_" + to_string(kind) + ".json");
    }
    if (log.outputs.empty()) throw DataError("cmd_static: no indicator selected");
    return log;
}

CommandLog cmd_rolling(const PipelineConfig& config, Tier tier) {
    CommandLog log;
    const std::string in_dir = indicators_dir(config, tier);
    const Manifest manifest = read_manifest(in_dir);
    const std::string dir = config.out + "/rolling/" + to_string(tier);
    fs::create_directories(dir);
    std::vector<Episode> episodes;
    if (!config.episodes.empty()) episodes = load_episodes_csv(config.episodes);

    for (auto kind : manifest.kinds) {
        if (!config.indicators.count(kind)) continue;
        const SeriesPanel panel = load_indicator_panel(in_dir, manifest, kind);
        if (static_cast<int>(panel.values.rows()) < config.window)
            throw DataError("cmd_rolling: sample (" + std::to_string(panel.values.rows()) +
                            ") shorter than window (" + std::to_string(config.window) + ")");
        RollingConfig rc;
        rc.window = config.window;
        rc.step = config.step;
        rc.h = config.h;
        rc.convention = config.convention;
        rc.estimator = resolve_estimator(config, static_cast<int>(panel.labels.size()));
        rc.lag.per_window_bic = false;
        rc.lag.p = config.p > 0 ? config.p : resolve_lag(config, panel);
        const RollingResult rolled = rolling_spillovers(panel, rc, config.exec());
        for (const auto& f : rolled.failures)
            log.warnings.push_back("window " + std::to_string(f.window) + " (" + to_string(kind) +
                                   "): " + f.message);
        const std::string path = dir + "/rolling_" + to_string(kind) + ".csv";
        write_rolling_csv(path, rolled);
        log.outputs.push_back(path);
        if (!episodes.empty()) {
            const EpisodeTable table = episode_averages(rolled, episodes);
            const std::string episode_path = dir + "/episodes_" + to_string(kind) + ".csv";
            write_episode_csv(episode_path, table);
            log.outputs.push_back(episode_path);
        }
    }
    if (log.outputs.empty()) throw DataError("cmd_rolling: no indicator selected");
    return log;
}

CommandLog cmd_network(const PipelineConfig& config) {
    CommandLog log;
    const std::string in_dir = static_dir(config, Tier::Companies);
    const std::vector<IndicatorKind> required = {IndicatorKind::LogReturn, IndicatorKind::LogVol,
                                                 IndicatorKind::CAViaR, IndicatorKind::CARES};
    std::vector<SpilloverMatrix> matrices;
    for (auto kind : required) {
        const std::string path = in_dir + "/spillover_" + to_string(kind) + ".csv";
        if (!fs::exists(path))
            throw DataError("cmd_network: missing companies-tier result " + path +
                            " (all four indicator networks are required)");
        matrices.push_back(read_spillover_csv(path));
    }

    std::map<std::string, NodeMeta> meta;
    if (!config.metadata.empty()) {
        PricePanel panel;  // metadata only; reuse the attach path
        for (const auto& label : matrices.front().labels) {
            AssetMeta a;
            a.ticker = label;
            panel.assets.push_back(a);
        }
        attach_metadata(panel, config.metadata);
        for (const auto& a : panel.assets)
            meta[a.ticker] = NodeMeta{to_string(a.subsector), a.country};
    } else {
        for (const auto& label : matrices.front().labels) meta[label] = NodeMeta{"Other", ""};
    }

    const std::string dir = config.out + "/network";
    fs::create_directories(dir);
    std::vector<SpilloverNetwork> louvain_inputs;
    std::vector<CommunityPartition> partitions;
    nlohmann::json partition_dump = nlohmann::json::array();
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        const std::string kind = to_string(required[k]);
        const SpilloverNetwork full = build_network(matrices[k], meta);
        const SpilloverNetwork pruned = prune_edges(full, config.prune_quantile);
        export_graph(pruned, GraphFormat::GraphML, dir + "/" + kind + ".graphml");
        export_graph(pruned, GraphFormat::DOT, dir + "/" + kind + ".dot");
        export_graph(pruned, GraphFormat::JSON, dir + "/" + kind + ".json");
        log.outputs.push_back(dir + "/" + kind + ".graphml");
        log.outputs.push_back(dir + "/" + kind + ".dot");
        log.outputs.push_back(dir + "/" + kind + ".json");

        const SpilloverNetwork undirected =
            to_undirected(config.prune_before_undirected ? pruned : full);
        CommunityPartition part = louvain(undirected);
        nlohmann::json pj;
        pj["indicator"] = kind;
        pj["modularity"] = part.modularity;
        pj["communities"] = nlohmann::json::object();
        for (std::size_t i = 0; i < undirected.nodes.size(); ++i)
            pj["communities"][undirected.nodes[i].ticker] = part.assignment[i];
        partition_dump.push_back(std::move(pj));
        louvain_inputs.push_back(undirected);
        partitions.push_back(std::move(part));
    }
    {
        std::ofstream out(dir + "/partitions.json");
        out << partition_dump.dump(2) << "\n";
        log.outputs.push_back(dir + "/partitions.json");
    }

    const std::vector<std::string> core = central_intersection(louvain_inputs, partitions);
    CsvTable report;
    report.header = {"ticker"};
    for (auto kind : required) {
        report.header.push_back(to_string(kind) + "_to");
        report.header.push_back(to_string(kind) + "_from");
        report.header.push_back(to_string(kind) + "_net");
    }
    for (const auto& ticker : core) {
        std::vector<std::string> row{ticker};
        for (const auto& m : matrices) {
            const SpilloverSummary s = summarize(m);
            const auto it = std::find(m.labels.begin(), m.labels.end(), ticker);
            const auto i = static_cast<Eigen::Index>(it - m.labels.begin());
            row.push_back(format_double(s.to_others(i)));
            row.push_back(format_double(s.from_others(i)));
            row.push_back(format_double(s.net(i)));
        }
        report.rows.push_back(std::move(row));
    }
    write_csv(dir + "/core_intersection.csv", report);
    log.outputs.push_back(dir + "/core_intersection.csv");
    return log;
}

IndicatorSeries aggregate_weekly(const IndicatorSeries& daily) {
    IndicatorSeries weekly;
    weekly.kind = daily.kind;
    weekly.source_ticker = daily.source_ticker;
    const std::size_t blocks = daily.values.size() / 5;
    for (std::size_t b = 0; b < blocks; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 5; ++i) sum += daily.values[b * 5 + i];
        weekly.values.push_back(sum);
        weekly.dates.push_back(daily.dates[b * 5 + 4]);
    }
    return weekly;
}

CommandLog cmd_robustness(const PipelineConfig& config, SweepKind sweep) {
    CommandLog log;
    const std::string in_dir = indicators_dir(config, Tier::Companies);
    const Manifest manifest = read_manifest(in_dir);
    SeriesPanel daily = load_indicator_panel(in_dir, manifest, IndicatorKind::LogReturn);
    const int n = static_cast<int>(daily.labels.size());
    const VarEstimator estimator = resolve_estimator(config, n);
    const int p = config.p > 0 ? config.p : 1;

    struct Column {
        std::string name;
        SpilloverSummary summary;
    };
    std::vector<Column> columns;
    auto run = [&](const SeriesPanel& panel, int h, int lag, const std::string& name) {
        const VarModel model = fit_var(panel, lag, estimator, config.exec());
        const SpilloverMatrix m = compute_gfevd(model, h, config.convention, panel.labels);
        columns.push_back({name, summarize(m)});
    };

    std::string sweep_name;
    switch (sweep) {
        case SweepKind::Horizon:
            sweep_name = "h";
            for (int h : {10, 15, 20}) run(daily, h, p, "h" + std::to_string(h));
            break;
        case SweepKind::LagOrder:
            sweep_name = "p";
            for (int lag : {1, 2, 3}) run(daily, config.h, lag, "p" + std::to_string(lag));
            break;
        case SweepKind::Frequency: {
            sweep_name = "frequency";
            run(daily, config.h, p, "daily");
            SeriesPanel weekly;
            weekly.labels = daily.labels;
            for (int j = 0; j < n; ++j) {
                IndicatorSeries s;
                s.dates = daily.dates;
                s.source_ticker = daily.labels[static_cast<std::size_t>(j)];
                s.values.assign(daily.values.col(j).data(),
                                daily.values.col(j).data() + daily.values.rows());
                const IndicatorSeries w = aggregate_weekly(s);
                if (weekly.dates.empty()) {
                    weekly.dates = w.dates;
                    weekly.values.resize(static_cast<Eigen::Index>(w.values.size()),
                                         static_cast<Eigen::Index>(n));
                }
                for (std::size_t t = 0; t < w.values.size(); ++t)
                    weekly.values(static_cast<Eigen::Index>(t), j) = w.values[t];
            }
            run(weekly, config.h, p, "weekly");
            break;
        }
    }

    const std::string dir = config.out + "/robustness";
    fs::create_directories(dir);
    CsvTable table;
    table.header = {"ticker"};
    for (const auto& c : columns) {
        table.header.push_back("to_" + c.name);
        table.header.push_back("net_" + c.name);
    }
    for (int j = 0; j < n; ++j) {
        std::vector<std::string> row{daily.labels[static_cast<std::size_t>(j)]};
        for (const auto& c : columns) {
            row.push_back(format_double(c.summary.to_others(j)));
            row.push_back(format_double(c.summary.net(j)));
        }
        table.rows.push_back(std::move(row));
    }
    const std::string path = dir + "/sweep_" + sweep_name + ".csv";
    write_csv(path, table);
    log.outputs.push_back(path);
    return log;
}

}  // namespace spillnet
