#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spillnet/errors.hpp"
#include "spillnet/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEstimation = 3;

void report(const spillnet::CommandLog& log) {
    for (const auto& w : log.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& o : log.outputs) std::cout << "wrote " << o << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional risk spillovers: variance-decomposition networks over "
                 "return, volatility, VaR and ES indicators"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string tier_name = "companies";
    std::string indicators_override;
    std::string sweep_name = "h";
    long long seed_override = -1;
    bool print_config_flag = false;

    app.add_option("--config", config_path, "flat key=value configuration file");
    app.add_option("--out", out_override, "output directory override");
    app.add_option("--seed", seed_override, "root seed override");
    app.add_option("--tier", tier_name, "markets|subsectors|companies");
    app.add_option("--indicators", indicators_override,
                   "comma-separated subset of LogReturn,LogVol,CAViaR,CARES");
    app.add_flag("--print-config", print_config_flag, "print the effective configuration");

    auto* ingest = app.add_subcommand("ingest", "load inputs and write the return panels");
    auto* indicators = app.add_subcommand("indicators", "derive per-asset indicator series");
    auto* stat = app.add_subcommand("static", "full-sample spillover tables");
    auto* rolling = app.add_subcommand("rolling", "rolling spillovers and episode means");
    auto* network = app.add_subcommand("network", "company networks, communities, core set");
    auto* robustness = app.add_subcommand("robustness", "sweep h, p or data frequency");
    robustness->add_option("--sweep", sweep_name, "h|p|frequency");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        spillnet::PipelineConfig config;
        if (!config_path.empty()) config = spillnet::load_config_file(config_path);
        if (!out_override.empty()) config.out = out_override;
        if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
        if (!indicators_override.empty())
            spillnet::apply_config_override(config, "indicators", indicators_override);
        if (print_config_flag) {
            spillnet::print_config(config, std::cout);
            return kExitOk;
        }
        const spillnet::Tier tier = spillnet::parse_tier(tier_name);

        if (*ingest) report(spillnet::cmd_ingest(config));
        if (*indicators) report(spillnet::cmd_indicators(config, tier));
        if (*stat) report(spillnet::cmd_static(config, tier));
        if (*rolling) report(spillnet::cmd_rolling(config, tier));
        if (*network) report(spillnet::cmd_network(config));
        if (*robustness) {
            spillnet::SweepKind sweep;
            if (sweep_name == "h") sweep = spillnet::SweepKind::Horizon;
            else if (sweep_name == "p") sweep = spillnet::SweepKind::LagOrder;
            else if (sweep_name == "frequency") sweep = spillnet::SweepKind::Frequency;
            else {
                std::cerr << "error: --sweep must be h|p|frequency\n";
                return kExitUsage;
            }
            report(spillnet::cmd_robustness(config, sweep));
        }
        return kExitOk;
    } catch (const spillnet::IngestError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const spillnet::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const spillnet::EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    }
}
