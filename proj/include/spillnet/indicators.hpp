#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spillnet/cares.hpp"
#include "spillnet/caviar.hpp"
#include "spillnet/exec.hpp"
#include "spillnet/garch.hpp"
#include "spillnet/series.hpp"
#include "spillnet/var.hpp"

namespace spillnet {

struct IndicatorConfig {
    std::set<IndicatorKind> kinds = {IndicatorKind::LogReturn, IndicatorKind::LogVol,
                                     IndicatorKind::CAViaR, IndicatorKind::CARES};
    double tau = 0.05;
    std::uint64_t root_seed = 42;
    GarchSearchOptions garch;
    CaviarOptions caviar;
    CaresOptions cares;
    // When set, per-asset failures are recorded on the result instead of
    // aborting the whole batch (the CLI drops those assets with a warning).
    bool lenient = false;
};

struct AssetIndicators {
    std::string ticker;
    std::map<IndicatorKind, IndicatorSeries> series;
    std::string error;  // set only in lenient mode

    // fit diagnostics for the metadata dump
    std::string garch_spec;
    double garch_bic = 0.0;
    bool garch_converged = false;
    double caviar_violation_rate = 0.0;
    bool caviar_explosive = false;
    double cares_psi_star = 0.0;
    double cares_violation_rate = 0.0;
    bool cares_within_tolerance = false;
};

// Derives every requested indicator for each return series. Each series is
// an independent work item with its own seed (root_seed mixed with the
// ticker hash), so results do not depend on scheduling.
std::vector<AssetIndicators> derive_indicators(const std::vector<IndicatorSeries>& returns,
                                               const IndicatorConfig& config,
                                               const Exec& exec = Exec::openmp());

// Aligns one indicator across assets into an estimation panel.
SeriesPanel indicator_panel(const std::vector<AssetIndicators>& assets, IndicatorKind kind);

// `date,ticker,kind,value` files, one per (asset, kind)
void write_indicator_csv(const std::string& path, const IndicatorSeries& series);
IndicatorSeries read_indicator_csv(const std::string& path);
std::string indicator_filename(const std::string& ticker, IndicatorKind kind);

std::string diagnostics_to_json(const std::vector<AssetIndicators>& assets);

}  // namespace spillnet
