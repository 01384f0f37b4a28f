#pragma once

#include <string>
#include <vector>

namespace spillnet {

// The four per-asset series the decomposition runs on.
enum class IndicatorKind { LogReturn, LogVol, CAViaR, CARES };

std::string to_string(IndicatorKind kind);
IndicatorKind parse_indicator_kind(const std::string& s);

struct IndicatorSeries {
    IndicatorKind kind = IndicatorKind::LogReturn;
    std::vector<std::string> dates;
    std::vector<double> values;
    std::string source_ticker;
};

}  // namespace spillnet
