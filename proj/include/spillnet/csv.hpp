#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spillnet {

// Minimal CSV table: header row plus string cells. Blank cells stay empty
// strings; quoting with double quotes is honored on read and applied on
// write only when a cell needs it.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& cell);

// Locale-independent numeric parse; returns nullopt for blank cells and
// throws IngestError (with context) for garbage.
std::optional<double> parse_cell_number(const std::string& cell, const std::string& context);

// Fixed formatting helpers used by all writers so outputs are diffable.
std::string format_double(double v);             // shortest round-trip
std::string format_fixed(double v, int digits);  // fixed decimals
}  // namespace spillnet
