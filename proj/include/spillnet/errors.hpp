#pragma once

#include <stdexcept>
#include <string>

namespace spillnet {

// Bad or malformed input files (CSV parse failures, duplicate dates, ...).
// The CLI maps this to exit code 2.
class IngestError : public std::runtime_error {
public:
    explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

// Violated numerical preconditions or domain constraints on otherwise
// well-formed data (nonpositive price, zero-variance row, ...).
// The CLI maps this to exit code 2 as well.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Fitting/optimization failures: non-convergence, rank deficiency,
// degenerate objectives. The CLI maps this to exit code 3.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spillnet
