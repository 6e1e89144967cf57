#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbsqa {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Record-level ingestion failure; carries the 1-based input line number so
/// the caller can decide between skipping and aborting.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

/// A domain-type invariant was violated (unsorted day, cross-day ping, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Not enough data to perform the operation (quintiles on <5 zones,
/// covariance on <2 clusters, metrics on an empty day, ...).
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Design matrix is rank deficient; names the offending columns.
class RankError : public Error {
public:
    RankError(const std::string& msg, std::vector<std::string> columns)
        : Error(msg), columns_(std::move(columns)) {}
    const std::vector<std::string>& columns() const { return columns_; }

private:
    std::vector<std::string> columns_;
};

/// A caller broke an API contract (e.g. variant/parent mismatch).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Process exit codes used by the CLI. 1 is left to the argument parser.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitIngestError = 3,
    kExitEmptySelection = 4,
    kExitNumericalError = 5,
};

}  // namespace lbsqa
