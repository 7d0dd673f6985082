#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace signrel {

/// Malformed input data (bad row, bad rating). Carries the 1-based line number
/// when the error comes from a file.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input data is well-formed but unsuitable for the requested operation
/// (single-class test set, missing tie-strength weights, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or inconsistent configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace signrel
