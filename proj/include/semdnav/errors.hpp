#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semdnav {

/// Invalid network, camera, environment or run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The simulation reached a state it cannot continue from (non-finite
/// membrane values, delivery queue overflow).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a data invariant (e.g. timestamps going backwards).
class ValidationError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace semdnav
