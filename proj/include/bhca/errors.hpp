#pragma once

#include <stdexcept>
#include <string>

namespace bhca {

/// Invalid or inconsistent configuration. `field()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Index spaces of two inputs do not line up (scenario vs rates, model vs assignment).
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bhca
