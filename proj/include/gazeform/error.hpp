#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gazeform {

// Malformed or inconsistent input data. Parsers attach a 1-based line number.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
    InputError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::optional<std::size_t> line() const { return line_; }

private:
    std::optional<std::size_t> line_;
};

// A statistic is undefined for the given data (constant series, empty group, ...).
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gazeform
