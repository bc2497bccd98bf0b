#pragma once

#include <stdexcept>
#include <string>

namespace sbmf {

// Thrown when t == 0 exactly, so lambda is undefined.
class DegenerateSeparationError : public std::runtime_error {
public:
    explicit DegenerateSeparationError(const std::string& what, int iteration = -1)
        : std::runtime_error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

// Thrown when an iterative hard-assignment method empties a community.
class DegeneratePartitionError : public std::runtime_error {
public:
    explicit DegeneratePartitionError(const std::string& what, int iteration = -1)
        : std::runtime_error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

// Thrown when theory formulas are evaluated outside their regime assumptions.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace sbmf
