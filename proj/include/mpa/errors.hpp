#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mpa {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Boundary conditions of a maneuver cannot be met under the vehicle bounds.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The optimizer hit its iteration cap. Carries the best iterate found.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> best)
        : std::runtime_error(what), best_iterate(std::move(best)) {}

    std::vector<double> best_iterate;
};

/// Malformed input file. The message names the offending field or line.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A loaded file parsed but failed validation.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (subgraph presets, planner settings, scenarios).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One or more required automaton edges could not be optimized.
class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant violated; indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mpa
