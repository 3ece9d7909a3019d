#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hgogp {

// Bad input: dimension mismatch, out-of-range parameter, non-increasing time.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation called on an object in the wrong state (e.g. empty regressor).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Factorization failure. Carries the pivot at which positivity was lost.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t pivot)
        : std::runtime_error(what), pivot_(pivot) {}
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

// Non-finite observer or agent state.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double time, std::vector<double> state)
        : std::runtime_error(what), time_(time), state_(std::move(state)) {}
    double time() const noexcept { return time_; }
    const std::vector<double>& state() const noexcept { return state_; }

private:
    double time_;
    std::vector<double> state_;
};

// Invalid configuration value; field is the dotted config path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace hgogp
