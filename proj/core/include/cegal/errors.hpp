#pragma once

#include <stdexcept>
#include <string>

namespace cegal {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A model failed a structural invariant (row sums, index ranges, ...).
struct InvalidModel : Error {
    explicit InvalidModel(const std::string& msg) : Error(msg) {}
};

/// A policy does not assign a valid action to every state.
struct IncompletePolicy : Error {
    explicit IncompletePolicy(const std::string& msg) : Error(msg) {}
};

/// Empty demonstration set where at least one trajectory is required.
struct NoDemonstrations : Error {
    explicit NoDemonstrations(const std::string& msg) : Error(msg) {}
};

/// Formula text could not be parsed; `position` is a byte offset into the input.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

/// The checker was asked to verify a formula shape it does not support.
struct UnsupportedFormula : Error {
    explicit UnsupportedFormula(const std::string& msg) : Error(msg) {}
};

/// A formula references an atomic label the model does not define.
struct UnknownLabel : Error {
    explicit UnknownLabel(const std::string& msg) : Error(msg) {}
};

/// Counterexample extraction was requested for a formula the model satisfies.
struct FormulaSatisfied : Error {
    explicit FormulaSatisfied(const std::string& msg) : Error(msg) {}
};

/// Counterexample aggregation over an empty path set.
struct EmptyCounterexample : Error {
    explicit EmptyCounterexample(const std::string& msg) : Error(msg) {}
};

/// Vectors of inconsistent dimension were mixed in one optimization problem.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// The initial policy handed to the learning loop fails verification.
struct UnsafeInitialPolicy : Error {
    explicit UnsafeInitialPolicy(const std::string& msg) : Error(msg) {}
};

/// The stationary projection of a step-dependent minimizer violates the
/// property that the step-dependent policy satisfies.
struct InfeasibleStationary : Error {
    double stationary_probability;
    double nonstationary_probability;
    InfeasibleStationary(const std::string& msg, double stationary, double nonstationary)
        : Error(msg), stationary_probability(stationary), nonstationary_probability(nonstationary) {}
};

/// Rejection sampling hit its attempt cap before accepting enough trajectories.
struct FilterExhausted : Error {
    explicit FilterExhausted(const std::string& msg) : Error(msg) {}
};

/// File could not be read, written or understood.
struct FileError : Error {
    explicit FileError(const std::string& msg) : Error(msg) {}
};

} // namespace cegal
