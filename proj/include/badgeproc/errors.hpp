#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace badgeproc {

// Base class for model-level failures. Derived types carry enough structure
// for callers (EM loop, CLI) to report what went wrong and where.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An event has zero intensity or zero mark probability under the current
// parameters. Carries the offending event index instead of silently
// producing -inf.
class ZeroLikelihoodError : public ModelError {
public:
    ZeroLikelihoodError(std::size_t event_index, const std::string& message)
        : ModelError(message + " (event " + std::to_string(event_index) + ")"),
          event_index_(event_index) {}

    std::size_t event_index() const noexcept { return event_index_; }

private:
    std::size_t event_index_;
};

// A parameter configuration that makes a distribution undefined
// (e.g. an all-zero weight vector that cannot be normalized).
class DegenerateParameterError : public ModelError {
public:
    using ModelError::ModelError;
};

// An answer mark was requested but no question exists before the query time.
class NoCandidateError : public ModelError {
public:
    using ModelError::ModelError;
};

// Forward sampling was asked to predict a next event from a process whose
// remaining intensity mass is (numerically) zero.
class NoEventExpectedError : public ModelError {
public:
    using ModelError::ModelError;
};

// Not enough observations for the requested statistic.
class InsufficientDataError : public ModelError {
public:
    using ModelError::ModelError;
};

// A violated internal invariant, e.g. a thinning acceptance ratio above 1.
class InternalInvariantError : public ModelError {
public:
    using ModelError::ModelError;
};

// Problems in on-disk data. `line` is 1-based when the failure is tied to a
// specific line of the input, 0 otherwise.
class DataFormatError : public std::runtime_error {
public:
    explicit DataFormatError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                      : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnsupportedVersionError : public DataFormatError {
public:
    using DataFormatError::DataFormatError;
};

}  // namespace badgeproc
