#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hnpf {

/// Malformed or out-of-contract input (dimension mismatch, bad probability, empty batch, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A function value or derivative came out NaN/Inf. `index()` names the offending entry.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string &what, std::size_t index)
        : std::runtime_error(what), index_(index)
    {
    }

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Requested operation is not defined for this problem (e.g. no analytic front).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string &what, std::size_t epoch)
        : std::runtime_error(what), epoch_(epoch)
    {
    }

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

} // namespace hnpf
