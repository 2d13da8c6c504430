#pragma once

#include <stdexcept>
#include <string>

namespace weaklab {

/// Bad arguments or malformed data handed to a library operation.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be read, written or decoded.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gradient descent produced a non-finite loss.
class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& what, int epoch)
        : std::runtime_error(what), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

/// Synthetic scene constraints could not be satisfied.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pipeline configuration is invalid or references missing inputs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace weaklab
