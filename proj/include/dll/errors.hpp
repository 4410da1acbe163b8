#pragma once

#include <stdexcept>
#include <string>

namespace dll {

// Error taxonomy shared by every module. All of these are programmer- or
// input-visible contract violations, so they carry a message and nothing else.

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an arithmetic op produces NaN/Inf.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed on-disk data (IDX, CIFAR batches, checkpoints, CSV).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid experiment / network configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation called out of order (e.g. error assignment before forward).
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unusable user-supplied input (empty corpus, ragged batch, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dll
