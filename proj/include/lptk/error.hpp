#pragma once

#include <stdexcept>
#include <string>

namespace lptk {

/// Bad input to a library call: shape mismatch, out-of-range parameter,
/// non-finite data, label outside the loss's label space.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Tensor-kernel arity the kernelized path cannot handle (only q = 4 is
/// contracted through the Gram tensor).
class UnsupportedArity : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested Gram tensor exceeds the configured sample cap.
class MemoryCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure during a solve.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The current iterate has a non-finite objective.
class DivergenceError : public SolverError {
public:
    using SolverError::SolverError;
};

/// The per-iteration geometric decay inequality was violated.
class CertificateError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Backtracking exhausted its budget without an acceptable step.
class StagnationError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Malformed or truncated binary file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lptk
