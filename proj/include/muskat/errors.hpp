#pragma once

#include <stdexcept>
#include <string>

namespace muskat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid/shape disagreement between operands (dims, modes or period differ).
struct GridMismatch : Error {
    using Error::Error;
};

// exp(nu*t*|xi|) exceeded the double range; carries the offending |k|.
struct WeightOverflow : Error {
    double k_abs;
    WeightOverflow(std::string msg, double k) : Error(std::move(msg)), k_abs(k) {}
};

// Fixed-point solve for the potential jump failed to contract.
struct NoConvergence : Error {
    int iterations;
    double residual;
    NoConvergence(std::string msg, int it, double res)
        : Error(std::move(msg)), iterations(it), residual(res) {}
};

// Interface norm crossed the blow-up guard (or went non-finite) during a run.
struct BlowUpDetected : Error {
    double time;
    double norm;
    BlowUpDetected(std::string msg, double t, double n)
        : Error(std::move(msg)), time(t), norm(n) {}
};

// Constant ledger / decay factor evaluated outside its validity region.
struct InvalidDomain : Error {
    using Error::Error;
};

// Log-log fit window holds fewer samples than required.
struct EmptyWindow : Error {
    using Error::Error;
};

// Strip estimate: fewer than the minimum number of usable spectral shells.
struct InsufficientDecades : Error {
    int shells;
    InsufficientDecades(std::string msg, int n) : Error(std::move(msg)), shells(n) {}
};

// Staircase exponent conditions violated.
struct ConstraintViolated : Error {
    using Error::Error;
};

struct IoFailure : Error {
    using Error::Error;
};

struct ConfigError : Error {
    std::string key;
    ConfigError(std::string msg, std::string k) : Error(std::move(msg)), key(std::move(k)) {}
};
struct BadValue : ConfigError {
    using ConfigError::ConfigError;
};
struct MissingRequired : ConfigError {
    using ConfigError::ConfigError;
};
struct UnknownKey : ConfigError {
    using ConfigError::ConfigError;
};

struct CorruptSnapshot : Error {
    using Error::Error;
};
struct FormatVersionMismatch : Error {
    using Error::Error;
};

} // namespace muskat
