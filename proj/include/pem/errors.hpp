#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pem {

// Base of every error thrown by the library. Catching pem::Error catches all.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite samples found in a field that was expected to be finite.
class CorruptionError : public Error {
public:
    using Error::Error;
};

// Spectral coefficients that do not describe real-valued data.
class AsymmetryError : public Error {
public:
    using Error::Error;
};

// Wrong component count, or fields living on different grids.
class ArityError : public Error {
public:
    using Error::Error;
};

// Poisson right-hand side with a nonzero mean mode.
class GaugeError : public Error {
public:
    using Error::Error;
};

// Total pressure (reference + fluctuation) not strictly positive.
class RegimeViolationError : public Error {
public:
    using Error::Error;
};

// Missing or malformed input data (e.g. no previous snapshot).
class DataError : public Error {
public:
    using Error::Error;
};

// NaN/Inf appeared while time stepping.
class BlowupError : public Error {
public:
    BlowupError(const std::string& what, double time) : Error(what), time_(time) {}
    // Last time at which the state was still finite.
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Invalid configuration. Carries every problem found, not only the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    explicit ConfigError(const std::string& problem)
        : ConfigError(std::vector<std::string>{problem}) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

} // namespace pem
