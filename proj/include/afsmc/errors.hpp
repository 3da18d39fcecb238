#pragma once

#include <stdexcept>
#include <string>

namespace afsmc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, grids, bounds or schedules.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Every fuzzy rule activation underflowed, so the basis cannot be normalized.
class DegenerateActivationError : public Error {
public:
    using Error::Error;
};

/// The nominal input gain g1 is (numerically) zero.
class SingularGainError : public Error {
public:
    using Error::Error;
};

/// A non-finite value appeared during integration.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double t) : Error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace afsmc
