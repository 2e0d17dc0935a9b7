#pragma once

#include <stdexcept>
#include <string>

namespace blockade {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller passed arguments outside an operation's domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class MemoryBudgetError : public Error {
public:
    using Error::Error;
};

// Degenerate or singular numerics (clamped cubic out of range, zero denominator).
class NumericalError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0, std::string key = {})
        : Error(what), line_(line), key_(std::move(key)) {}
    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

}  // namespace blockade
