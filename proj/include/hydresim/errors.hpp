#pragma once

#include <stdexcept>
#include <string>

namespace hydresim {

/// Invalid or inconsistent configuration input (bad file, bad key, bad value).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched array lengths or grid dimensions.
class DimensionError : public std::runtime_error {
public:
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

/// Property evaluation outside its admissible window.
class OutOfRangeError : public std::runtime_error {
public:
    explicit OutOfRangeError(const std::string& what) : std::runtime_error(what) {}
};

/// Equation-of-state failure (no physical root).
class EosError : public std::runtime_error {
public:
    explicit EosError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear algebra failure (singular pivot, empty row, ...).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// A whole simulation step had to be abandoned (propagates the last good state).
class StepAbort : public std::runtime_error {
public:
    explicit StepAbort(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hydresim
