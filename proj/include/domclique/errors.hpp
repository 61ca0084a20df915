#pragma once

#include <stdexcept>
#include <string>

namespace domclique {

// Argument outside the mathematical domain of an operation (p not in (0,1),
// rho outside [1,2], r > n, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Request exceeds a configured size limit (graph capacity, exhaustive ceiling).
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// An estimator was asked for a value with no supporting samples.
class UndefinedEstimateError : public std::runtime_error {
public:
    explicit UndefinedEstimateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace domclique
