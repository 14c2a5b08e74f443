#pragma once

#include <stdexcept>
#include <string>

namespace relaynet {

/// Thrown when an argument lies outside the domain of a model quantity
/// (coincident nodes, alpha <= 2, p outside its admissible range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical integral did not reach the requested accuracy. Carries the
/// best available estimate so callers can decide whether it is usable.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

} // namespace relaynet
