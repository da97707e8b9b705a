#pragma once

#include <stdexcept>

namespace glstat {

// Sample too short for the requested kernel dimension or estimator.
class InsufficientData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exhaustive enumeration would exceed the configured cap.
class CapacityExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

// H_n is flat around a U-quantile, so no density estimate is available.
class DegenerateDensity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Zero spread where a positive variance is required (standardization, QQ).
class DegenerateVariance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Volatility recursion parameters outside the stationary region.
class StationarityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace glstat
