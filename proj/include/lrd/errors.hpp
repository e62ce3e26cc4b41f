#pragma once

#include <stdexcept>
#include <string>

namespace lrd {

/// Thrown when an estimator cannot produce a finite estimate from the data
/// it was given (degenerate series, too few usable regression points, ...).
/// Parameter/contract violations use std::invalid_argument / std::out_of_range.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lrd
