#pragma once

#include <stdexcept>
#include <string>

namespace distdp {

/// Input that violates a model, distribution or instance invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation refused because the instance exceeds a configured size cap
/// (reward support, path enumeration, kernel search budget).
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent arguments passed between modules (stage mismatch, unknown
/// reward value, wrong table shape).
class ShapeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Mass-balance tolerance used for every probability-vector invariant.
inline constexpr double kMassTolerance = 1e-12;

} // namespace distdp
