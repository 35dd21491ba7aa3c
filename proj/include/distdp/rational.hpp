#pragma once

#include <cstdint>
#include <optional>

namespace distdp {

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

/// Best rational approximation of `value` with denominator <= max_den
/// (continued-fraction convergents and semiconvergents). Returns nullopt
/// unless the approximation is within `tolerance * max(1, |value|)`.
std::optional<Fraction> rationalize(double value, std::int64_t max_den, double tolerance = 1e-12);

/// lcm(a, b), or nullopt if it exceeds `cap`.
std::optional<std::int64_t> bounded_lcm(std::int64_t a, std::int64_t b, std::int64_t cap);

} // namespace distdp
