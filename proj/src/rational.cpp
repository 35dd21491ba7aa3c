#include "distdp/rational.hpp"

#include <cmath>
#include <numeric>

namespace distdp {

std::optional<Fraction> rationalize(double value, std::int64_t max_den, double tolerance) {
    if (!std::isfinite(value) || std::abs(value) > 9e15)
        return std::nullopt;
    const double limit = tolerance * std::max(1.0, std::abs(value));

    const bool negative = value < 0.0;
    const double target = std::abs(value);

    // Convergents h/k of the continued fraction of target.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(target));
    std::int64_t k_prev = 0, k = 1;
    double frac = target - std::floor(target);
    Fraction best{h, 1};

    for (int iter = 0; iter < 64 && frac > 0.0; ++iter) {
        if (std::abs(static_cast<double>(best.num) / static_cast<double>(best.den) - target) <= limit)
            break;
        const double inv = 1.0 / frac;
        if (inv > 4e18)
            break;
        const auto a = static_cast<std::int64_t>(std::floor(inv));
        frac = inv - std::floor(inv);
        if (a > (max_den - k_prev) / k) {
            // Largest admissible semiconvergent.
            const std::int64_t t = (max_den - k_prev) / k;
            if (t > 0) {
                const std::int64_t hs = t * h + h_prev;
                const std::int64_t ks = t * k + k_prev;
                const double err_s = std::abs(static_cast<double>(hs) / static_cast<double>(ks) - target);
                const double err_c = std::abs(static_cast<double>(h) / static_cast<double>(k) - target);
                if (err_s < err_c)
                    best = {hs, ks};
            }
            break;
        }
        const std::int64_t k_next = a * k + k_prev;
        const std::int64_t h_next = a * h + h_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        best = {h, k};
    }

    if (std::abs(static_cast<double>(best.num) / static_cast<double>(best.den) - target) > limit)
        return std::nullopt;
    if (negative)
        best.num = -best.num;
    const std::int64_t g = std::gcd(best.num, best.den);
    if (g > 1) {
        best.num /= g;
        best.den /= g;
    }
    return best;
}

std::optional<std::int64_t> bounded_lcm(std::int64_t a, std::int64_t b, std::int64_t cap) {
    const std::int64_t g = std::gcd(a, b);
    const std::int64_t factor = a / g;
    if (factor != 0 && b > cap / factor)
        return std::nullopt;
    const std::int64_t l = factor * b;
    if (l > cap)
        return std::nullopt;
    return l;
}

} // namespace distdp
