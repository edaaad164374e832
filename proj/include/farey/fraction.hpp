#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace farey {

/// Reduced rational p/q confined to [0,1], unsigned 64-bit parts.
/// Invariants: gcd(num, den) == 1, den >= 1, num <= den.
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    constexpr Fraction() = default;
    constexpr Fraction(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
        if (den == 0) throw std::domain_error("Fraction: zero denominator");
        if (num > den) throw std::domain_error("Fraction: value outside [0,1]");
        if (std::gcd(num, den) != 1) throw std::domain_error("Fraction: not reduced");
    }

    /// Reduce n/d to lowest terms. Accepts any n <= d representation.
    static constexpr Fraction reduced(std::uint64_t n, std::uint64_t d) {
        if (d == 0) throw std::domain_error("Fraction: zero denominator");
        const std::uint64_t g = std::gcd(n == 0 ? d : n, d);
        return Fraction(n / g, d / g);
    }

    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend constexpr bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend constexpr std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
        using u128 = unsigned __int128;
        return u128(a.num) * b.den <=> u128(b.num) * a.den;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Signed cross product a.num*b.den - b.num*a.den, the Farey neighbor determinant.
constexpr __int128 cross_determinant(const Fraction& a, const Fraction& b) {
    using i128 = __int128;
    return i128(a.num) * i128(b.den) - i128(b.num) * i128(a.den);
}

/// a and b bound a Farey interval: |a.num*b.den - b.num*a.den| == 1.
constexpr bool are_farey_neighbors(const Fraction& a, const Fraction& b) {
    const __int128 d = cross_determinant(a, b);
    return d == 1 || d == -1;
}

/// Mediant (a.num+b.num)/(a.den+b.den) of adjacent fractions a < b.
/// The result is automatically in lowest terms for Farey neighbors.
constexpr Fraction mediant(const Fraction& a, const Fraction& b) {
    if (!(a < b) || !are_farey_neighbors(a, b))
        throw std::domain_error("mediant: arguments are not ordered Farey neighbors");
    std::uint64_t n = 0, d = 0;
    if (__builtin_add_overflow(a.num, b.num, &n) || __builtin_add_overflow(a.den, b.den, &d))
        throw std::overflow_error("mediant: 64-bit overflow");
    Fraction r;
    r.num = n;
    r.den = d;
    return r;
}

}  // namespace farey
