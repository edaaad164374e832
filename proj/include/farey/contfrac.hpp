#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "farey/fraction.hpp"

namespace farey {

/// Continued-fraction expansion x = [n_1, n_2, ...] of x in (0,1).
/// Canonical form for rationals: all digits >= 1, last digit >= 2
/// (so 1/2 = [2], 5/8 = [1,1,1,2]). `exact` is false for truncated
/// real-input expansions.
struct CFExpansion {
    std::vector<std::uint64_t> digits;
    bool exact = true;

    std::uint64_t digit_sum() const {
        std::uint64_t s = 0;
        for (auto d : digits) s += d;
        return s;
    }
};

/// Exact expansion of a reduced rational in (0,1) by integer Euclid.
inline CFExpansion expand(const Fraction& x) {
    if (x.num == 0 || x.num == x.den)
        throw std::domain_error("expand: x must lie strictly inside (0,1)");
    CFExpansion cf;
    std::uint64_t a = x.den, b = x.num;  // x = b/a, a > b >= 1
    while (b != 0) {
        cf.digits.push_back(a / b);
        const std::uint64_t r = a % b;
        a = b;
        b = r;
    }
    // Euclid ends [..., n, 1] exactly when the pre-canonical tail is 1; merge it.
    if (cf.digits.size() > 1 && cf.digits.back() == 1) {
        cf.digits.pop_back();
        cf.digits.back() += 1;
    }
    return cf;
}

/// Guarded expansion of a double in (0,1). The residue is tracked as an
/// interval [lo,hi] so the expansion stops before floating error can
/// flip a digit.
inline CFExpansion expand(double x, std::size_t max_terms) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("expand: x must lie in (0,1)");
    CFExpansion cf;
    cf.exact = false;
    const double ulp = std::nextafter(x, 2.0) - x;
    double lo = x - ulp, hi = x + ulp;
    while (cf.digits.size() < max_terms && lo > 0.0 && hi < 1.0) {
        const double ilo = 1.0 / hi, ihi = 1.0 / lo;  // 1/residue, increasing
        const double d = std::floor(ilo);
        if (std::floor(ihi) != d || d < 1.0) break;  // digit no longer certain
        cf.digits.push_back(static_cast<std::uint64_t>(d));
        lo = ilo - d;
        hi = ihi - d;
    }
    return cf;
}

/// Convergents P_N/Q_N of an expansion, exact 64-bit integers.
/// Q_N = n_N Q_{N-1} + Q_{N-2} with Q_0 = 1, Q_{-1} = 0, and the
/// analogous recurrence for P. entries[N-1] holds (P_N, Q_N).
/// On 64-bit overflow the sequence is truncated and overflow_index
/// reports the first N (1-based) that could not be represented.
struct Convergents {
    struct Entry {
        std::uint64_t p, q;
    };
    std::vector<Entry> entries;
    std::optional<std::size_t> overflow_index;

    Fraction final_convergent() const {
        if (entries.empty()) throw std::domain_error("Convergents: empty");
        return Fraction(entries.back().p, entries.back().q);
    }
};

inline Convergents cumulants(const CFExpansion& cf) {
    if (cf.digits.empty()) throw std::domain_error("cumulants: empty expansion");
    Convergents out;
    std::uint64_t pm1 = 1, p0 = 0;  // P_{-1}, P_0
    std::uint64_t qm1 = 0, q0 = 1;  // Q_{-1}, Q_0
    for (std::size_t i = 0; i < cf.digits.size(); ++i) {
        const std::uint64_t n = cf.digits[i];
        std::uint64_t p = 0, q = 0, t = 0;
        if (__builtin_mul_overflow(n, p0, &t) || __builtin_add_overflow(t, pm1, &p) ||
            __builtin_mul_overflow(n, q0, &t) || __builtin_add_overflow(t, qm1, &q)) {
            out.overflow_index = i + 1;
            break;
        }
        out.entries.push_back({p, q});
        pm1 = p0;
        p0 = p;
        qm1 = q0;
        q0 = q;
    }
    return out;
}

/// Digit frequencies lambda_1..lambda_K (lambda[d-1] is the frequency of digit d).
struct DigitFrequencies {
    std::vector<double> lambda;

    double sum() const {
        double s = 0;
        for (double v : lambda) s += v;
        return s;
    }
};

inline constexpr double lemma1_constant() {
    // sqrt(pi^2/6 - 1), the cumulant growth prefactor
    return 0.80307856696122228;  // computed once to full double precision
}

/// Estimate of Q_N^{1/N} for words with digit frequencies lambda:
/// sqrt(pi^2/6 - 1) * prod_d (d+1)^{lambda_d}.
inline double lemma1_estimate(const DigitFrequencies& freqs) {
    double log_prod = 0.0;
    for (std::size_t i = 0; i < freqs.lambda.size(); ++i)
        log_prod += freqs.lambda[i] * std::log(static_cast<double>(i + 2));
    return lemma1_constant() * std::exp(log_prod);
}

/// One concentration-index sample: at level k = n_1 + ... + n_N the nested
/// interval containing x has endpoint denominators Q_N and Q_N + Q_{N-1},
/// measure 2^-k, hence alpha_k = k ln2 / ln(Q_N (Q_N + Q_{N-1})).
struct AlphaSample {
    std::uint64_t k = 0;
    std::size_t terms = 0;  // N
    double alpha = 0.0;
};

/// Pointwise concentration index sequence along the expansion of x.
/// Cumulant logs use the stable recurrence
///   ln Q_N = ln Q_{N-1} + ln(n_N + exp(ln Q_{N-2} - ln Q_{N-1}))
/// so arbitrarily deep sequences never overflow.
inline std::vector<AlphaSample> alpha_sequence(const CFExpansion& cf, std::uint64_t k_max) {
    std::vector<AlphaSample> out;
    const double ln2 = std::numbers::ln2;
    double lq_prev = 0.0;                // ln Q_0 = 0
    double lq_prevprev = -std::numeric_limits<double>::infinity();  // ln Q_{-1}
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < cf.digits.size(); ++i) {
        const std::uint64_t n = cf.digits[i];
        if (n > k_max || k + n > k_max) break;
        k += n;
        const double lq =
            lq_prev + std::log(static_cast<double>(n) + std::exp(lq_prevprev - lq_prev));
        // ln of interval length reciprocal: ln(Q_N) + ln(Q_N + Q_{N-1})
        const double llen = lq + lq + std::log1p(std::exp(lq_prev - lq));
        if (llen > 0.0)
            out.push_back({k, i + 1, static_cast<double>(k) * ln2 / llen});
        lq_prevprev = lq_prev;
        lq_prev = lq;
    }
    return out;
}

inline std::vector<AlphaSample> alpha_sequence(double x, std::uint64_t k_max) {
    return alpha_sequence(expand(x, 4 * k_max + 8), k_max);
}

}  // namespace farey
