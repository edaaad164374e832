#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "farey/partition.hpp"

namespace farey {

enum class SpectrumKind { computational, theoretical, inverted };

inline const char* to_string(SpectrumKind k) {
    switch (k) {
        case SpectrumKind::computational: return "computational";
        case SpectrumKind::theoretical: return "theoretical";
        default: return "inverted";
    }
}

/// One spectrum sample. q is the Legendre parameter when the point came
/// from a partition-function transform, NaN otherwise.
struct SpectrumPoint {
    double alpha = 0.0;
    double f = 0.0;
    double q = std::numeric_limits<double>::quiet_NaN();
};

/// Ordered (alpha, f) curve with provenance. alpha is strictly increasing.
struct SpectrumCurve {
    SpectrumKind kind = SpectrumKind::computational;
    int k = 0;            // partition level, 0 when not applicable
    Domain domain = Domain::full;
    std::vector<SpectrumPoint> samples;

    /// Linear interpolation of f at alpha; requires alpha inside the range.
    double value_at(double alpha) const {
        if (samples.size() < 2 || alpha < samples.front().alpha || alpha > samples.back().alpha)
            throw std::domain_error("SpectrumCurve::value_at: alpha outside sampled range");
        std::size_t hi = 1;
        while (samples[hi].alpha < alpha) ++hi;
        const auto& a = samples[hi - 1];
        const auto& b = samples[hi];
        const double t = (alpha - a.alpha) / (b.alpha - a.alpha);
        return a.f + t * (b.f - a.f);
    }
};

/// Legendre-transform curve from tau samples at fixed k:
/// alpha_bar(q) = tau_k'(q), f_bar(q) = q alpha_bar - tau_k(q).
/// alpha_bar decreases in q (convexity of ln sum p^q); the output is
/// reversed so alpha increases. Ties from flat stretches are collapsed;
/// a genuinely increasing alpha_bar aborts with diagnostics.
inline SpectrumCurve legendre_spectrum(const std::vector<TauSample>& taus) {
    if (taus.empty()) throw std::domain_error("legendre_spectrum: no tau samples");
    SpectrumCurve out;
    out.kind = SpectrumKind::computational;
    out.k = taus.front().k;
    out.samples.reserve(taus.size());
    constexpr double kMonotoneSlack = 1e-12;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double alpha = taus[i].tau_prime;
        const double f = taus[i].q * alpha - taus[i].tau;
        if (i > 0) {
            const double prev = taus[i - 1].tau_prime;
            if (alpha > prev + kMonotoneSlack)
                throw std::runtime_error(
                    "legendre_spectrum: alpha_bar not decreasing at q = " +
                    std::to_string(taus[i].q) + " (" + std::to_string(prev) + " -> " +
                    std::to_string(alpha) + "); convexity numerically broken");
            if (alpha >= prev) continue;  // collapse tie
        }
        out.samples.push_back({alpha, f, taus[i].q});
    }
    std::reverse(out.samples.begin(), out.samples.end());
    return out;
}

/// Inversion formula on a sampled curve: (alpha, f) -> (1/alpha, f/alpha),
/// order reversed to keep alpha increasing. An involution.
inline SpectrumCurve invert_spectrum(const SpectrumCurve& curve) {
    SpectrumCurve out = curve;
    out.kind = curve.kind == SpectrumKind::inverted ? SpectrumKind::computational
                                                    : SpectrumKind::inverted;
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const auto& s = curve.samples[curve.samples.size() - 1 - i];
        if (s.alpha == 0.0) throw std::domain_error("invert_spectrum: alpha = 0 sample");
        out.samples[i] = {1.0 / s.alpha, s.f / s.alpha, s.q};
    }
    return out;
}

/// The computational spectrum f_C^(k): the inverted Legendre curve of the
/// level-k partition function, f_C^(k)(alpha) = alpha f_bar(1/alpha).
inline SpectrumCurve computational_spectrum(int k, const QGrid& grid, Domain domain = Domain::full,
                                            TauOptions opt = {}) {
    SpectrumCurve c = invert_spectrum(legendre_spectrum(tau_bar(k, grid, domain, opt)));
    c.kind = SpectrumKind::computational;
    c.k = k;
    c.domain = domain;
    return c;
}

/// alpha at which f_C^(k) reaches 1: the reciprocal of beta_k = tau_k'(1).
inline double alpha_unity(int k, Domain domain = Domain::full, TauOptions opt = {}) {
    return 1.0 / beta_k(k, domain, opt);
}

/// Right end of the computational spectrum at the grid's largest q,
/// together with the analytic q -> infinity limit k ln2 / ln(k+1)
/// (the widest interval has denominator product k+1).
struct AlphaMaxResult {
    double alpha_max = 0.0;
    double analytic_limit = 0.0;
    double gap = 0.0;  // analytic_limit - alpha_max
    double q_used = 0.0;
};

inline AlphaMaxResult alpha_max(int k, const QGrid& grid, Domain domain = Domain::full,
                                TauOptions opt = {}) {
    AlphaMaxResult r;
    r.q_used = grid.qs.back();
    const double abar = tau_bar_prime(k, r.q_used, domain, opt);
    r.alpha_max = 1.0 / abar;
    r.analytic_limit =
        static_cast<double>(k) * std::numbers::ln2 / std::log(static_cast<double>(k) + 1.0);
    r.gap = r.analytic_limit - r.alpha_max;
    return r;
}

/// Discrete concavity check: all slopes of f against alpha non-increasing
/// within `slack`. Reports the worst offending second difference.
struct ConcavityReport {
    bool pass = true;
    double worst = 0.0;       // max slope increase found (positive = convex kink)
    std::size_t worst_index = 0;
    double slack = 0.0;
};

inline ConcavityReport concavity_report(const SpectrumCurve& curve, double slack = 1e-6) {
    if (curve.samples.size() < 3)
        throw std::domain_error("concavity_report: need at least 3 samples");
    ConcavityReport rep;
    rep.slack = slack;
    rep.worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.samples.size(); ++i) {
        const auto& a = curve.samples[i - 1];
        const auto& b = curve.samples[i];
        const auto& c = curve.samples[i + 1];
        const double s1 = (b.f - a.f) / (b.alpha - a.alpha);
        const double s2 = (c.f - b.f) / (c.alpha - b.alpha);
        const double increase = s2 - s1;
        if (increase > rep.worst) {
            rep.worst = increase;
            rep.worst_index = i;
        }
    }
    rep.pass = rep.worst <= slack;
    return rep;
}

}  // namespace farey
