#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "farey/contfrac.hpp"
#include "farey/spectrum.hpp"

namespace farey {

/// Closed-form dimension of F_m restricted to digits <= K:
/// 1 - 6/(pi^2 K) - 72 ln K / (pi^4 K^2).
inline double dim_EK(unsigned K) {
    if (K < 2) throw std::domain_error("dim_EK: K must be >= 2");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double Kd = static_cast<double>(K);
    return 1.0 - 6.0 / (pi2 * Kd) - 72.0 * std::log(Kd) / (pi2 * pi2 * Kd * Kd);
}

/// Digit cap matched to mean m: the next integer above e^((pi^2/6 - 1) m),
/// floored at 2 (the nonlinear system below needs at least two digits).
inline unsigned K_of_m(double m) {
    if (m < 1.0) throw std::domain_error("K_of_m: m must be >= 1");
    const double v = std::exp((std::numbers::pi * std::numbers::pi / 6.0 - 1.0) * m);
    const double c = std::ceil(v);
    return static_cast<unsigned>(std::max(2.0, c));
}

/// Dimension-attaining digit frequencies for large m:
/// lambda_d proportional to (d+1)^(-2 dim_EK(K)), d = 1..K.
inline DigitFrequencies lambda_bar(unsigned K) {
    const double expo = 2.0 * dim_EK(K);
    DigitFrequencies f;
    f.lambda.resize(K);
    double z = 0.0;
    for (unsigned d = 1; d <= K; ++d) {
        f.lambda[d - 1] = std::pow(static_cast<double>(d + 1), -expo);
        z += f.lambda[d - 1];
    }
    for (double& v : f.lambda) v /= z;
    return f;
}

namespace detail {

inline double alpha_from_lambda(double m, const std::vector<double>& lambda) {
    double w = std::log(lemma1_constant());
    for (std::size_t i = 0; i < lambda.size(); ++i)
        w += lambda[i] * std::log(static_cast<double>(i + 2));
    return 0.5 * std::numbers::ln2 * m / w;
}

}  // namespace detail

/// Large-m closed-form concentration index
/// alpha = (ln2/2) m / (ln sqrt(pi^2/6 - 1) + sum lambda_d ln(d+1)).
inline double alpha_of_m_large(double m) {
    if (m < 2.0) throw std::domain_error("alpha_of_m_large: large-m branch needs m >= 2");
    return detail::alpha_from_lambda(m, lambda_bar(K_of_m(m)).lambda);
}

/// Solution of the two-equation digit-frequency system
///   f(y,z) = sum_{i=0}^{K-1} (m-i-1) y^{a_i} z^i = 0
///   g(y,z) = y^t z^{1-m} sum_{i=0}^{K-1} y^{a_i} z^i - 1 = 0
/// with a_i = (i-1)ln2 - i ln3 + ln(i+2) and
/// t = ln(sqrt(pi^2/6-1)) - (m-2)ln2 + (m-1)ln3,
/// confined to (e^-2, 1) x (0, 1).
struct SystemSolution {
    double m = 0.0;
    unsigned K = 0;
    double y = 0.0;
    double z = 0.0;
    double f_residual = 0.0;
    double g_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct SolveOptions {
    double tol = 1e-12;
    int max_iterations = 400;
};

namespace detail {

inline double coeff_a(std::size_t i) {
    return (static_cast<double>(i) - 1.0) * std::numbers::ln2 -
           static_cast<double>(i) * std::log(3.0) + std::log(static_cast<double>(i) + 2.0);
}

inline double coeff_t(double m) {
    return std::log(lemma1_constant()) - (m - 2.0) * std::numbers::ln2 +
           (m - 1.0) * std::log(3.0);
}

struct SystemEval {
    long double f = 0, g = 0;
    long double df_dy = 0, df_dz = 0, dg_dy = 0, dg_dz = 0;
};

/// f, g and the analytic Jacobian in long double (terms cancel heavily for
/// large K; extended precision keeps 1e-12 residuals meaningful).
inline SystemEval eval_system(double m, unsigned K, double y, double z) {
    SystemEval e;
    const long double ly = std::log(static_cast<long double>(y));
    const long double lz = std::log(static_cast<long double>(z));
    long double S0 = 0, S0a = 0, S0i = 0;   // sum term, sum a_i term, sum i term
    long double F = 0, Fa = 0, Fi = 0;      // same with coefficient (m-i-1)
    for (unsigned i = 0; i < K; ++i) {
        const long double ai = coeff_a(i);
        const long double term = std::exp(ai * ly + static_cast<long double>(i) * lz);
        const long double c = static_cast<long double>(m) - i - 1.0L;
        S0 += term;
        S0a += ai * term;
        S0i += i * term;
        F += c * term;
        Fa += c * ai * term;
        Fi += c * i * term;
    }
    const long double t = coeff_t(m);
    const long double pref = std::exp(t * ly + (1.0L - static_cast<long double>(m)) * lz);
    e.f = F;
    e.g = pref * S0 - 1.0L;
    e.df_dy = Fa / y;
    e.df_dz = Fi / z;
    e.dg_dy = pref * (t * S0 + S0a) / y;
    e.dg_dz = pref * ((1.0L - static_cast<long double>(m)) * S0 + S0i) / z;
    return e;
}

inline long double residual_norm(const SystemEval& e) {
    return std::max(std::fabs(static_cast<double>(e.f)), std::fabs(static_cast<double>(e.g)));
}

constexpr double kBoxYLo = 0.13533528323661271;  // e^-2, open bound
constexpr double kBoxEps = 1e-13;

inline void clamp_to_box(double& y, double& z) {
    y = std::clamp(y, kBoxYLo + kBoxEps, 1.0 - kBoxEps);
    z = std::clamp(z, kBoxEps, 1.0 - kBoxEps);
}

/// Damped Newton from a given start; no continuation.
inline SystemSolution newton_solve(double m, unsigned K, double y, double z,
                                   const SolveOptions& opt) {
    SystemSolution sol;
    sol.m = m;
    sol.K = K;
    clamp_to_box(y, z);
    SystemEval e = eval_system(m, K, y, z);
    long double res = residual_norm(e);
    int it = 0;
    while (res > opt.tol && it < opt.max_iterations) {
        const long double det = e.df_dy * e.dg_dz - e.df_dz * e.dg_dy;
        if (det == 0.0L) break;
        const long double dy = -(e.f * e.dg_dz - e.g * e.df_dz) / det;
        const long double dz = -(e.g * e.df_dy - e.f * e.dg_dy) / det;
        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            double yn = y + step * static_cast<double>(dy);
            double zn = z + step * static_cast<double>(dz);
            clamp_to_box(yn, zn);
            const SystemEval en = eval_system(m, K, yn, zn);
            if (residual_norm(en) < res) {
                y = yn;
                z = zn;
                e = en;
                res = residual_norm(en);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++it;
        if (!accepted) break;
    }
    sol.y = y;
    sol.z = z;
    sol.f_residual = static_cast<double>(e.f);
    sol.g_residual = static_cast<double>(e.g);
    sol.iterations = it;
    sol.converged = res <= opt.tol;
    return sol;
}

}  // namespace detail

/// Damped Newton with analytic Jacobian. Cold starts anchor at the known
/// deep-branch point (m = 7: y, z near 0.1358, 0.4443) and walk m toward
/// the target, halving the continuation step on failure.
inline SystemSolution solve_system(double m, unsigned K, SolveOptions opt = {}) {
    if (!(m > 1.0)) throw std::domain_error("solve_system: m must exceed 1");
    if (K < 2) throw std::domain_error("solve_system: K must be >= 2");

    // direct attempt from the anchor guess
    SystemSolution sol = detail::newton_solve(m, K, 0.1358, 0.4443, opt);
    if (sol.converged) return sol;

    // continuation in m from the anchor value toward the target
    double mc = 7.0;
    double y = 0.1358, z = 0.4443;
    SystemSolution cur = detail::newton_solve(mc, K, y, z, opt);
    if (!cur.converged)
        throw std::runtime_error("solve_system: anchor solve failed (m=7, K=" +
                                 std::to_string(K) + ")");
    double step = (m > mc ? 1.0 : -1.0) * 0.5;
    int guard = 0;
    while (mc != m) {
        if (++guard > 400)
            throw std::runtime_error("solve_system: continuation stalled toward m=" +
                                     std::to_string(m));
        double mn = mc + step;
        if ((step > 0 && mn > m) || (step < 0 && mn < m)) mn = m;
        const SystemSolution trial = detail::newton_solve(mn, K, cur.y, cur.z, opt);
        if (trial.converged) {
            cur = trial;
            mc = mn;
            if (std::fabs(step) < 0.5) step *= 2.0;
        } else {
            step *= 0.5;
            if (std::fabs(step) < 1e-6)
                throw std::runtime_error("solve_system: no convergence near m=" +
                                         std::to_string(mn) + ", K=" + std::to_string(K));
        }
    }
    return cur;
}

/// Theorem output at one (m, K): Hausdorff dimension f_H = -ln(y)/2, the
/// attaining digit distribution lambda_d = y^(a_(d-1)+t) z^(d-m), and the
/// concentration index alpha built from it.
struct TheoreticalPoint {
    double m = 0.0;
    unsigned K = 0;
    double y = 0.0, z = 0.0;
    double alpha = 0.0;
    double f_H = 0.0;
    std::vector<double> lambda;  // lambda[d-1], d = 1..K
    SystemSolution solution;
};

inline TheoreticalPoint theoretical_point(double m, unsigned K, SolveOptions opt = {}) {
    TheoreticalPoint p;
    p.solution = solve_system(m, K, opt);
    if (!p.solution.converged)
        throw std::runtime_error("theoretical_point: solver did not converge");
    p.m = m;
    p.K = K;
    p.y = p.solution.y;
    p.z = p.solution.z;
    p.f_H = -0.5 * std::log(p.y);
    const double ly = std::log(p.y), lz = std::log(p.z);
    const double t = detail::coeff_t(m);
    p.lambda.resize(K);
    for (unsigned i = 0; i < K; ++i)
        p.lambda[i] = std::exp((detail::coeff_a(i) + t) * ly +
                               (static_cast<double>(i) + 1.0 - m) * lz);
    p.alpha = detail::alpha_from_lambda(m, p.lambda);
    return p;
}

/// Default digit cap when none is prescribed: comfortably above K_of_m.
inline unsigned default_theory_K(double m) { return std::max(3 * K_of_m(m), 20u); }

/// Theoretical spectrum over an (m, K) grid; alpha increases with m toward
/// the left endpoint ln2/ln(phi^2) = 0.7202 as m -> 1.
inline SpectrumCurve theoretical_spectrum(const std::vector<std::pair<double, unsigned>>& grid,
                                          SolveOptions opt = {}) {
    SpectrumCurve c;
    c.kind = SpectrumKind::theoretical;
    std::vector<TheoreticalPoint> pts;
    pts.reserve(grid.size());
    for (const auto& [m, K] : grid) pts.push_back(theoretical_point(m, K, opt));
    std::sort(pts.begin(), pts.end(),
              [](const TheoreticalPoint& a, const TheoreticalPoint& b) { return a.alpha < b.alpha; });
    for (const auto& p : pts) c.samples.push_back({p.alpha, p.f_H, p.m});
    return c;
}

inline SpectrumCurve theoretical_spectrum(const std::vector<double>& m_grid,
                                          SolveOptions opt = {}) {
    std::vector<std::pair<double, unsigned>> g;
    g.reserve(m_grid.size());
    for (double m : m_grid) g.emplace_back(m, default_theory_K(m));
    return theoretical_spectrum(g, opt);
}

/// One point of phi(alpha) = f_H(1/alpha) with discrete derivatives.
/// Samples live at midpoints of the inverted theoretical grid; phi and
/// f_bar = alpha*phi are averaged over the bracketing grid points and
/// phi_prime is the bracketing divided difference. phi_second is a further
/// divided difference of phi_prime (one-sided at the last sample, flagged).
struct PhiSample {
    double alpha = 0.0;        // midpoint abscissa
    double phi = 0.0;          // averaged phi
    double f_bar = 0.0;        // averaged alpha*phi
    double phi_prime = 0.0;
    double phi_second = 0.0;
    bool second_low_confidence = false;
    double alpha_left = 0.0;   // bracketing grid points
    double alpha_right = 0.0;
};

/// Build phi samples from an inverted-coordinate grid (alpha_n, phi_n),
/// alpha strictly increasing. n grid points yield n-1 midpoint samples.
inline std::vector<PhiSample> phi_samples_from_grid(const std::vector<double>& alpha,
                                                    const std::vector<double>& phi) {
    if (alpha.size() != phi.size() || alpha.size() < 3)
        throw std::domain_error("phi_samples_from_grid: need >= 3 matched grid points");
    const std::size_t n = alpha.size() - 1;
    std::vector<PhiSample> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(alpha[i] < alpha[i + 1]))
            throw std::domain_error("phi_samples_from_grid: alpha grid not increasing");
        s[i].alpha_left = alpha[i];
        s[i].alpha_right = alpha[i + 1];
        s[i].alpha = 0.5 * (alpha[i] + alpha[i + 1]);
        s[i].phi = 0.5 * (phi[i] + phi[i + 1]);
        s[i].f_bar = 0.5 * (alpha[i] * phi[i] + alpha[i + 1] * phi[i + 1]);
        s[i].phi_prime = (phi[i + 1] - phi[i]) / (alpha[i + 1] - alpha[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        s[i].phi_second = (s[i + 1].phi_prime - s[i].phi_prime) / (s[i + 1].alpha - s[i].alpha);
    s[n - 1].phi_second = s[n - 2].phi_second;  // one-sided at the end
    s[n - 1].second_low_confidence = true;
    return s;
}

/// phi(alpha) curve of a theoretical spectrum: coordinates inverted
/// (alpha -> 1/alpha, f unchanged), then the midpoint scheme above.
inline std::vector<PhiSample> phi_curve(const SpectrumCurve& theoretical) {
    if (theoretical.samples.size() < 3)
        throw std::domain_error("phi_curve: need >= 3 theoretical points");
    std::vector<double> alpha, phi;
    for (auto it = theoretical.samples.rbegin(); it != theoretical.samples.rend(); ++it) {
        alpha.push_back(1.0 / it->alpha);
        phi.push_back(it->f);
    }
    return phi_samples_from_grid(alpha, phi);
}

}  // namespace farey
