#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "farey/tree.hpp"

namespace farey {

/// Strictly increasing exponent grid for partition-function sweeps.
struct QGrid {
    std::vector<double> qs;

    QGrid() = default;
    explicit QGrid(std::vector<double> values) : qs(std::move(values)) { normalize(); }

    static QGrid uniform(double lo, double hi, std::size_t count) {
        if (count < 2 || !(lo < hi)) throw std::domain_error("QGrid: need lo < hi, count >= 2");
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i)
            v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        return QGrid(std::move(v));
    }

    /// 201 points on [-25, 40] plus a refinement of [0, 2] where the
    /// Legendre curvature concentrates; 0, 1 and 2 are grid points.
    static QGrid default_grid() {
        QGrid g = uniform(-25.0, 40.0, 201);
        const QGrid fine = uniform(0.0, 2.0, 41);
        g.qs.insert(g.qs.end(), fine.qs.begin(), fine.qs.end());
        g.normalize();
        return g;
    }

    std::size_t size() const { return qs.size(); }

  private:
    void normalize() {
        if (qs.empty()) throw std::domain_error("QGrid: empty");
        std::sort(qs.begin(), qs.end());
        qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    }
};

/// One evaluated point of the level-k partition function:
/// log_sum = ln sum_i p_i^q, tau = log_sum / ln(1/2^k), tau_prime = dtau/dq.
struct TauSample {
    double q = 0.0;
    double tau = 0.0;
    double tau_prime = 0.0;
    double log_sum = 0.0;
    int k = 0;
};

namespace detail {

/// ln(max p) and ln(min p) of a level, for the per-q max shift.
/// The widest level-k interval in either domain has denominator product
/// k+1; the narrowest is the golden pair F_(k+1) F_(k+2).
inline void level_log_length_range(int k, double& log_pmax, double& log_pmin) {
    log_pmax = -std::log(static_cast<double>(k) + 1.0);
    double fa = 1.0, fb = 1.0;  // F_1, F_2
    for (int i = 0; i < k; ++i) {
        const double t = fa + fb;
        fa = fb;
        fb = t;
    }
    log_pmin = -(std::log(fa) + std::log(fb));
}

/// Streaming accumulator for S(q) = sum p_i^q and sum p_i^q ln p_i over one
/// level, all q simultaneously. Every term enters as exp(q ln p - M(q)) with
/// M(q) = q ln(p_max) for q >= 0 and q ln(p_min) for q < 0, so exponents are
/// never positive and q as negative as -50 stays in range.
struct PartitionState {
    std::vector<double> q;
    std::vector<double> shift;          // M(q)
    std::vector<long double> sum_w;     // sum exp(q ln p - M)
    std::vector<long double> sum_wlp;   // sum exp(q ln p - M) * ln p

    static PartitionState prepare(int k, Domain domain, const QGrid& grid) {
        PartitionState s;
        s.q = grid.qs;
        double lpmax = 0, lpmin = 0;
        level_log_length_range(k, lpmax, lpmin);
        s.shift.resize(s.q.size());
        for (std::size_t i = 0; i < s.q.size(); ++i)
            s.shift[i] = s.q[i] * (s.q[i] >= 0.0 ? lpmax : lpmin);
        s.sum_w.assign(s.q.size(), 0.0L);
        s.sum_wlp.assign(s.q.size(), 0.0L);
        (void)domain;
        return s;
    }

    void accumulate(const FareyInterval& iv) {
        const double lp = -std::log(static_cast<double>(iv.den_product()));
        const std::size_t n = q.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double w = std::exp(q[i] * lp - shift[i]);
            sum_w[i] += w;
            sum_wlp[i] += static_cast<long double>(w) * lp;
        }
    }
    void merge(PartitionState&& o) {
        for (std::size_t i = 0; i < sum_w.size(); ++i) {
            sum_w[i] += o.sum_w[i];
            sum_wlp[i] += o.sum_wlp[i];
        }
    }
};

}  // namespace detail

struct TauOptions {
    int workers = 1;
    TraversalLimits limits{};
};

/// Partition function tau_k(q) = ln(sum_i p_i^q)/ln(1/2^k) and its
/// derivative for every q in the grid, in one traversal of level k.
inline std::vector<TauSample> tau_bar(int k, const QGrid& grid, Domain domain = Domain::full,
                                      TauOptions opt = {}) {
    if (k < 1) throw std::domain_error("tau_bar: k must be >= 1");
    if (grid.qs.empty()) throw std::domain_error("tau_bar: empty q grid");
    auto state = reduce_level(k, domain, detail::PartitionState::prepare(k, domain, grid),
                              opt.workers, 6, opt.limits);
    const double kln2 = static_cast<double>(k) * std::numbers::ln2;
    std::vector<TauSample> out(grid.qs.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        TauSample& t = out[i];
        t.q = state.q[i];
        t.k = k;
        if (t.q == 0.0) {
            // count identity: sum p^0 is the interval count 2^k (full)
            // or 2^(k-1) (half); ln in the same k*ln2 unit keeps tau(0)
            // exactly -1 on the full domain.
            t.log_sum = domain == Domain::full ? kln2 : kln2 - std::numbers::ln2;
        } else {
            t.log_sum =
                state.shift[i] + static_cast<double>(std::log(state.sum_w[i]));
        }
        t.tau = t.log_sum / -kln2;
        t.tau_prime =
            static_cast<double>(state.sum_wlp[i] / state.sum_w[i]) / -kln2;
    }
    return out;
}

/// tau_k'(q) at a single exponent.
inline double tau_bar_prime(int k, double q, Domain domain = Domain::full, TauOptions opt = {}) {
    return tau_bar(k, QGrid({q}), domain, opt).front().tau_prime;
}

namespace detail {

struct BetaState {
    long double sum = 0.0L;
    void accumulate(const FareyInterval& iv) {
        const double prod = static_cast<double>(iv.den_product());
        sum += static_cast<long double>(std::log(prod) / prod);
    }
    void merge(BetaState&& o) { sum += o.sum; }
};

}  // namespace detail

/// beta_k = tau_k'(1) by the closed-form sum
/// sum_i ln(Q_i Q_(i+1)) / (Q_i Q_(i+1)) / (k ln 2), one traversal, no grid.
inline double beta_k(int k, Domain domain = Domain::full, TauOptions opt = {}) {
    if (k < 1) throw std::domain_error("beta_k: k must be >= 1");
    const auto s = reduce_level(k, domain, detail::BetaState{}, opt.workers, 6, opt.limits);
    return static_cast<double>(s.sum) /
           (static_cast<double>(k) * std::numbers::ln2);
}

}  // namespace farey
