#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "farey/contfrac.hpp"
#include "farey/fraction.hpp"

namespace farey {

/// Which part of the unit segment the level partitions cover.
/// full: [0,1], 2^k intervals at level k.
/// half: [1/2,1], 2^(k-1) intervals at level k (k >= 1).
enum class Domain { full, half };

inline const char* to_string(Domain d) { return d == Domain::full ? "full" : "half"; }

/// One interval of the level-k partition. Endpoints are Farey neighbors,
/// so the length is exactly 1/(left.den*right.den); the hyperbolic
/// measure of every level-k interval is 2^-k.
struct FareyInterval {
    Fraction left, right;
    int level = 0;

    std::uint64_t den_product() const { return left.den * right.den; }
    double length() const { return 1.0 / static_cast<double>(den_product()); }
    double log_length() const { return -std::log(static_cast<double>(den_product())); }
    double measure() const { return std::exp2(-static_cast<double>(level)); }
};

struct TraversalLimits {
    int depth_cap = 40;  // F_42 < 2^28, so 64-bit denominator products are safe
};

/// Thrown by interval_of when x lands exactly on a tree endpoint.
struct EndpointHit : std::runtime_error {
    Fraction endpoint;
    int level;
    EndpointHit(Fraction e, int lvl)
        : std::runtime_error("x is a level-" + std::to_string(lvl) + " endpoint " + e.str()),
          endpoint(e),
          level(lvl) {}
};

namespace detail {

inline void check_level(int k, Domain domain, const TraversalLimits& limits) {
    if (k < 0) throw std::domain_error("level must be non-negative");
    if (domain == Domain::half && k < 1) throw std::domain_error("half domain starts at level 1");
    if (k > limits.depth_cap)
        throw std::domain_error("level " + std::to_string(k) + " exceeds depth cap " +
                                std::to_string(limits.depth_cap));
}

/// Root interval of a domain together with its level.
inline FareyInterval root_interval(Domain domain) {
    FareyInterval r;
    if (domain == Domain::full) {
        r.left = Fraction(0, 1);
        r.right = Fraction(1, 1);
        r.level = 0;
    } else {
        r.left = Fraction(1, 2);
        r.right = Fraction(1, 1);
        r.level = 1;
    }
    return r;
}

/// Depth-first sweep of all level-k descendants of `root`, left to right.
/// Uses an explicit stack of pending right branches: memory O(k).
template <class Visitor>
void visit_subtree(const FareyInterval& root, int k, Visitor&& visit) {
    struct Node {
        std::uint64_t ln, ld, rn, rd;
        int level;
    };
    if (root.level == k) {
        visit(root);
        return;
    }
    std::vector<Node> pending;
    pending.reserve(static_cast<std::size_t>(k - root.level) + 1);
    Node cur{root.left.num, root.left.den, root.right.num, root.right.den, root.level};
    for (;;) {
        while (cur.level < k) {
            const std::uint64_t mn = cur.ln + cur.rn, md = cur.ld + cur.rd;
            pending.push_back({mn, md, cur.rn, cur.rd, cur.level + 1});
            cur.rn = mn;
            cur.rd = md;
            ++cur.level;
        }
        FareyInterval leaf;
        leaf.left.num = cur.ln;
        leaf.left.den = cur.ld;
        leaf.right.num = cur.rn;
        leaf.right.den = cur.rd;
        leaf.level = cur.level;
        visit(leaf);
        if (pending.empty()) break;
        cur = pending.back();
        pending.pop_back();
    }
}

/// Subtree roots at depth min(k, root.level + split_depth), in left-to-right
/// order. These are the fixed work units of the deterministic reduction.
inline std::vector<FareyInterval> subtree_roots(Domain domain, int k, int split_depth) {
    std::vector<FareyInterval> roots;
    const FareyInterval root = root_interval(domain);
    const int depth = std::min(k, root.level + split_depth);
    visit_subtree(root, depth, [&](const FareyInterval& iv) { roots.push_back(iv); });
    return roots;
}

}  // namespace detail

/// Visit every level-k interval of the domain once, left to right.
template <class Visitor>
void for_each_interval(int k, Domain domain, Visitor&& visit, TraversalLimits limits = {}) {
    detail::check_level(k, domain, limits);
    detail::visit_subtree(detail::root_interval(domain), k, visit);
}

/// Deterministic fold over the level-k intervals.
///
/// State must provide accumulate(const FareyInterval&) and merge(State&&).
/// The level is split into fixed subtree work units (depth `split_depth`
/// below the root); workers process units concurrently but partial states
/// are merged strictly left to right, so the result is bit-identical for
/// every worker count.
template <class State>
State reduce_level(int k, Domain domain, State init, int workers = 1, int split_depth = 6,
                   TraversalLimits limits = {}) {
    detail::check_level(k, domain, limits);
    const auto roots = detail::subtree_roots(domain, k, split_depth);
    std::vector<State> parts(roots.size(), init);
    if (workers <= 1 || roots.size() <= 1) {
        for (std::size_t i = 0; i < roots.size(); ++i)
            detail::visit_subtree(roots[i], k,
                                  [&](const FareyInterval& iv) { parts[i].accumulate(iv); });
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= roots.size()) return;
                detail::visit_subtree(roots[i], k,
                                      [&](const FareyInterval& iv) { parts[i].accumulate(iv); });
            }
        };
        const std::size_t n =
            std::min<std::size_t>(static_cast<std::size_t>(workers), roots.size());
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    State out = std::move(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) out.merge(std::move(parts[i]));
    return out;
}

/// Aggregate statistics of one partition level.
struct LevelStats {
    int level = 0;
    Domain domain = Domain::full;
    std::uint64_t interval_count = 0;
    double pi_bar = 0.0;     // (1/count) sum over intervals of ln(Q_left)/k
    double length_sum = 0.0;
    double min_length = 0.0;
    double max_length = 0.0;
    std::uint64_t max_denominator = 0;
    std::uint64_t min_den_product = 0;  // 1/max_length exactly
    std::uint64_t max_den_product = 0;  // 1/min_length exactly
};

namespace detail {

struct StatsState {
    std::uint64_t count = 0;
    long double log_q_sum = 0.0L;
    long double length_sum = 0.0L;
    std::uint64_t min_prod = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t max_prod = 0;
    std::uint64_t max_den = 0;

    void accumulate(const FareyInterval& iv) {
        ++count;
        log_q_sum += std::log(static_cast<long double>(iv.left.den));
        const std::uint64_t prod = iv.den_product();
        length_sum += 1.0L / static_cast<long double>(prod);
        min_prod = std::min(min_prod, prod);
        max_prod = std::max(max_prod, prod);
        max_den = std::max({max_den, iv.left.den, iv.right.den});
    }
    void merge(StatsState&& o) {
        count += o.count;
        log_q_sum += o.log_q_sum;
        length_sum += o.length_sum;
        min_prod = std::min(min_prod, o.min_prod);
        max_prod = std::max(max_prod, o.max_prod);
        max_den = std::max(max_den, o.max_den);
    }
};

}  // namespace detail

inline LevelStats level_stats(int k, Domain domain = Domain::full, int workers = 1,
                              TraversalLimits limits = {}) {
    if (k < 1) throw std::domain_error("level_stats: k must be >= 1");
    const auto s = reduce_level(k, domain, detail::StatsState{}, workers, 6, limits);
    LevelStats out;
    out.level = k;
    out.domain = domain;
    out.interval_count = s.count;
    out.pi_bar = static_cast<double>(s.log_q_sum / (static_cast<long double>(k) *
                                                    static_cast<long double>(s.count)));
    out.length_sum = static_cast<double>(s.length_sum);
    out.min_length = 1.0 / static_cast<double>(s.max_prod);
    out.max_length = 1.0 / static_cast<double>(s.min_prod);
    out.max_denominator = s.max_den;
    out.min_den_product = s.min_prod;
    out.max_den_product = s.max_prod;
    return out;
}

namespace detail {

/// Exact sign of x - n/d for dyadic-rational double x, via an fma-split
/// product. Returns -1, 0, +1.
inline int compare_to_fraction(double x, std::uint64_t n, std::uint64_t d) {
    const double dd = static_cast<double>(d);  // exact for d < 2^53
    const double p = x * dd;
    const double err = std::fma(x, dd, -p);  // x*d = p + err exactly
    const double diff = p - static_cast<double>(n);
    if (diff + err > 0.0) return 1;
    if (diff + err < 0.0) return -1;
    return 0;
}

}  // namespace detail

/// The unique level-k interval containing x, by descending the mediant tree.
/// Throws EndpointHit if x equals a tree endpoint at depth <= k.
inline FareyInterval interval_of(double x, int k, Domain domain = Domain::full,
                                 TraversalLimits limits = {}) {
    detail::check_level(k, domain, limits);
    FareyInterval iv = detail::root_interval(domain);
    if (detail::compare_to_fraction(x, iv.left.num, iv.left.den) <= 0 ||
        detail::compare_to_fraction(x, iv.right.num, iv.right.den) >= 0)
        throw std::domain_error("interval_of: x must lie strictly inside the domain");
    while (iv.level < k) {
        const std::uint64_t mn = iv.left.num + iv.right.num;
        const std::uint64_t md = iv.left.den + iv.right.den;
        const int c = detail::compare_to_fraction(x, mn, md);
        Fraction m;
        m.num = mn;
        m.den = md;
        if (c == 0) throw EndpointHit(m, iv.level + 1);
        if (c < 0)
            iv.right = m;
        else
            iv.left = m;
        ++iv.level;
    }
    return iv;
}

/// First level at which r is a partition endpoint. Computed from the
/// canonical continued-fraction digit sum S(r): S - 1 on the full domain
/// and S - 2 on [1/2,1], matching 1/2 -> 1, 2/5 -> 3 and the half-domain
/// convention under which 1265/2048 first appears at level 37.
inline int appearance_level(const Fraction& r, Domain domain = Domain::full) {
    if (domain == Domain::full) {
        if (r.num == 0 || r.num == r.den)
            throw std::domain_error("appearance_level: r on domain boundary");
    } else {
        if (!(Fraction(1, 2) < r) || r == Fraction(1, 1))
            throw std::domain_error("appearance_level: r must lie strictly inside [1/2,1]");
    }
    const auto s = expand(r).digit_sum();
    return static_cast<int>(s) - (domain == Domain::full ? 1 : 2);
}

}  // namespace farey
