#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "farey/fraction.hpp"
#include "farey/tree.hpp"

namespace farey {

/// Exact hyperbolic measure of a subinterval: the multiset of levels of the
/// maximal Farey intervals tiling it, i.e. the value sum(2^-level).
/// Levels can be large (the tile [0, 1/2^j] alone sits at level 2^j - 1),
/// so the reduced numerator/denominator form is only materialized when it
/// fits 128 bits.
struct DyadicMeasure {
    std::vector<std::uint32_t> tile_levels;  // ascending

    double value() const {
        // deepest-first so tiny tiles are not absorbed prematurely
        long double s = 0.0L;
        for (auto it = tile_levels.rbegin(); it != tile_levels.rend(); ++it)
            s += std::exp2(-static_cast<long double>(*it));
        return static_cast<double>(s);
    }

    struct Reduced {
        unsigned __int128 numerator = 0;
        std::uint32_t log2_denominator = 0;  // measure = numerator / 2^log2_denominator
        bool exact = false;                  // false when the span exceeds 128 bits
    };

    /// Reduced dyadic fraction numerator/2^e with odd numerator (or 1/1, 0/1).
    Reduced reduced() const {
        Reduced r;
        if (tile_levels.empty()) {
            r.exact = true;
            return r;
        }
        const std::uint32_t deepest = tile_levels.back();
        unsigned __int128 num = 0;
        for (std::uint32_t lvl : tile_levels) {
            const std::uint32_t shift = deepest - lvl;
            if (shift >= 127) return r;  // span too wide for an exact u128 sum
            const unsigned __int128 term = static_cast<unsigned __int128>(1) << shift;
            if (num > ~static_cast<unsigned __int128>(0) - term) return r;
            num += term;
        }
        std::uint32_t e = deepest;
        while (e > 0 && (num & 1) == 0) {
            num >>= 1;
            --e;
        }
        r.numerator = num;
        r.log2_denominator = e;
        r.exact = true;
        return r;
    }
};

struct DyadicMeasureResult {
    Fraction lo, hi;  // the dyadic interval [m/2^j, (m+1)/2^j]
    Domain domain = Domain::full;
    DyadicMeasure measure;
    int resolution_level = 0;  // max endpoint appearance level (0 for domain boundaries)
};

namespace detail {

inline int endpoint_resolution(const Fraction& r, Domain domain) {
    if (domain == Domain::full) {
        if (r.num == 0 || r.num == r.den) return 0;
    } else {
        if (r == Fraction(1, 2) || r.num == r.den) return 0;
    }
    return appearance_level(r, domain);
}

struct DyadicContext {
    Fraction lo, hi;
    int depth_cap;
    std::vector<std::uint32_t>* tiles;
};

// a < b Farey neighbors; target [lo, hi]. Maximal tiles inside the target
// are recorded; straddling intervals recurse. At most two intervals per
// level straddle, so the walk is O(depth_cap).
inline void collect_tiles(std::uint64_t an, std::uint64_t ad, std::uint64_t bn, std::uint64_t bd,
                          int level, const DyadicContext& ctx) {
    using u128 = unsigned __int128;
    // disjoint: a >= hi or b <= lo
    if (u128(an) * ctx.hi.den >= u128(ctx.hi.num) * ad) return;
    if (u128(bn) * ctx.lo.den <= u128(ctx.lo.num) * bd) return;
    // contained: lo <= a and b <= hi
    const bool lo_le_a = u128(ctx.lo.num) * ad <= u128(an) * ctx.lo.den;
    const bool b_le_hi = u128(bn) * ctx.hi.den <= u128(ctx.hi.num) * bd;
    if (lo_le_a && b_le_hi) {
        ctx.tiles->push_back(static_cast<std::uint32_t>(level));
        return;
    }
    if (level >= ctx.depth_cap)
        throw std::overflow_error("dyadic_measure: recursion depth cap exceeded");
    const std::uint64_t mn = an + bn, md = ad + bd;
    collect_tiles(an, ad, mn, md, level + 1, ctx);
    collect_tiles(mn, md, bn, bd, level + 1, ctx);
}

}  // namespace detail

/// Exact hyperbolic measure of [m/2^j, (m+1)/2^j] by recursive splitting.
/// j = 0 degenerates to the whole domain. For the half domain the dyadic
/// interval must lie inside [1/2,1], i.e. m >= 2^(j-1).
inline DyadicMeasureResult dyadic_measure(std::uint64_t m, unsigned j, Domain domain = Domain::full,
                                          int depth_cap = 4096) {
    if (j >= 63) throw std::domain_error("dyadic_measure: j too large");
    const std::uint64_t scale = std::uint64_t(1) << j;
    if (m >= scale) throw std::domain_error("dyadic_measure: need 0 <= m < 2^j");

    DyadicMeasureResult out;
    out.domain = domain;
    if (j == 0 && domain == Domain::half) {
        out.lo = Fraction(1, 2);  // degenerate input: the whole half domain
        out.hi = Fraction(1, 1);
    } else {
        out.lo = Fraction::reduced(m, scale);
        out.hi = Fraction::reduced(m + 1, scale);
    }
    if (domain == Domain::half && !(Fraction(1, 2) <= out.lo))
        throw std::domain_error("dyadic_measure: interval outside [1/2,1]");

    const FareyInterval root = detail::root_interval(domain);
    detail::DyadicContext ctx{out.lo, out.hi, depth_cap, &out.measure.tile_levels};
    detail::collect_tiles(root.left.num, root.left.den, root.right.num, root.right.den, root.level,
                          ctx);
    std::sort(out.measure.tile_levels.begin(), out.measure.tile_levels.end());
    out.resolution_level = std::max(detail::endpoint_resolution(out.lo, domain),
                                    detail::endpoint_resolution(out.hi, domain));
    return out;
}

/// Exact partition-of-unity check over the whole level-j dyadic grid of the
/// domain: pools every tile level and carries pairs 2*2^-l = 2^-(l-1)
/// downward in exact integers. True iff the pooled measures sum to exactly
/// the domain measure (1 for full, 1/2 for half).
inline bool dyadic_partition_is_exact(unsigned j, Domain domain = Domain::full,
                                      int depth_cap = 4096) {
    const std::uint64_t scale = std::uint64_t(1) << j;
    const std::uint64_t m0 = domain == Domain::half ? scale / 2 : 0;
    std::vector<std::uint64_t> count;
    for (std::uint64_t m = m0; m < scale; ++m) {
        const auto r = dyadic_measure(m, j, domain, depth_cap);
        for (std::uint32_t lvl : r.measure.tile_levels) {
            if (count.size() <= lvl) count.resize(lvl + 1, 0);
            ++count[lvl];
        }
    }
    const std::size_t target = domain == Domain::half ? 1 : 0;
    for (std::size_t l = count.size(); l-- > target + 1;) {
        if (count[l] % 2 != 0) return false;
        count[l - 1] += count[l] / 2;
        count[l] = 0;
    }
    for (std::size_t l = 0; l < count.size(); ++l)
        if (count[l] != (l == target ? 1u : 0u)) return false;
    return !count.empty();
}

}  // namespace farey
