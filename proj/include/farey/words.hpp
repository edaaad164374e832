#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "farey/contfrac.hpp"
#include "farey/fraction.hpp"
#include "farey/tree.hpp"

namespace farey {

/// Level-|w| interval addressed by a word over {L,R}: each letter descends
/// to the left or right mediant child, starting from [0,1]. Words starting
/// with R address the half-domain subtree under [1/2,1].
inline FareyInterval interval_of_word(std::string_view word, TraversalLimits limits = {}) {
    if (word.empty()) throw std::domain_error("interval_of_word: empty word");
    if (static_cast<int>(word.size()) > limits.depth_cap)
        throw std::domain_error("interval_of_word: word longer than depth cap");
    FareyInterval iv = detail::root_interval(Domain::full);
    for (char c : word) {
        const std::uint64_t mn = iv.left.num + iv.right.num;
        const std::uint64_t md = iv.left.den + iv.right.den;
        Fraction m;
        m.num = mn;
        m.den = md;
        if (c == 'L' || c == 'l')
            iv.right = m;
        else if (c == 'R' || c == 'r')
            iv.left = m;
        else
            throw std::domain_error("interval_of_word: letters must be L or R");
        ++iv.level;
    }
    return iv;
}

/// The endpoint created at the final descent step of the word: the mediant
/// inserted when the addressed interval split off its parent. RLRL -> 5/8,
/// RLR -> 3/5 in the tree under [1/2,1].
inline Fraction endpoint_of_word(std::string_view word, TraversalLimits limits = {}) {
    const FareyInterval iv = interval_of_word(word, limits);
    const char last = word.back();
    return (last == 'L' || last == 'l') ? iv.right : iv.left;
}

/// Canonical word of a fraction: the expansion [n_1, ..., n_N] (last digit
/// >= 2) maps to alternating letter blocks L^(n_1 - 1) R^(n_2) L^(n_3) ...
/// with the final block shortened by one and one opposite letter appended.
/// Equivalently, the block word of the expansion variant ending in 1.
/// Word length equals the full-domain appearance level, and the word's
/// interval has r as its newly created endpoint.
inline std::string word_of(const CFExpansion& cf) {
    if (cf.digits.empty()) throw std::domain_error("word_of: empty expansion");
    std::vector<std::uint64_t> d = cf.digits;
    // switch to the expansion variant ending in digit 1
    if (d.back() >= 2) {
        d.back() -= 1;
        d.push_back(1);
    } else if (d.size() == 1) {
        throw std::domain_error("word_of: expansion is not canonical");
    }
    std::string w;
    char letter = 'L';
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::uint64_t run = (i == 0) ? d[0] - 1 : d[i];
        w.append(static_cast<std::size_t>(run), letter);
        letter = (letter == 'L') ? 'R' : 'L';
    }
    return w;
}

inline std::string word_of(const Fraction& r) { return word_of(expand(r)); }

}  // namespace farey
