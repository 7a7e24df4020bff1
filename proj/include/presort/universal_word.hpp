#ifndef PRESORT_UNIVERSAL_WORD_HPP
#define PRESORT_UNIVERSAL_WORD_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "presort/intervals.hpp" // contract_error

namespace presort {

// A word over the alphabet {1..m}. Words produced by universal_word()
// contain every permutation of the alphabet as a subsequence.
struct Word {
    std::vector<int> symbols; // values in [1, m]
    int m = 0;

    std::size_t length() const { return symbols.size(); }
};

// The m-block construction: (1 2 ... m) repeated m times, length exactly
// m^2. Every permutation picks its k-th symbol from the k-th block.
// Constructions shorter by a constant factor exist (still quadratic); the
// alphabets here are small overlap groups, so the block form is used.
inline Word universal_word(int m) {
    if (m < 0) throw contract_error("alphabet size must be >= 0");
    Word w;
    w.m = m;
    w.symbols.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int block = 0; block < m; ++block)
        for (int s = 1; s <= m; ++s) w.symbols.push_back(s);
    return w;
}

namespace detail {

inline bool subsequence_of(const std::vector<int>& needle,
                           const std::vector<int>& haystack) {
    std::size_t i = 0;
    for (int s : haystack) {
        if (i < needle.size() && needle[i] == s) ++i;
    }
    return i == needle.size();
}

} // namespace detail

// Exhaustive universality test, small m only (the general problem is hard,
// so this guards itself at 8! permutations).
inline bool is_universal(const Word& w, int m) {
    if (m > 8) throw contract_error("exhaustive check refused");
    if (m < 0) throw contract_error("alphabet size must be >= 0");
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 1);
    do {
        if (!detail::subsequence_of(perm, w.symbols)) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

namespace detail {

// Words with an adjacent repeated symbol can be shortened by deleting the
// repeat without losing universality, and universality is invariant under
// relabeling, so it suffices to enumerate repeat-free words whose symbols
// first appear in increasing order.
inline bool any_universal_of_length(int m, int len, std::vector<int>& word,
                                    int max_used) {
    if (static_cast<int>(word.size()) == len) {
        if (max_used < m) return false;
        Word w;
        w.m = m;
        w.symbols = word;
        return is_universal(w, m);
    }
    int remaining = len - static_cast<int>(word.size());
    if (max_used + remaining < m) return false; // cannot introduce all symbols
    int limit = std::min(m, max_used + 1);
    for (int s = 1; s <= limit; ++s) {
        if (!word.empty() && word.back() == s) continue;
        word.push_back(s);
        if (any_universal_of_length(m, len, word, std::max(max_used, s)))
            return true;
        word.pop_back();
    }
    return false;
}

} // namespace detail

// Minimal length of a universal word on m symbols, by exhaustive search
// over increasing lengths.
inline int shortest_universal_length(int m) {
    if (m > 4) throw contract_error("search refused");
    if (m < 0) throw contract_error("alphabet size must be >= 0");
    if (m == 0) return 0;
    for (int len = m;; ++len) {
        std::vector<int> word;
        word.reserve(static_cast<std::size_t>(len));
        if (detail::any_universal_of_length(m, len, word, 0)) return len;
    }
}

} // namespace presort

#endif
