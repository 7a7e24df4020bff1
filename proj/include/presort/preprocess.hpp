#ifndef PRESORT_PREPROCESS_HPP
#define PRESORT_PREPROCESS_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "presort/intervals.hpp"
#include "presort/universal_word.hpp"

namespace presort {

// Left-to-right grouping of unit intervals. Group i starts at its leader
// (the first interval not in earlier groups) and holds every interval
// intersecting that leader; the window W_i is the union extent of the
// group; the augmented group adds the next group's members that reach back
// into W_i. Indices refer to the canonical order of the source set.
struct WindowDecomposition {
    struct Window {
        std::vector<std::size_t> group;     // S_i, canonical order
        std::vector<std::size_t> augmented; // S'_i, canonical order
        double lo = 0.0, hi = 0.0;          // W_i
        std::size_t eta = 0;                // index of first interval after S_i
    };
    std::vector<Window> windows;
};

inline void require_unit(const IntervalSet& set) {
    for (const auto& iv : set)
        if (iv.length() != 1.0) throw contract_error("unit length required");
}

inline WindowDecomposition window_decomposition(const IntervalSet& set) {
    if (set.empty()) throw contract_error("empty instance");
    require_unit(set);
    const std::size_t n = set.size();
    const int delta = ply(set);

    WindowDecomposition wd;
    std::size_t start = 0;
    std::size_t total_augmented = 0;
    while (start < n) {
        const Interval& leader = set[start];
        std::size_t end = start;
        while (end < n && set[end].left <= leader.right) ++end;

        WindowDecomposition::Window w;
        for (std::size_t j = start; j < end; ++j) w.group.push_back(j);
        w.eta = end;
        w.lo = set[start].left;
        w.hi = set[end - 1].left + 1.0; // unit lengths: last member has max right
        w.augmented = w.group;
        for (std::size_t j = end; j < n && set[j].left <= w.hi; ++j)
            w.augmented.push_back(j);

        if (w.group.size() > static_cast<std::size_t>(delta))
            throw contract_error("window group exceeds ply");
        if (w.augmented.size() > static_cast<std::size_t>(2 * delta - 1))
            throw contract_error("augmented group exceeds 2*ply-1");
        total_augmented += w.augmented.size();

        wd.windows.push_back(std::move(w));
        start = end;
    }
    if (total_augmented > 2 * n)
        throw contract_error("augmented groups exceed 2n");
    return wd;
}

enum class Provenance { Unit, General, Marked };

inline std::string to_string(Provenance p) {
    switch (p) {
    case Provenance::Unit: return "unit";
    case Provenance::General: return "general";
    case Provenance::Marked: return "marked";
    }
    return "unit";
}

// An ordered list of interval-id occurrences such that, for every
// realization, the sorted order of the points embeds as a subsequence.
// Marked sequences additionally guarantee that unmarked occurrences are in
// their final position without their value ever being read.
struct SuperSequence {
    struct Occurrence {
        std::int64_t id = 0;
        bool marked = true;
    };

    Provenance provenance = Provenance::Unit;
    std::vector<Occurrence> occurrences;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::size_t source_n = 0;
    int source_delta = 0;

    // derived: maximal runs of marked occurrences, and for each position
    // the index of the next marked occurrence strictly after it (-1: none)
    std::vector<std::pair<std::size_t, std::size_t>> clusters;
    std::vector<std::ptrdiff_t> next_marked;

    std::size_t length() const { return occurrences.size(); }

    void derive_marks() {
        clusters.clear();
        next_marked.assign(occurrences.size(), -1);
        std::ptrdiff_t next = -1;
        for (std::size_t k = occurrences.size(); k-- > 0;) {
            next_marked[k] = next;
            if (occurrences[k].marked) next = static_cast<std::ptrdiff_t>(k);
        }
        std::size_t i = 0;
        while (i < occurrences.size()) {
            if (!occurrences[i].marked) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < occurrences.size() && occurrences[j].marked) ++j;
            clusters.emplace_back(i, j);
            i = j;
        }
    }

    std::vector<std::int64_t> distinct_ids() const {
        std::vector<std::int64_t> ids;
        for (const auto& occ : occurrences) ids.push_back(occ.id);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }
};

namespace detail {

inline void emit_word(const std::vector<std::size_t>& members,
                      const IntervalSet& set, bool marked,
                      std::vector<SuperSequence::Occurrence>& out) {
    Word w = universal_word(static_cast<int>(members.size()));
    for (int sym : w.symbols)
        out.push_back({set[members[static_cast<std::size_t>(sym - 1)]].id, marked});
}

} // namespace detail

// Unit-interval preprocessing: one universal word per augmented group,
// concatenated in window order. The result is (3, 2*ply)-smooth and at
// most 4*ply*n long.
inline SuperSequence build_unit_supersequence(const IntervalSet& set) {
    WindowDecomposition wd = window_decomposition(set);
    const int delta = ply(set);

    SuperSequence seq;
    seq.provenance = Provenance::Unit;
    seq.source_n = set.size();
    seq.source_delta = delta;
    seq.alpha = 3.0;
    seq.beta = 2.0 * delta;
    for (const auto& w : wd.windows)
        detail::emit_word(w.augmented, set, true, seq.occurrences);

    if (seq.occurrences.size() > 4 * static_cast<std::size_t>(delta) * set.size())
        throw contract_error("unit supersequence exceeds 4*ply*n");
    seq.derive_marks();
    return seq;
}

// General intervals: split the line at the distinct endpoints into closed
// elementary cells, and emit a universal word over the intervals meeting
// each cell. Each cell meets at most 2*ply intervals (any such interval
// contains one of the cell's two endpoints), giving length <= 8*n*ply^2.
inline SuperSequence build_general_supersequence(const IntervalSet& set) {
    if (set.empty()) throw contract_error("empty instance");
    const int delta = ply(set);
    const std::size_t n = set.size();

    std::vector<double> endpoints;
    endpoints.reserve(2 * n);
    for (const auto& iv : set) {
        endpoints.push_back(iv.left);
        endpoints.push_back(iv.right);
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                    endpoints.end());

    struct Cell {
        double lo, hi;
    };
    std::vector<Cell> cells;
    if (endpoints.size() == 1) {
        cells.push_back({endpoints[0], endpoints[0]});
    } else {
        for (std::size_t j = 0; j + 1 < endpoints.size(); ++j)
            cells.push_back({endpoints[j], endpoints[j + 1]});
    }

    // memberships, per cell in canonical order
    std::vector<std::vector<std::size_t>> members(cells.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Interval& iv = set[i];
        // first cell with hi >= left, last cell with lo <= right
        std::size_t first = 0, last = cells.size() - 1;
        {
            std::size_t lo = 0, hi = cells.size();
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (cells[mid].hi >= iv.left)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            first = lo;
        }
        {
            std::size_t lo = 0, hi = cells.size();
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (cells[mid].lo <= iv.right)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            last = lo - 1;
        }
        for (std::size_t c = first; c <= last && c < cells.size(); ++c)
            members[c].push_back(i);
    }

    SuperSequence seq;
    seq.provenance = Provenance::General;
    seq.source_n = n;
    seq.source_delta = delta;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (members[c].size() > static_cast<std::size_t>(2 * delta))
            throw contract_error("cell meets more than 2*ply intervals");
        detail::emit_word(members[c], set, true, seq.occurrences);
    }
    if (seq.occurrences.size() >
        8 * n * static_cast<std::size_t>(delta) * static_cast<std::size_t>(delta))
        throw contract_error("general supersequence exceeds 8*n*ply^2");
    seq.derive_marks();
    return seq;
}

// Marked preprocessing: intervals that intersect nothing appear once,
// unmarked, in canonical position; maximal runs of overlapping intervals
// are expanded with the unit construction. Reconstruction then only reads
// marked values.
inline SuperSequence build_marked_supersequence(const IntervalSet& set) {
    if (set.empty()) throw contract_error("empty instance");
    require_unit(set);
    const std::size_t n = set.size();

    // unit intervals in canonical order intersect some other interval iff
    // they intersect a canonical neighbour
    std::vector<bool> marked(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && set[i].left <= set[i - 1].right) marked[i] = true;
        if (i + 1 < n && set[i + 1].left <= set[i].right) marked[i] = true;
    }

    SuperSequence seq;
    seq.provenance = Provenance::Marked;
    seq.source_n = n;
    seq.source_delta = ply(set);
    seq.alpha = 3.0;

    int max_cluster_ply = 1;
    std::size_t i = 0;
    std::size_t prev_cluster_last = n; // canonical index of previous cluster's last member
    while (i < n) {
        if (!marked[i]) {
            seq.occurrences.push_back({set[i].id, false});
            ++i;
            continue;
        }
        std::size_t j = i;
        std::vector<Interval> sub;
        while (j < n && marked[j]) sub.push_back(set[j++]);
        if (prev_cluster_last != n && set[prev_cluster_last].intersects(set[i]))
            throw contract_error("marked clusters must be disjoint");
        prev_cluster_last = j - 1;

        IntervalSet cluster(std::move(sub));
        max_cluster_ply = std::max(max_cluster_ply, ply(cluster));
        WindowDecomposition wd = window_decomposition(cluster);
        for (const auto& w : wd.windows)
            detail::emit_word(w.augmented, cluster, true, seq.occurrences);
        i = j;
    }
    seq.beta = 2.0 * max_cluster_ply;
    seq.derive_marks();
    return seq;
}

enum class GapSide { Min, Max };
enum class GapVariant { Safe, PaperLiteral };

// Gap preprocessing output: the bound, the kept/omitted split, and the
// witness that attains the bound.
struct GapPrep {
    GapSide which = GapSide::Min;
    GapVariant variant = GapVariant::Safe;
    double bound = 0.0;
    std::vector<std::int64_t> kept;    // canonical order
    std::vector<std::int64_t> omitted; // canonical order
    std::optional<std::pair<std::int64_t, std::int64_t>> witness_pair; // min
    std::optional<std::pair<double, double>> witness_gap;              // max
};

struct SmallestGapBound {
    double bound = 0.0;
    std::pair<std::int64_t, std::int64_t> witness{0, 0};
};

// UB_min: minimum over interval pairs of the maximum point distance
// (attained at opposite endpoints). Sorting by midpoint makes the maximum
// distance of a pair equal right(later) - left(earlier), so one scan with
// a running best-left finds the minimizing pair.
inline SmallestGapBound smallest_gap_upper_bound(const IntervalSet& set) {
    if (set.size() < 2) throw contract_error("need two intervals");
    std::vector<std::size_t> order(set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double ma = set[a].midpoint(), mb = set[b].midpoint();
        if (ma != mb) return ma < mb;
        return set[a].id < set[b].id;
    });

    SmallestGapBound best;
    bool have = false;
    double best_left = set[order[0]].left;
    std::size_t best_left_idx = order[0];
    for (std::size_t k = 1; k < order.size(); ++k) {
        const Interval& cur = set[order[k]];
        double cand = cur.right - best_left;
        if (!have || cand < best.bound) {
            best.bound = cand;
            best.witness = {std::min(cur.id, set[best_left_idx].id),
                            std::max(cur.id, set[best_left_idx].id)};
            have = true;
        }
        if (cur.left > best_left) {
            best_left = cur.left;
            best_left_idx = order[k];
        }
    }
    return best;
}

struct LargestGapBound {
    double bound = 0.0;
    std::optional<std::pair<double, double>> gap; // empty when union connected
};

// LB_max: the longest maximal open gap in the union of the intervals
// (0 when the union is connected). Every realization places a point on
// each side of such a gap, so the true largest gap is always >= this.
inline LargestGapBound largest_gap_lower_bound(const IntervalSet& set) {
    if (set.size() < 2) throw contract_error("need two intervals");
    LargestGapBound out;
    double reach = set[0].right;
    for (std::size_t i = 1; i < set.size(); ++i) {
        if (set[i].left > reach) {
            double len = set[i].left - reach;
            if (!out.gap || len > out.bound) {
                out.bound = len;
                out.gap = {reach, set[i].left};
            }
        }
        reach = std::max(reach, set[i].right);
    }
    return out;
}

// Omit an interval iff its gap distance to the nearest interval on each
// side is strictly greater than UB_min (overlap counts as distance 0, a
// missing side as infinity). Omitted points then cannot take part in the
// minimum gap of any realization, and dropping them never shrinks a gap.
inline GapPrep omit_for_smallest_gap(const IntervalSet& set) {
    SmallestGapBound ub = smallest_gap_upper_bound(set);
    const std::size_t n = set.size();

    std::vector<double> rights, lefts;
    rights.reserve(n);
    lefts.reserve(n);
    for (const auto& iv : set) {
        rights.push_back(iv.right);
        lefts.push_back(iv.left);
    }
    std::sort(rights.begin(), rights.end());
    std::sort(lefts.begin(), lefts.end());

    GapPrep prep;
    prep.which = GapSide::Min;
    prep.bound = ub.bound;
    prep.witness_pair = ub.witness;
    for (const auto& iv : set) {
        // intervals J with left_J <= right_I minus those with right_J < left_I
        // counts the intersecting ones, including I itself
        auto le_right = static_cast<std::size_t>(
            std::upper_bound(lefts.begin(), lefts.end(), iv.right) - lefts.begin());
        auto lt_left = static_cast<std::size_t>(
            std::lower_bound(rights.begin(), rights.end(), iv.left) - rights.begin());
        bool overlaps = le_right - lt_left >= 2;

        bool omit = false;
        if (!overlaps) {
            double d_left = std::numeric_limits<double>::infinity();
            if (lt_left > 0) d_left = iv.left - rights[lt_left - 1];
            double d_right = std::numeric_limits<double>::infinity();
            if (le_right < n) d_right = lefts[le_right] - iv.right;
            omit = d_left > ub.bound && d_right > ub.bound;
        }
        (omit ? prep.omitted : prep.kept).push_back(iv.id);
    }
    return prep;
}

namespace detail {

// staircase of (right, left) pairs with both coordinates strictly
// increasing; answers "max left among entries with right <= x"
class KeptStaircase {
public:
    void insert(double right, double left) {
        auto it = std::lower_bound(
            entries_.begin(), entries_.end(), right,
            [](const auto& e, double x) { return e.first < x; });
        if (it != entries_.begin() && std::prev(it)->second >= left) return;
        it = entries_.insert(it, {right, left});
        auto nxt = std::next(it);
        while (nxt != entries_.end() && nxt->second <= left)
            nxt = entries_.erase(nxt);
    }

    std::optional<double> max_left_with_right_at_most(double x) const {
        auto it = std::upper_bound(
            entries_.begin(), entries_.end(), x,
            [](double key, const auto& e) { return key < e.first; });
        if (it == entries_.begin()) return std::nullopt;
        return std::prev(it)->second;
    }

private:
    std::vector<std::pair<double, double>> entries_;
};

} // namespace detail

// Largest-gap omission.
//
// safe (default): omit I only when some kept K lies entirely left of I,
// some kept J entirely right of I, and right(J) - left(K) < LB_max. Then
// in every realization the points of K and I and J satisfy
// p_K <= p_I <= p_J with p_J - p_K < LB_max <= true largest gap, so p_I
// neither anchors the largest gap nor lets the gaps merged by its removal
// reach the reported maximum. Witnesses are locked as kept so the
// guarantee survives later omissions.
//
// paper-literal: omit I iff the next right endpoint at or after left(I)
// is closer than LB_max, and the previous left endpoint at or before
// right(I) is closer than LB_max (both among other intervals). Kept for
// comparison; it can omit intervals that anchor the largest gap, and the
// oracle exhibits a counterexample.
inline GapPrep omit_for_largest_gap(const IntervalSet& set,
                                    GapVariant variant = GapVariant::Safe) {
    LargestGapBound lb = largest_gap_lower_bound(set);
    const std::size_t n = set.size();

    GapPrep prep;
    prep.which = GapSide::Max;
    prep.variant = variant;
    prep.bound = lb.bound;
    prep.witness_gap = lb.gap;

    std::vector<bool> omit(n, false);

    if (variant == GapVariant::Safe) {
        // suffix over the canonical (left-sorted) order: two smallest rights
        // with their positions, so a query can exclude the interval itself
        struct Best2 {
            double r1 = std::numeric_limits<double>::infinity();
            double r2 = std::numeric_limits<double>::infinity();
            std::size_t i1 = SIZE_MAX;
            std::size_t i2 = SIZE_MAX;
        };
        std::vector<Best2> suffix(n + 1);
        for (std::size_t k = n; k-- > 0;) {
            Best2 b = suffix[k + 1];
            double r = set[k].right;
            if (r < b.r1) {
                b.r2 = b.r1;
                b.i2 = b.i1;
                b.r1 = r;
                b.i1 = k;
            } else if (r < b.r2) {
                b.r2 = r;
                b.i2 = k;
            }
            suffix[k] = b;
        }

        std::vector<bool> locked(n, false);
        detail::KeptStaircase kept_left;
        // canonical scan; the right-hand witness gets locked as kept
        for (std::size_t i = 0; i < n; ++i) {
            bool omit_i = false;
            if (!locked[i]) {
                auto k_left = kept_left.max_left_with_right_at_most(set[i].left);
                // first canonical position whose left is >= right_I
                double x = set[i].right;
                std::size_t lo = 0, hi = n;
                while (lo < hi) {
                    std::size_t mid = (lo + hi) / 2;
                    if (set[mid].left < x)
                        lo = mid + 1;
                    else
                        hi = mid;
                }
                std::size_t jbest = SIZE_MAX;
                if (lo < n) {
                    const Best2& b = suffix[lo];
                    jbest = (b.i1 == i) ? b.i2 : b.i1;
                }
                if (k_left && jbest != SIZE_MAX && !omit[jbest] &&
                    set[jbest].right - *k_left < lb.bound) {
                    omit_i = true;
                    locked[jbest] = true;
                }
            }
            omit[i] = omit_i;
            if (!omit_i) kept_left.insert(set[i].right, set[i].left);
        }
    } else {
        // sorted rights and lefts with index tags for self-exclusion
        std::vector<std::pair<double, std::size_t>> rights, lefts;
        for (std::size_t i = 0; i < n; ++i) {
            rights.emplace_back(set[i].right, i);
            lefts.emplace_back(set[i].left, i);
        }
        std::sort(rights.begin(), rights.end());
        std::sort(lefts.begin(), lefts.end());
        for (std::size_t i = 0; i < n; ++i) {
            auto it = std::lower_bound(rights.begin(), rights.end(),
                                       std::make_pair(set[i].left, std::size_t{0}));
            std::optional<double> next_right;
            for (auto p = it; p != rights.end(); ++p) {
                if (p->second != i) {
                    next_right = p->first;
                    break;
                }
            }
            auto jt = std::upper_bound(
                lefts.begin(), lefts.end(),
                std::make_pair(set[i].right,
                               std::numeric_limits<std::size_t>::max()));
            std::optional<double> prev_left;
            while (jt != lefts.begin()) {
                --jt;
                if (jt->second != i) {
                    prev_left = jt->first;
                    break;
                }
            }
            omit[i] = next_right && prev_left &&
                      *next_right - set[i].left < lb.bound &&
                      set[i].right - *prev_left < lb.bound;
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        (omit[i] ? prep.omitted : prep.kept).push_back(set[i].id);
    return prep;
}

// Supersequence over the kept intervals of a gap preprocessing: unit
// construction when the kept intervals are unit (carrying alpha/beta),
// general construction otherwise.
inline SuperSequence build_kept_supersequence(const IntervalSet& set,
                                              const GapPrep& prep) {
    std::vector<Interval> kept;
    for (const auto& iv : set)
        if (std::find(prep.kept.begin(), prep.kept.end(), iv.id) != prep.kept.end())
            kept.push_back(iv);
    IntervalSet kept_set(std::move(kept));
    if (kept_set.size() < 2) throw contract_error("need two kept intervals");
    if (kept_set.all_unit()) return build_unit_supersequence(kept_set);
    return build_general_supersequence(kept_set);
}

} // namespace presort

#endif
