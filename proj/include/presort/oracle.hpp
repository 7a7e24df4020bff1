#ifndef PRESORT_ORACLE_HPP
#define PRESORT_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "presort/intervals.hpp"
#include "presort/preprocess.hpp"

// Brute-force validators, deliberately independent of the algorithms they
// check: nothing here calls the preprocess/reconstruct implementations.

namespace presort::oracle {

struct Verdict {
    std::string check;
    bool ok = true;
    std::string detail; // counterexample description when !ok
    std::optional<Realization> counterexample;
};

template <typename T>
bool is_subsequence(const std::vector<T>& needle, const std::vector<T>& haystack) {
    std::size_t i = 0;
    for (const T& x : haystack)
        if (i < needle.size() && needle[i] == x) ++i;
    return i == needle.size();
}

namespace detail {

// Runs fn over the adversary family: `trials` uniform realizations, the
// four named strategies, and (n <= 10) every corner realization with each
// point at an interval endpoint. fn returns an empty string to pass.
template <typename Fn>
inline Verdict run_family(const std::string& check, const IntervalSet& set,
                          int trials, std::uint64_t seed, Fn fn) {
    Verdict v;
    v.check = check;
    auto attempt = [&](const Realization& r, const std::string& label) {
        std::string fail = fn(r);
        if (!fail.empty() && v.ok) {
            v.ok = false;
            v.detail = label + ": " + fail;
            v.counterexample = r;
        }
        return v.ok;
    };

    const std::pair<Strategy, const char*> strategies[] = {
        {Strategy::Uniform, "uniform"},
        {Strategy::LeftEndpoints, "left-endpoints"},
        {Strategy::RightEndpoints, "right-endpoints"},
        {Strategy::AdversarialReverse, "adversarial-reverse"},
    };
    for (const auto& [s, name] : strategies)
        if (!attempt(sample_realization(set, s, seed), name)) return v;

    SplitMix64 rng = SplitMix64(seed).fork(17);
    for (int t = 0; t < trials; ++t) {
        std::ostringstream label;
        label << "uniform trial " << t;
        if (!attempt(sample_realization(set, Strategy::Uniform, rng.next()),
                     label.str()))
            return v;
    }

    if (set.size() <= 10) {
        const std::size_t n = set.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<std::pair<std::int64_t, double>> values;
            values.reserve(n);
            for (std::size_t i = 0; i < n; ++i)
                values.emplace_back(set[i].id, (mask >> i) & 1 ? set[i].right
                                                               : set[i].left);
            std::ostringstream label;
            label << "endpoint realization mask=" << mask;
            if (!attempt(Realization(std::move(values)), label.str())) return v;
        }
    }
    return v;
}

// ids sorted by realized value, ties broken by first occurrence in the
// sequence (then id); this is the sorted order whose embedding the
// definition demands
inline std::vector<std::int64_t> sorted_ids(const Realization& r,
                                            const SuperSequence& seq) {
    std::vector<std::pair<std::int64_t, std::size_t>> first_occ; // id -> index
    for (std::size_t i = 0; i < seq.length(); ++i) {
        std::int64_t id = seq.occurrences[i].id;
        auto it = std::lower_bound(
            first_occ.begin(), first_occ.end(), id,
            [](const auto& p, std::int64_t key) { return p.first < key; });
        if (it == first_occ.end() || it->first != id)
            first_occ.insert(it, {id, i});
    }
    auto rank = [&](std::int64_t id) -> std::size_t {
        auto it = std::lower_bound(
            first_occ.begin(), first_occ.end(), id,
            [](const auto& p, std::int64_t key) { return p.first < key; });
        if (it != first_occ.end() && it->first == id) return it->second;
        return seq.length();
    };

    std::vector<std::int64_t> ids;
    ids.reserve(r.size());
    for (const auto& [id, v] : r.entries()) {
        (void)v;
        ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end(), [&](std::int64_t a, std::int64_t b) {
        double va = r.value_of(a), vb = r.value_of(b);
        if (va != vb) return va < vb;
        std::size_t fa = rank(a), fb = rank(b);
        if (fa != fb) return fa < fb;
        return a < b;
    });
    return ids;
}

} // namespace detail

// Definition check: for every realization in the adversary family, the
// sorted order of the points must embed in the sequence. A pass is
// evidence, not proof.
inline Verdict check_sorting_supersequence(const SuperSequence& seq,
                                           const IntervalSet& set, int trials,
                                           std::uint64_t seed) {
    if (trials < 1) throw contract_error("trials must be >= 1");
    std::vector<std::int64_t> occ_ids;
    occ_ids.reserve(seq.length());
    for (const auto& occ : seq.occurrences) occ_ids.push_back(occ.id);

    return detail::run_family(
        "sorting-supersequence", set, trials, seed,
        [&](const Realization& r) -> std::string {
            std::vector<std::int64_t> ids = detail::sorted_ids(r, seq);
            if (is_subsequence(ids, occ_ids)) return {};
            std::ostringstream os;
            os << "sorted order not a subsequence of the sequence";
            return os.str();
        });
}

// Structural smoothness check, sufficient for every realization:
//  distance  -- for positions i < j, right(I_i) - left(I_j) <= alpha;
//  packing   -- every window J with |J| > 1 meets <= beta*|J| distinct
//               intervals of the sequence. Window candidates reduce to the
//               minimal spans between a right and a left endpoint plus
//               unit-length stabs at the endpoint breakpoints.
inline Verdict check_smooth(const SuperSequence& seq, const IntervalSet& set,
                            double alpha, double beta) {
    Verdict v;
    v.check = "smooth";
    if (seq.length() == 0) return v;

    std::vector<Interval> members;
    for (std::int64_t id : seq.distinct_ids()) members.push_back(set.by_id(id));

    // distance property over occurrence positions
    double max_right = -std::numeric_limits<double>::infinity();
    std::int64_t max_right_id = 0;
    for (std::size_t j = 0; j < seq.length(); ++j) {
        const Interval& iv = set.by_id(seq.occurrences[j].id);
        if (j > 0 && max_right - iv.left > alpha) {
            v.ok = false;
            std::ostringstream os;
            os << "distance violation at position " << j << ": right("
               << max_right_id << ") - left(" << iv.id << ") = "
               << max_right - iv.left << " > alpha";
            v.detail = os.str();
            return v;
        }
        if (iv.right > max_right) {
            max_right = iv.right;
            max_right_id = iv.id;
        }
    }

    // packing property
    std::vector<double> lefts, rights;
    for (const auto& iv : members) {
        lefts.push_back(iv.left);
        rights.push_back(iv.right);
    }
    std::sort(lefts.begin(), lefts.end());
    std::sort(rights.begin(), rights.end());
    auto count_window = [&](double lo, double hi) {
        // members with left <= hi minus those with right < lo
        auto a = std::upper_bound(lefts.begin(), lefts.end(), hi) - lefts.begin();
        auto b = std::lower_bound(rights.begin(), rights.end(), lo) - rights.begin();
        return a - b;
    };
    auto fail_window = [&](double lo, double hi, double limit, auto count) {
        v.ok = false;
        std::ostringstream os;
        os << "packing violation on window [" << lo << ", " << hi << "]: "
           << count << " distinct intervals > " << limit;
        v.detail = os.str();
    };

    std::vector<double> stabs;
    for (double t : rights) stabs.push_back(t);
    for (double t : lefts) stabs.push_back(t - 1.0);
    for (double t : stabs) {
        auto cnt = count_window(t, t + 1.0);
        if (static_cast<double>(cnt) > beta) {
            fail_window(t, t + 1.0, beta, cnt);
            return v;
        }
    }
    for (double a : rights) {
        for (double b : lefts) {
            if (b - a > 1.0) {
                auto cnt = count_window(a, b);
                if (static_cast<double>(cnt) > beta * (b - a)) {
                    fail_window(a, b, beta * (b - a), cnt);
                    return v;
                }
            }
        }
    }
    return v;
}

// O(n^2) reference for the smallest-gap upper bound.
inline double brute_ub_min(const IntervalSet& set) {
    if (set.size() < 2) throw contract_error("need two intervals");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            double d = std::max(set[j].right - set[i].left,
                                set[i].right - set[j].left);
            best = std::min(best, d);
        }
    }
    return best;
}

// Reference gaps via a full sort of the realized values.
inline std::pair<double, double> brute_gaps(const Realization& r) {
    if (r.size() < 2) throw contract_error("need two points");
    std::vector<double> values;
    values.reserve(r.size());
    for (const auto& [id, v] : r.entries()) {
        (void)id;
        values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    double min_gap = std::numeric_limits<double>::infinity();
    double max_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        double d = values[i + 1] - values[i];
        min_gap = std::min(min_gap, d);
        max_gap = std::max(max_gap, d);
    }
    return {min_gap, max_gap};
}

// Soundness of an omission: on the relevant side, the gap over kept points
// must equal the gap over all points, for the whole adversary family; the
// bound itself must actually bound.
inline Verdict check_gap_omission(const IntervalSet& set, const GapPrep& prep,
                                  int trials, std::uint64_t seed) {
    return detail::run_family(
        prep.which == GapSide::Min ? "gap-omission-min" : "gap-omission-max",
        set, trials, seed, [&](const Realization& r) -> std::string {
            auto [min_all, max_all] = brute_gaps(r);
            if (prep.which == GapSide::Min && !(min_all <= prep.bound))
                return "smallest gap exceeds UB_min";
            if (prep.which == GapSide::Max && !(max_all >= prep.bound))
                return "largest gap below LB_max";

            if (prep.kept.size() < 2)
                return "fewer than two kept intervals";
            std::vector<std::pair<std::int64_t, double>> kept_values;
            for (std::int64_t id : prep.kept)
                kept_values.emplace_back(id, r.value_of(id));
            auto [min_kept, max_kept] =
                brute_gaps(Realization(std::move(kept_values)));

            if (prep.which == GapSide::Min && min_kept != min_all) {
                std::ostringstream os;
                os << "kept min gap " << min_kept << " != true min gap "
                   << min_all;
                return os.str();
            }
            if (prep.which == GapSide::Max && max_kept != max_all) {
                std::ostringstream os;
                os << "kept max gap " << max_kept << " != true max gap "
                   << max_all;
                return os.str();
            }
            return {};
        });
}

} // namespace presort::oracle

#endif
