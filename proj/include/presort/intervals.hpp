#ifndef PRESORT_INTERVALS_HPP
#define PRESORT_INTERVALS_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "presort/rng.hpp"

namespace presort {

// Violations of an operation's stated preconditions/invariants. The CLI
// maps these to exit code 3.
class contract_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A closed interval [left, right] on the real line with a stable integer id.
// A point p is contained iff left <= p <= right; touching endpoints count
// as intersection.
struct Interval {
    std::int64_t id = 0;
    double left = 0.0;
    double right = 0.0;

    Interval() = default;
    Interval(std::int64_t id_, double left_, double right_)
        : id(id_), left(left_), right(right_) {
        if (!(left <= right))
            throw contract_error("interval " + std::to_string(id_) +
                                 ": left must be <= right");
    }

    bool contains(double p) const { return left <= p && p <= right; }
    bool intersects(const Interval& other) const {
        return left <= other.right && other.left <= right;
    }
    double length() const { return right - left; }
    double midpoint() const { return (left + right) / 2.0; }
};

// A set of intervals kept in canonical order: sorted by left endpoint,
// ties broken by id. Ids must be distinct.
class IntervalSet {
public:
    IntervalSet() = default;

    explicit IntervalSet(std::vector<Interval> intervals)
        : intervals_(std::move(intervals)) {
        std::sort(intervals_.begin(), intervals_.end(),
                  [](const Interval& a, const Interval& b) {
                      if (a.left != b.left) return a.left < b.left;
                      return a.id < b.id;
                  });
        std::vector<std::int64_t> ids;
        ids.reserve(intervals_.size());
        for (const auto& iv : intervals_) ids.push_back(iv.id);
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw contract_error("duplicate interval id");
    }

    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    const std::vector<Interval>& intervals() const { return intervals_; }

    auto begin() const { return intervals_.begin(); }
    auto end() const { return intervals_.end(); }

    // true iff every member has length exactly 1 (exact comparison; the
    // generator emits dyadic endpoints so this is well-defined)
    bool all_unit() const {
        for (const auto& iv : intervals_)
            if (iv.length() != 1.0) return false;
        return true;
    }

    const Interval& by_id(std::int64_t id) const {
        for (const auto& iv : intervals_)
            if (iv.id == id) return iv;
        throw contract_error("unknown interval id " + std::to_string(id));
    }

private:
    std::vector<Interval> intervals_;
};

// One point per region: a map id -> value with value inside the interval.
class Realization {
public:
    Realization() = default;

    explicit Realization(std::vector<std::pair<std::int64_t, double>> values)
        : values_(std::move(values)) {
        std::sort(values_.begin(), values_.end());
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (values_[i].first == values_[i - 1].first)
                throw contract_error("duplicate id in realization");
    }

    std::size_t size() const { return values_.size(); }
    const std::vector<std::pair<std::int64_t, double>>& entries() const {
        return values_;
    }

    bool has(std::int64_t id) const { return find(id) != nullptr; }

    double value_of(std::int64_t id) const {
        if (const double* v = find(id)) return *v;
        throw contract_error("unrealized interval " + std::to_string(id));
    }

    // containment invariant: domain equals the set's ids, values inside
    void validate_against(const IntervalSet& set) const {
        if (values_.size() != set.size())
            throw contract_error("realization does not cover the interval set");
        for (const auto& iv : set) {
            double v = value_of(iv.id);
            if (!iv.contains(v))
                throw contract_error("value outside interval " +
                                     std::to_string(iv.id));
        }
    }

private:
    const double* find(std::int64_t id) const {
        auto it = std::lower_bound(
            values_.begin(), values_.end(), id,
            [](const auto& p, std::int64_t key) { return p.first < key; });
        if (it != values_.end() && it->first == id) return &it->second;
        return nullptr;
    }

    std::vector<std::pair<std::int64_t, double>> values_; // sorted by id
};

// Operation counters. Each reconstruction/sort owns one; "comparisons"
// counts comparisons between point values only.
struct Counters {
    std::int64_t comparisons = 0;
    std::int64_t dict_ops = 0;
    std::int64_t stack_pushes = 0;
    std::int64_t stack_pops = 0;
    std::int64_t retrievals = 0;
    std::int64_t touched_positions = 0;
    std::int64_t max_dict_size = 0; // peak dictionary/queue size

    std::int64_t stack_ops() const { return stack_pushes + stack_pops; }
};

// Sorted output: strictly increasing group values; every id sits in the
// group of its realized value, so expanding groups in order is a sorted
// order of all points.
struct SortedGroups {
    struct Group {
        double value = 0.0;
        std::vector<std::int64_t> ids;
    };

    std::vector<Group> groups;
    Counters counters;

    std::size_t point_count() const {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.ids.size();
        return n;
    }

    std::vector<double> expanded_values() const {
        std::vector<double> out;
        out.reserve(point_count());
        for (const auto& g : groups)
            for (std::size_t i = 0; i < g.ids.size(); ++i) out.push_back(g.value);
        return out;
    }
};

// Maximum over all points of the number of intervals containing that point.
// Endpoint sweep; at equal coordinates a left endpoint opens before a right
// endpoint closes, matching the closed-interval convention.
inline int ply(const IntervalSet& set) {
    if (set.empty()) throw contract_error("empty instance");
    // (x, kind): kind 0 = open, 1 = close; opens sort first at equal x
    std::vector<std::pair<double, int>> events;
    events.reserve(set.size() * 2);
    for (const auto& iv : set) {
        events.emplace_back(iv.left, 0);
        events.emplace_back(iv.right, 1);
    }
    std::sort(events.begin(), events.end());
    int active = 0, best = 0;
    for (const auto& [x, kind] : events) {
        (void)x;
        if (kind == 0) {
            ++active;
            best = std::max(best, active);
        } else {
            --active;
        }
    }
    return best;
}

enum class InstanceKind { Unit, General };

namespace detail {

inline double dyadic(std::uint64_t k, int neg_pow2) {
    return static_cast<double>(k) / static_cast<double>(1ull << neg_pow2);
}

// distinct offsets in [0,1) on a dyadic grid (2^-12, refined when the
// cluster is too large for it), first one pinned to 0 so the cluster's
// common point sits at base+1 and its ply equals its size
inline std::vector<double> cluster_offsets(std::size_t count, SplitMix64& rng) {
    int bits = 12;
    while ((std::uint64_t{1} << bits) < 4 * count) ++bits;
    std::vector<std::uint64_t> ks{0};
    while (ks.size() < count) {
        std::uint64_t k = rng.next_below(std::uint64_t{1} << bits);
        if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    std::vector<double> offs;
    offs.reserve(count);
    for (auto k : ks) offs.push_back(dyadic(k, bits));
    return offs;
}

inline std::vector<std::size_t> cluster_sizes(std::size_t n, int target_ply,
                                              SplitMix64& rng) {
    // first cluster pins the ply; the rest skew small (weight 3^(d-s)) so
    // typical instances mix singletons with genuine overlap groups
    std::vector<std::size_t> sizes{static_cast<std::size_t>(target_ply)};
    std::size_t left = n - sizes[0];
    const int d = target_ply;
    std::vector<std::uint64_t> weight(static_cast<std::size_t>(d) + 1, 0);
    std::uint64_t total_weight = 0;
    for (int s = 1; s <= d; ++s) {
        std::uint64_t w = 1;
        for (int p = 0; p < d - s; ++p) w *= 3;
        weight[static_cast<std::size_t>(s)] = w;
        total_weight += w;
    }
    while (left > 0) {
        std::uint64_t t = rng.next_below(total_weight);
        std::size_t s = 1;
        std::uint64_t acc = weight[1];
        while (t >= acc) {
            ++s;
            acc += weight[s];
        }
        s = std::min(s, left);
        sizes.push_back(s);
        left -= s;
    }
    return sizes;
}

} // namespace detail

// Deterministic, seed-keyed instance with ply <= target_ply, and exactly
// target_ply whenever n >= target_ply (the first cluster shares a common
// point). Endpoints are dyadic rationals, so all comparisons downstream are
// exact. Unit instances have length exactly 1; general instances mix
// lengths and occasionally emit degenerate (single point) intervals.
inline IntervalSet generate_instance(InstanceKind kind, std::size_t n,
                                     int target_ply, std::uint64_t seed) {
    if (n < 1 || target_ply < 1)
        throw contract_error("n and target ply must be positive");
    if (static_cast<std::size_t>(target_ply) > n)
        throw contract_error("infeasible ply");

    SplitMix64 rng = SplitMix64(seed).fork(kind == InstanceKind::Unit ? 1 : 2);
    auto sizes = detail::cluster_sizes(n, target_ply, rng);

    std::vector<Interval> out;
    out.reserve(n);
    std::int64_t next_id = 1;

    if (kind == InstanceKind::Unit) {
        double base = 0.0;
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            std::size_t s = sizes[c];
            // a chained cluster starts just inside the previous cluster's
            // window so augmented groups get exercised; the next cluster must
            // be smaller than target_ply to keep the overlap within budget,
            // and the 2^-13 reach below assumes the coarse offset grid
            bool chain = c + 1 < sizes.size() && target_ply >= 2 &&
                         target_ply <= 1024 &&
                         sizes[c + 1] <= static_cast<std::size_t>(target_ply) - 1 &&
                         rng.next_below(100) < 15;
            auto offs = detail::cluster_offsets(s, rng);
            for (double off : offs)
                out.emplace_back(next_id++, base + off, base + off + 1.0);
            double off_max = offs.back();
            if (chain) {
                // reach of exactly 2^-13 past the next base: one interval
                // from this cluster overlaps only the next cluster's leader
                base = base + 1.0 + off_max - detail::dyadic(1, 13);
            } else {
                base = base + 3.0 + detail::dyadic(rng.next_below(8192), 12);
            }
        }
    } else {
        double anchor = 0.0;
        for (std::size_t s : sizes) {
            double max_right = anchor;
            for (std::size_t i = 0; i < s; ++i) {
                bool degenerate = rng.next_below(8) == 0;
                double u = degenerate ? 0.0 : detail::dyadic(rng.next_below(2049), 10);
                double v = degenerate ? 0.0 : detail::dyadic(rng.next_below(2049), 10);
                out.emplace_back(next_id++, anchor - u, anchor + v);
                max_right = std::max(max_right, anchor + v);
            }
            // next anchor clears this cluster even after its members stretch
            // left by up to 2
            anchor = max_right + 3.0 + detail::dyadic(rng.next_below(2048), 10);
        }
    }
    return IntervalSet(std::move(out));
}

enum class Strategy { Uniform, LeftEndpoints, RightEndpoints, AdversarialReverse };

namespace detail {

// Maximal cliques of the interval graph, in left-to-right stab order.
// Snapshot the active set just before a close that follows at least one
// open; every interval lands in at least one snapshot.
inline std::vector<std::vector<std::size_t>> maximal_cliques(const IntervalSet& set) {
    struct Event {
        double x;
        int kind; // 0 open, 1 close
        std::size_t idx;
    };
    std::vector<Event> events;
    events.reserve(set.size() * 2);
    for (std::size_t i = 0; i < set.size(); ++i) {
        events.push_back({set[i].left, 0, i});
        events.push_back({set[i].right, 1, i});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.idx < b.idx;
    });
    std::vector<std::vector<std::size_t>> cliques;
    std::vector<std::size_t> active;
    bool gained = false;
    for (const auto& e : events) {
        if (e.kind == 0) {
            active.push_back(e.idx);
            gained = true;
        } else {
            if (gained) {
                auto snapshot = active;
                std::sort(snapshot.begin(), snapshot.end());
                cliques.push_back(std::move(snapshot));
                gained = false;
            }
            active.erase(std::find(active.begin(), active.end(), e.idx));
        }
    }
    return cliques;
}

} // namespace detail

// One value per interval, inside the interval, deterministic per seed.
// adversarial-reverse walks the maximal cliques left to right and hands the
// not-yet-assigned members of each clique descending values inside the
// clique's common intersection, so within each clique the realized order
// reverses the left-endpoint order as far as earlier assignments allow.
inline Realization sample_realization(const IntervalSet& set, Strategy strategy,
                                      std::uint64_t seed) {
    if (set.empty()) throw contract_error("empty instance");
    SplitMix64 rng = SplitMix64(seed).fork(3);
    std::vector<std::pair<std::int64_t, double>> values;
    values.reserve(set.size());

    switch (strategy) {
    case Strategy::Uniform:
        for (const auto& iv : set) {
            double frac = detail::dyadic(rng.next_below((1ull << 20) + 1), 20);
            values.emplace_back(iv.id, iv.left + frac * iv.length());
        }
        break;
    case Strategy::LeftEndpoints:
        for (const auto& iv : set) values.emplace_back(iv.id, iv.left);
        break;
    case Strategy::RightEndpoints:
        for (const auto& iv : set) values.emplace_back(iv.id, iv.right);
        break;
    case Strategy::AdversarialReverse: {
        std::vector<bool> assigned(set.size(), false);
        std::vector<double> val(set.size(), 0.0);
        for (const auto& clique : detail::maximal_cliques(set)) {
            double lo = set[clique.front()].left;
            double hi = set[clique.front()].right;
            for (std::size_t idx : clique) {
                lo = std::max(lo, set[idx].left);
                hi = std::min(hi, set[idx].right);
            }
            std::vector<std::size_t> todo;
            for (std::size_t idx : clique)
                if (!assigned[idx]) todo.push_back(idx); // canonical order
            if (todo.empty()) continue;
            int bits = 0;
            while ((std::size_t{1} << bits) < todo.size()) ++bits;
            double step = (hi - lo) / static_cast<double>(std::size_t{1} << bits);
            for (std::size_t j = 0; j < todo.size(); ++j) {
                val[todo[j]] = hi - static_cast<double>(j) * step;
                assigned[todo[j]] = true;
            }
        }
        for (std::size_t i = 0; i < set.size(); ++i)
            values.emplace_back(set[i].id, val[i]);
        break;
    }
    }
    return Realization(std::move(values));
}

namespace detail {

inline void merge_sort_pairs(std::vector<std::pair<double, std::int64_t>>& a,
                             std::vector<std::pair<double, std::int64_t>>& tmp,
                             std::size_t lo, std::size_t hi,
                             std::int64_t& comparisons) {
    if (hi - lo <= 1) return;
    std::size_t mid = lo + (hi - lo) / 2;
    merge_sort_pairs(a, tmp, lo, mid, comparisons);
    merge_sort_pairs(a, tmp, mid, hi, comparisons);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        ++comparisons;
        if (a[j].first < a[i].first)
            tmp[k++] = a[j++];
        else
            tmp[k++] = a[i++];
    }
    while (i < mid) tmp[k++] = a[i++];
    while (j < hi) tmp[k++] = a[j++];
    std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
              tmp.begin() + static_cast<std::ptrdiff_t>(hi),
              a.begin() + static_cast<std::ptrdiff_t>(lo));
}

inline SortedGroups group_sorted(
    const std::vector<std::pair<double, std::int64_t>>& sorted) {
    SortedGroups out;
    for (const auto& [v, id] : sorted) {
        if (out.groups.empty() || out.groups.back().value != v) {
            out.groups.push_back({v, {id}});
        } else {
            out.groups.back().ids.push_back(id);
        }
    }
    return out;
}

} // namespace detail

// The from-scratch control: stable merge sort over the realized values,
// counting element comparisons only.
inline SortedGroups sort_baseline(const Realization& r) {
    std::vector<std::pair<double, std::int64_t>> pairs;
    pairs.reserve(r.size());
    for (const auto& [id, v] : r.entries()) pairs.emplace_back(v, id);
    std::int64_t comparisons = 0;
    auto tmp = pairs;
    detail::merge_sort_pairs(pairs, tmp, 0, pairs.size(), comparisons);
    SortedGroups out = detail::group_sorted(pairs);
    out.counters.comparisons = comparisons;
    out.counters.retrievals = static_cast<std::int64_t>(r.size());
    return out;
}

} // namespace presort

#endif
