#ifndef PRESORT_RECONSTRUCT_HPP
#define PRESORT_RECONSTRUCT_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "presort/intervals.hpp"
#include "presort/preprocess.hpp"

namespace presort {

// A realized supersequence: a value sequence promised to contain all its
// distinct values, in sorted order, as a subsequence.
struct HiddenSortedSequence {
    struct Entry {
        std::int64_t id = 0;
        double value = 0.0;
    };
    std::vector<Entry> entries;
    std::size_t k = 0; // number of distinct values
    Counters counters; // retrievals performed while realizing
};

// Replace each occurrence by its realized point. Retrievals count distinct
// ids read, not occurrences.
inline HiddenSortedSequence realize_sequence(const SuperSequence& seq,
                                             const Realization& r) {
    HiddenSortedSequence h;
    h.entries.reserve(seq.length());
    for (const auto& occ : seq.occurrences)
        h.entries.push_back({occ.id, r.value_of(occ.id)});
    h.counters.retrievals =
        static_cast<std::int64_t>(seq.distinct_ids().size());
    std::vector<double> values;
    values.reserve(h.entries.size());
    for (const auto& e : h.entries) values.push_back(e.value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    h.k = values.size();
    return h;
}

namespace detail {

inline std::uint64_t value_bits(double v) {
    if (v == 0.0) v = 0.0; // collapse -0.0 and +0.0
    return std::bit_cast<std::uint64_t>(v);
}

inline std::uint64_t mix_hash(std::uint64_t x, std::uint64_t seed) {
    x ^= seed;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct ValueEntry {
    double value = 0.0;
    std::vector<std::int64_t> ids;
    bool on_stack = false;
};

inline void add_id(std::vector<std::int64_t>& ids, std::int64_t id) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
}

// Seeded open-addressing table from value to entry index. Probe equality
// checks are value comparisons and are counted as such.
class HashDict {
public:
    explicit HashDict(std::uint64_t seed) : seed_(seed) { slots_.assign(16, -1); }

    std::ptrdiff_t find(double v, const std::vector<ValueEntry>& entries,
                        Counters& c) const {
        std::size_t mask = slots_.size() - 1;
        std::size_t pos = mix_hash(value_bits(v), seed_) & mask;
        while (slots_[pos] >= 0) {
            ++c.comparisons;
            if (entries[static_cast<std::size_t>(slots_[pos])].value == v)
                return slots_[pos];
            pos = (pos + 1) & mask;
        }
        return -1;
    }

    void insert(double v, std::ptrdiff_t index,
                const std::vector<ValueEntry>& entries) {
        if ((size_ + 1) * 2 > slots_.size()) grow(entries);
        std::size_t mask = slots_.size() - 1;
        std::size_t pos = mix_hash(value_bits(v), seed_) & mask;
        while (slots_[pos] >= 0) pos = (pos + 1) & mask;
        slots_[pos] = index;
        ++size_;
    }

private:
    void grow(const std::vector<ValueEntry>& entries) {
        std::vector<std::ptrdiff_t> old = std::move(slots_);
        slots_.assign(old.size() * 2, -1);
        std::size_t mask = slots_.size() - 1;
        for (std::ptrdiff_t idx : old) {
            if (idx < 0) continue;
            std::size_t pos =
                mix_hash(value_bits(entries[static_cast<std::size_t>(idx)].value),
                         seed_) &
                mask;
            while (slots_[pos] >= 0) pos = (pos + 1) & mask;
            slots_[pos] = idx;
        }
    }

    std::vector<std::ptrdiff_t> slots_;
    std::size_t size_ = 0;
    std::uint64_t seed_;
};

// Sorted flat map used by the comparison-model variant. Lookups are
// three-way binary searches; each probe counts as one value comparison.
class TreeDict {
public:
    std::ptrdiff_t find(double v, const std::vector<ValueEntry>& entries,
                        Counters& c) const {
        std::size_t lo = 0, hi = keys_.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            ++c.comparisons;
            double kv = entries[static_cast<std::size_t>(keys_[mid])].value;
            if (v == kv) return keys_[mid];
            if (v < kv)
                hi = mid;
            else
                lo = mid + 1;
        }
        return -1;
    }

    void insert(double v, std::ptrdiff_t index,
                const std::vector<ValueEntry>& entries) {
        auto it = std::lower_bound(
            keys_.begin(), keys_.end(), v,
            [&](std::ptrdiff_t k, double key) {
                return entries[static_cast<std::size_t>(k)].value < key;
            });
        keys_.insert(it, index);
    }

private:
    std::vector<std::ptrdiff_t> keys_; // entry indices sorted by value
};

template <class Dict>
SortedGroups stack_sort_impl(const HiddenSortedSequence& h, Dict dict) {
    std::vector<ValueEntry> entries;
    entries.reserve(h.k);
    std::vector<std::ptrdiff_t> stack; // entry indices, increasing values
    Counters c;
    std::int64_t max_dict = 0;

    for (const auto& e : h.entries) {
        ++c.dict_ops;
        std::ptrdiff_t idx = dict.find(e.value, entries, c);
        if (idx >= 0 && entries[static_cast<std::size_t>(idx)].on_stack) {
            add_id(entries[static_cast<std::size_t>(idx)].ids, e.id);
            continue;
        }
        if (idx < 0) {
            idx = static_cast<std::ptrdiff_t>(entries.size());
            entries.push_back({e.value, {e.id}, false});
            ++c.dict_ops;
            dict.insert(e.value, idx, entries);
        } else {
            // value was popped earlier; its ids survive on the entry
            add_id(entries[static_cast<std::size_t>(idx)].ids, e.id);
        }
        while (!stack.empty()) {
            ++c.comparisons;
            if (entries[static_cast<std::size_t>(stack.back())].value >= e.value) {
                entries[static_cast<std::size_t>(stack.back())].on_stack = false;
                stack.pop_back();
                ++c.stack_pops;
            } else {
                break;
            }
        }
        entries[static_cast<std::size_t>(idx)].on_stack = true;
        stack.push_back(idx);
        ++c.stack_pushes;
        max_dict = std::max<std::int64_t>(
            max_dict, static_cast<std::int64_t>(entries.size()));
    }

    if (stack.size() != h.k) throw contract_error("not hidden-sorted");

    SortedGroups out;
    out.groups.reserve(stack.size());
    for (std::ptrdiff_t idx : stack) {
        const auto& e = entries[static_cast<std::size_t>(idx)];
        out.groups.push_back({e.value, e.ids});
    }
    out.counters = c;
    out.counters.max_dict_size = max_dict;
    return out;
}

} // namespace detail

inline constexpr std::uint64_t kDefaultHashSeed = 0x9E3779B97F4A7C15ull;

enum class DictKind { Hash, Tree };

// Greedy stack sort of a hidden sorted sequence: values already on the
// stack merge their ids; new values pop everything >= them and push. The
// dictionary over seen values is either a seeded hash table (expected
// constant time per op) or an ordered structure (log-time fallback).
inline SortedGroups greedy_stack_sort(const HiddenSortedSequence& h,
                                      DictKind dict = DictKind::Hash,
                                      std::uint64_t seed = kDefaultHashSeed) {
    SortedGroups out = dict == DictKind::Hash
                           ? detail::stack_sort_impl(h, detail::HashDict(seed))
                           : detail::stack_sort_impl(h, detail::TreeDict());
    out.counters.retrievals = h.counters.retrievals;
    return out;
}

// Bounded ordered dictionary holding the largest distinct values seen so
// far, each with the ids realized to it. Capacity ceil(alpha*beta)+1; the
// smallest value is evicted on overflow and, for smooth inputs, can never
// reappear.
class MembershipWindow {
public:
    MembershipWindow(double alpha, double beta)
        : capacity_(static_cast<std::size_t>(std::ceil(alpha * beta)) + 1) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw contract_error("smoothness parameters must be positive");
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // nullptr when absent; counts one comparison per three-way probe
    detail::ValueEntry* find(double v, Counters& c) {
        if (entries_.empty()) return nullptr;
        ++c.comparisons;
        double back = entries_.back().value;
        if (v > back) return nullptr; // larger than everything seen
        if (v == back) return &entries_.back();
        std::size_t lo = 0, hi = entries_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            ++c.comparisons;
            if (v == entries_[mid].value) return &entries_[mid];
            if (v < entries_[mid].value)
                hi = mid;
            else
                lo = mid + 1;
        }
        if (lo < entries_.size() - 1) {
            ++c.comparisons;
            if (entries_[lo].value == v) return &entries_[lo];
        }
        return nullptr;
    }

    void insert(double v, std::int64_t id) {
        auto it = std::lower_bound(
            entries_.begin(), entries_.end(), v,
            [](const detail::ValueEntry& e, double key) { return e.value < key; });
        entries_.insert(it, {v, {id}, false});
    }

    bool over_capacity() const { return entries_.size() > capacity_; }

    detail::ValueEntry evict_min() {
        detail::ValueEntry e = std::move(entries_.front());
        entries_.erase(entries_.begin());
        return e;
    }

    // remaining entries in ascending value order
    std::vector<detail::ValueEntry> drain() {
        std::vector<detail::ValueEntry> rest = std::move(entries_);
        entries_.clear();
        return rest;
    }

private:
    std::size_t capacity_;
    std::vector<detail::ValueEntry> entries_; // ascending by value
};

// Reconstruction for smooth sequences: duplicate detection touches only
// the membership window; evicted values flow through the same stack
// machinery as the greedy algorithm. A runtime check verifies that no
// evicted value reappears (the smoothness guarantee).
inline SortedGroups smooth_sort(const HiddenSortedSequence& h, double alpha,
                                double beta) {
    MembershipWindow window(alpha, beta);
    std::unordered_set<std::uint64_t> evicted_bits;
    std::vector<std::pair<double, std::vector<std::int64_t>>> stack;
    Counters c;
    std::int64_t max_window = 0;

    auto flush = [&](detail::ValueEntry&& e) {
        while (!stack.empty()) {
            ++c.comparisons;
            if (stack.back().first >= e.value) {
                stack.pop_back(); // discarded; the final check reports it
                ++c.stack_pops;
            } else {
                break;
            }
        }
        stack.emplace_back(e.value, std::move(e.ids));
        ++c.stack_pushes;
    };

    for (const auto& e : h.entries) {
        ++c.dict_ops;
        if (detail::ValueEntry* hit = window.find(e.value, c)) {
            detail::add_id(hit->ids, e.id);
            continue;
        }
        if (evicted_bits.count(detail::value_bits(e.value)))
            throw contract_error("smoothness violated");
        ++c.dict_ops;
        window.insert(e.value, e.id);
        if (window.over_capacity()) {
            ++c.dict_ops;
            detail::ValueEntry out = window.evict_min();
            evicted_bits.insert(detail::value_bits(out.value));
            flush(std::move(out));
        }
        max_window = std::max<std::int64_t>(
            max_window, static_cast<std::int64_t>(window.size()));
    }
    for (auto& e : window.drain()) flush(std::move(e));

    if (stack.size() != h.k) throw contract_error("not hidden-sorted");

    SortedGroups out;
    out.groups.reserve(stack.size());
    for (auto& [v, ids] : stack) out.groups.push_back({v, std::move(ids)});
    out.counters = c;
    out.counters.retrievals = h.counters.retrievals;
    out.counters.max_dict_size = max_window;
    return out;
}

namespace detail {

// hand-rolled binary min-heap so comparison counts are stable across
// standard libraries
class MinHeap {
public:
    void push(double v, std::int64_t id, Counters& c) {
        heap_.emplace_back(v, id);
        std::size_t i = heap_.size() - 1;
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            ++c.comparisons;
            if (heap_[i].first < heap_[parent].first) {
                std::swap(heap_[i], heap_[parent]);
                i = parent;
            } else {
                break;
            }
        }
    }

    std::pair<double, std::int64_t> pop(Counters& c) {
        auto top = heap_.front();
        heap_.front() = heap_.back();
        heap_.pop_back();
        std::size_t i = 0;
        while (true) {
            std::size_t l = 2 * i + 1, r = 2 * i + 2, smallest = i;
            if (l < heap_.size()) {
                ++c.comparisons;
                if (heap_[l].first < heap_[smallest].first) smallest = l;
            }
            if (r < heap_.size()) {
                ++c.comparisons;
                if (heap_[r].first < heap_[smallest].first) smallest = r;
            }
            if (smallest == i) break;
            std::swap(heap_[i], heap_[smallest]);
            i = smallest;
        }
        return top;
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    double min_value() const { return heap_.front().first; }

private:
    std::vector<std::pair<double, std::int64_t>> heap_;
};

} // namespace detail

// Baseline without a supersequence: sweep the canonical left-endpoint
// order keeping a priority queue of realized values of opened intervals;
// a queued value is final once it is at most the next unopened left
// endpoint.
inline SortedGroups pq_sweep_sort(const IntervalSet& set, const Realization& r) {
    detail::MinHeap heap;
    Counters c;
    std::int64_t max_queue = 0;
    std::vector<std::pair<double, std::int64_t>> emitted;
    emitted.reserve(set.size());

    std::size_t i = 0;
    while (i < set.size() || !heap.empty()) {
        bool emit;
        if (heap.empty()) {
            emit = false;
        } else if (i == set.size()) {
            emit = true;
        } else {
            ++c.comparisons;
            emit = heap.min_value() <= set[i].left;
        }
        if (emit) {
            emitted.push_back(heap.pop(c));
            ++c.stack_pops;
        } else {
            heap.push(r.value_of(set[i].id), set[i].id, c);
            ++c.stack_pushes;
            ++c.retrievals;
            max_queue = std::max<std::int64_t>(
                max_queue, static_cast<std::int64_t>(heap.size()));
            ++i;
        }
    }

    SortedGroups out = detail::group_sorted(emitted);
    out.counters = c;
    out.counters.max_dict_size = max_queue;
    return out;
}

// Output of marked reconstruction: sorted value groups interleaved with
// pass-through ids whose values were never read but are already in place.
struct MixedOutput {
    struct Item {
        bool passthrough = false;
        std::int64_t id = 0;                  // passthrough only
        double value = 0.0;                   // group only
        std::vector<std::int64_t> ids;        // group only
    };
    std::vector<Item> items;
    Counters counters;

    // test helper: substitute true values for pass-through ids
    std::vector<double> expanded_values(const Realization& r) const {
        std::vector<double> out;
        for (const auto& item : items) {
            if (item.passthrough) {
                out.push_back(r.value_of(item.id));
            } else {
                for (std::size_t i = 0; i < item.ids.size(); ++i)
                    out.push_back(item.value);
            }
        }
        return out;
    }
};

// Sublinear reconstruction from a marked supersequence: unmarked
// occurrences pass through untouched; each cluster of marked occurrences
// is realized and smooth-sorted on its own.
inline MixedOutput marked_reconstruct(const SuperSequence& seq,
                                      const Realization& r) {
    if (seq.provenance != Provenance::Marked)
        throw contract_error("marked supersequence required");
    if (!seq.alpha || !seq.beta)
        throw contract_error("marked supersequence missing alpha/beta");

    MixedOutput out;
    std::size_t pos = 0;
    auto emit_unmarked_until = [&](std::size_t stop) {
        while (pos < stop) {
            out.items.push_back({true, seq.occurrences[pos].id, 0.0, {}});
            ++out.counters.touched_positions;
            ++pos;
        }
    };

    for (const auto& [begin, end] : seq.clusters) {
        emit_unmarked_until(begin);
        HiddenSortedSequence cluster;
        std::vector<std::int64_t> seen;
        for (std::size_t p = begin; p < end; ++p) {
            std::int64_t id = seq.occurrences[p].id;
            cluster.entries.push_back({id, r.value_of(id)});
            detail::add_id(seen, id);
            ++out.counters.touched_positions;
        }
        out.counters.retrievals += static_cast<std::int64_t>(seen.size());
        std::vector<double> values;
        for (const auto& e : cluster.entries) values.push_back(e.value);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        cluster.k = values.size();

        SortedGroups sorted = smooth_sort(cluster, *seq.alpha, *seq.beta);
        out.counters.comparisons += sorted.counters.comparisons;
        out.counters.dict_ops += sorted.counters.dict_ops;
        out.counters.stack_pushes += sorted.counters.stack_pushes;
        out.counters.stack_pops += sorted.counters.stack_pops;
        out.counters.max_dict_size = std::max(out.counters.max_dict_size,
                                              sorted.counters.max_dict_size);
        for (auto& g : sorted.groups)
            out.items.push_back({false, 0, g.value, std::move(g.ids)});
        pos = end;
    }
    emit_unmarked_until(seq.length());
    return out;
}

struct GapScan {
    double min_gap = 0.0;
    std::pair<std::int64_t, std::int64_t> min_witness{0, 0};
    double max_gap = 0.0;
    std::pair<std::int64_t, std::int64_t> max_witness{0, 0};
    std::int64_t comparisons = 0;
};

// Scan consecutive distinct values of a sorted reconstruction; a group
// with two ids realizes a zero gap.
inline GapScan gap_scan(const SortedGroups& g) {
    if (g.point_count() < 2) throw contract_error("need two points");
    GapScan out;
    bool have_min = false, have_max = false;
    for (const auto& grp : g.groups) {
        if (grp.ids.size() >= 2) {
            out.min_gap = 0.0;
            out.min_witness = {grp.ids[0], grp.ids[1]};
            have_min = true;
            break;
        }
    }
    for (std::size_t i = 0; i + 1 < g.groups.size(); ++i) {
        double diff = g.groups[i + 1].value - g.groups[i].value;
        ++out.comparisons;
        if (!have_min || diff < out.min_gap) {
            out.min_gap = diff;
            out.min_witness = {g.groups[i].ids.front(),
                               g.groups[i + 1].ids.front()};
            have_min = true;
        }
        ++out.comparisons;
        if (!have_max || diff > out.max_gap) {
            out.max_gap = diff;
            out.max_witness = {g.groups[i].ids.front(),
                               g.groups[i + 1].ids.front()};
            have_max = true;
        }
    }
    if (!have_max && have_min) {
        // all points share one value
        out.max_gap = 0.0;
        out.max_witness = out.min_witness;
    }
    return out;
}

enum class Algo { Baseline, StackHash, StackTree, Smooth, PqSweep };

// One entry point for every reconstruction variant; the file-based CLI and
// the benchmark both dispatch through here.
inline SortedGroups run_algorithm(Algo algo, const SuperSequence* seq,
                                  const IntervalSet* set, const Realization& r,
                                  std::uint64_t seed = kDefaultHashSeed) {
    switch (algo) {
    case Algo::Baseline:
        return sort_baseline(r);
    case Algo::PqSweep:
        if (!set) throw contract_error("pq-sweep requires the interval set");
        return pq_sweep_sort(*set, r);
    default:
        break;
    }
    if (!seq) throw contract_error("algorithm requires a supersequence");
    HiddenSortedSequence h = realize_sequence(*seq, r);
    if (algo == Algo::StackHash) return greedy_stack_sort(h, DictKind::Hash, seed);
    if (algo == Algo::StackTree) return greedy_stack_sort(h, DictKind::Tree);
    if (!seq->alpha || !seq->beta)
        throw contract_error("smooth reconstruction needs alpha/beta");
    return smooth_sort(h, *seq->alpha, *seq->beta);
}

struct GapResult {
    GapSide which = GapSide::Min;
    double gap = 0.0;
    std::pair<std::int64_t, std::int64_t> witness{0, 0};
    Counters counters;
};

// Realize and sort the kept intervals only, then read the requested gap
// off the sorted order. Sound omission makes this equal the gap over all
// n points.
inline GapResult reconstruct_gap(const GapPrep& prep, const SuperSequence& seq,
                                 const Realization& r) {
    std::vector<std::int64_t> seq_ids = seq.distinct_ids();
    std::vector<std::int64_t> kept = prep.kept;
    std::sort(kept.begin(), kept.end());
    if (seq_ids != kept)
        throw contract_error("sequence does not match kept set");
    if (kept.size() < 2) throw contract_error("need two kept intervals");

    HiddenSortedSequence h = realize_sequence(seq, r);
    SortedGroups sorted = (seq.alpha && seq.beta)
                              ? smooth_sort(h, *seq.alpha, *seq.beta)
                              : greedy_stack_sort(h);
    sorted.counters.retrievals = h.counters.retrievals;
    GapScan scan = gap_scan(sorted);

    GapResult out;
    out.which = prep.which;
    out.gap = prep.which == GapSide::Min ? scan.min_gap : scan.max_gap;
    out.witness =
        prep.which == GapSide::Min ? scan.min_witness : scan.max_witness;
    out.counters = sorted.counters;
    out.counters.comparisons += scan.comparisons;
    return out;
}

} // namespace presort

#endif
