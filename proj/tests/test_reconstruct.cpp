#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "helpers.hpp"
#include "presort/oracle.hpp"
#include "presort/reconstruct.hpp"

using namespace presort;
using presort_test::make_set;

namespace {

SuperSequence make_seq(std::vector<std::int64_t> ids,
                       Provenance prov = Provenance::Unit,
                       std::optional<double> alpha = std::nullopt,
                       std::optional<double> beta = std::nullopt) {
    SuperSequence seq;
    seq.provenance = prov;
    seq.alpha = alpha;
    seq.beta = beta;
    for (std::int64_t id : ids) seq.occurrences.push_back({id, true});
    seq.derive_marks();
    return seq;
}

HiddenSortedSequence make_hidden(
    std::vector<std::pair<std::int64_t, double>> entries) {
    HiddenSortedSequence h;
    std::vector<double> values;
    for (auto [id, v] : entries) {
        h.entries.push_back({id, v});
        values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    h.k = values.size();
    return h;
}

const Realization kWorked({{1, 0.9}, {2, 0.6}, {3, 2.5}});

} // namespace

TEST_CASE("realize_sequence substitutes points for regions") {
    SuperSequence seq = make_seq({1, 2, 1, 2, 3});
    HiddenSortedSequence h = realize_sequence(seq, kWorked);
    REQUIRE(h.entries.size() == 5);
    std::vector<double> values;
    for (const auto& e : h.entries) values.push_back(e.value);
    CHECK(values == std::vector<double>{0.9, 0.6, 0.9, 0.6, 2.5});
    CHECK(h.k == 3);
    CHECK(h.counters.retrievals == 3);

    CHECK(realize_sequence(make_seq({}), kWorked).entries.empty());

    HiddenSortedSequence rep = realize_sequence(make_seq({1, 1, 1, 1, 1}), kWorked);
    CHECK(rep.counters.retrievals == 1);

    CHECK_THROWS_WITH_AS(realize_sequence(make_seq({1, 7}), kWorked),
                         "unrealized interval 7", contract_error);
}

TEST_CASE("greedy stack sort: worked trace and duplicates") {
    for (DictKind dict : {DictKind::Hash, DictKind::Tree}) {
        HiddenSortedSequence h = make_hidden(
            {{1, 0.9}, {2, 0.6}, {1, 0.9}, {2, 0.6}, {3, 2.5}});
        SortedGroups g = greedy_stack_sort(h, dict);
        REQUIRE(g.groups.size() == 3);
        CHECK(g.groups[0].value == 0.6);
        CHECK(g.groups[0].ids == std::vector<std::int64_t>{2});
        CHECK(g.groups[1].value == 0.9);
        CHECK(g.groups[1].ids == std::vector<std::int64_t>{1});
        CHECK(g.groups[2].value == 2.5);
        CHECK(g.groups[2].ids == std::vector<std::int64_t>{3});
        CHECK(g.counters.stack_ops() <= 2 * 5);
    }

    HiddenSortedSequence sorted = make_hidden({{1, 1.0}, {2, 2.0}, {3, 3.0}});
    SortedGroups g = greedy_stack_sort(sorted);
    CHECK(g.counters.stack_pops == 0);
    CHECK(g.groups.size() == 3);

    SortedGroups dup = greedy_stack_sort(make_hidden({{1, 1.0}, {2, 1.0}}));
    REQUIRE(dup.groups.size() == 1);
    CHECK(dup.groups[0].ids == std::vector<std::int64_t>{1, 2});
}

TEST_CASE("greedy stack sort rejects sequences that are not hidden sorted") {
    HiddenSortedSequence bad = make_hidden({{1, 2.0}, {2, 1.0}});
    CHECK_THROWS_WITH_AS(greedy_stack_sort(bad), "not hidden-sorted",
                         contract_error);
}

TEST_CASE("smooth sort: worked example stays inside the window") {
    HiddenSortedSequence h = make_hidden(
        {{1, 0.9}, {2, 0.6}, {1, 0.9}, {2, 0.6}, {3, 2.5}});
    SortedGroups g = smooth_sort(h, 3.0, 4.0);
    REQUIRE(g.groups.size() == 3);
    CHECK(g.groups[0].value == 0.6);
    CHECK(g.groups[0].ids == std::vector<std::int64_t>{2});
    CHECK(g.groups[1].value == 0.9);
    CHECK(g.groups[2].value == 2.5);
    CHECK(g.counters.max_dict_size <= 3);
    CHECK(g.counters.max_dict_size <=
          static_cast<std::int64_t>(std::ceil(3.0 * 4.0)) + 1);

    SortedGroups identity =
        smooth_sort(make_hidden({{1, 1.0}, {2, 2.0}, {3, 3.0}}), 2.0, 2.0);
    CHECK(identity.groups.size() == 3);
}

TEST_CASE("smooth sort detects violations") {
    // capacity ceil(1*1)+1 = 2; the value 1 is evicted and then reappears
    HiddenSortedSequence reappear =
        make_hidden({{1, 3.0}, {2, 2.0}, {3, 1.0}, {3, 1.0}});
    CHECK_THROWS_WITH_AS(smooth_sort(reappear, 1.0, 1.0),
                         "smoothness violated", contract_error);

    // strictly decreasing distinct values lose entries through the stack
    HiddenSortedSequence decreasing = make_hidden(
        {{1, 5.0}, {2, 4.0}, {3, 3.0}, {4, 2.0}, {5, 1.0}});
    CHECK_THROWS_WITH_AS(smooth_sort(decreasing, 1.0, 1.0), "not hidden-sorted",
                         contract_error);
}

TEST_CASE("pq sweep: worked example and disjoint queue bound") {
    IntervalSet set = make_set({{0, 1}, {0.5, 1.5}, {2, 3}});
    SortedGroups g = pq_sweep_sort(set, kWorked);
    CHECK(g.expanded_values() == std::vector<double>{0.6, 0.9, 2.5});

    IntervalSet disjoint = make_set({{0, 1}, {3, 4}, {8, 9}});
    Realization r = sample_realization(disjoint, Strategy::Uniform, 3);
    SortedGroups d = pq_sweep_sort(disjoint, r);
    CHECK(d.counters.max_dict_size == 1);
    CHECK(d.expanded_values() == sort_baseline(r).expanded_values());
}

TEST_CASE("pq sweep comparison bound") {
    for (std::uint64_t seed : {1u, 2u}) {
        IntervalSet set = generate_instance(InstanceKind::Unit, 1000, 4, seed);
        Realization r = sample_realization(set, Strategy::Uniform, seed);
        SortedGroups g = pq_sweep_sort(set, r);
        CHECK(g.expanded_values() == sort_baseline(r).expanded_values());
        double n = static_cast<double>(set.size());
        double maxq = static_cast<double>(
            std::max<std::int64_t>(g.counters.max_dict_size, 1));
        CHECK(static_cast<double>(g.counters.comparisons) <=
              4.0 * n * (1.0 + std::log2(maxq)));
    }
}

TEST_CASE("marked reconstruction: worked example") {
    IntervalSet set =
        make_set({{0, 1}, {0.5, 1.5}, {3, 4}, {6, 7}, {6.5, 7.5}});
    SuperSequence seq = build_marked_supersequence(set);
    Realization r({{1, 0.9}, {2, 0.6}, {3, 3.5}, {4, 6.9}, {5, 6.6}});
    MixedOutput out = marked_reconstruct(seq, r);

    REQUIRE(out.items.size() == 5);
    CHECK(!out.items[0].passthrough);
    CHECK(out.items[0].value == 0.6);
    CHECK(out.items[0].ids == std::vector<std::int64_t>{2});
    CHECK(out.items[1].value == 0.9);
    CHECK(out.items[2].passthrough);
    CHECK(out.items[2].id == 3);
    CHECK(out.items[3].value == 6.6);
    CHECK(out.items[4].value == 6.9);

    CHECK(out.counters.retrievals == 4);
    CHECK(out.counters.touched_positions <= 8 + 2 + 1);

    std::vector<double> expanded = out.expanded_values(r);
    CHECK(std::is_sorted(expanded.begin(), expanded.end()));
    CHECK(expanded == sort_baseline(r).expanded_values());
}

TEST_CASE("marked reconstruction: all disjoint and single cluster") {
    IntervalSet disjoint = make_set({{0, 1}, {3, 4}, {9, 10}});
    SuperSequence seq = build_marked_supersequence(disjoint);
    Realization r = sample_realization(disjoint, Strategy::Uniform, 1);
    MixedOutput out = marked_reconstruct(seq, r);
    CHECK(out.counters.retrievals == 0);
    for (const auto& item : out.items) CHECK(item.passthrough);

    IntervalSet cluster = make_set({{0, 1}, {0.25, 1.25}, {0.5, 1.5}});
    SuperSequence mseq = build_marked_supersequence(cluster);
    Realization cr = sample_realization(cluster, Strategy::AdversarialReverse, 2);
    MixedOutput mixed = marked_reconstruct(mseq, cr);
    HiddenSortedSequence h = realize_sequence(mseq, cr);
    SortedGroups smooth = smooth_sort(h, *mseq.alpha, *mseq.beta);
    CHECK(mixed.expanded_values(cr) == smooth.expanded_values());

    SuperSequence unit = build_unit_supersequence(cluster);
    CHECK_THROWS_WITH_AS(marked_reconstruct(unit, cr),
                         "marked supersequence required", contract_error);
}

TEST_CASE("gap scan examples") {
    SortedGroups g;
    g.groups = {{0.6, {2}}, {0.9, {1}}, {2.5, {3}}};
    GapScan scan = gap_scan(g);
    CHECK(scan.min_gap == 0.9 - 0.6);
    CHECK(scan.min_witness == std::pair<std::int64_t, std::int64_t>{2, 1});
    CHECK(scan.max_gap == 2.5 - 0.9);
    CHECK(scan.max_witness == std::pair<std::int64_t, std::int64_t>{1, 3});

    SortedGroups dup;
    dup.groups = {{1.0, {1, 2}}, {2.0, {3}}};
    GapScan dscan = gap_scan(dup);
    CHECK(dscan.min_gap == 0.0);
    CHECK(dscan.max_gap == 1.0);

    SortedGroups two;
    two.groups = {{1.0, {1}}, {4.5, {2}}};
    GapScan tscan = gap_scan(two);
    CHECK(tscan.min_gap == 3.5);
    CHECK(tscan.max_gap == 3.5);

    SortedGroups one;
    one.groups = {{1.0, {1}}};
    CHECK_THROWS_WITH_AS(gap_scan(one), "need two points", contract_error);
}

TEST_CASE("reconstruct_gap equals the brute-force gap over all points") {
    {
        IntervalSet set = make_set({{0, 1}, {0.2, 1.2}, {10, 11}});
        GapPrep prep = omit_for_smallest_gap(set);
        SuperSequence seq = build_kept_supersequence(set, prep);
        Realization r({{1, 0.5}, {2, 0.7}, {3, 10.5}});
        GapResult res = reconstruct_gap(prep, seq, r);
        CHECK(res.gap == 0.7 - 0.5);
        CHECK(res.counters.retrievals == 2); // |kept|
        auto [min_all, max_all] = oracle::brute_gaps(r);
        (void)max_all;
        CHECK(res.gap == min_all);
    }
    {
        IntervalSet set = make_set({{0, 1}, {2, 3}, {4, 5}, {20, 21}});
        GapPrep prep = omit_for_largest_gap(set, GapVariant::Safe);
        SuperSequence seq = build_kept_supersequence(set, prep);
        Realization r({{1, 0.5}, {2, 2.5}, {3, 4.5}, {4, 20.5}});
        GapResult res = reconstruct_gap(prep, seq, r);
        CHECK(res.gap == 16.0);
        CHECK(res.counters.retrievals == 3);
        auto [min_all, max_all] = oracle::brute_gaps(r);
        (void)min_all;
        CHECK(res.gap == max_all);
    }
    {
        IntervalSet set = make_set({{0, 1}, {5, 6}});
        GapPrep prep = omit_for_smallest_gap(set);
        SuperSequence seq = build_kept_supersequence(set, prep);
        Realization r({{1, 0.25}, {2, 5.75}});
        GapResult res = reconstruct_gap(prep, seq, r);
        CHECK(res.gap == 5.75 - 0.25);
    }
    {
        GapPrep prep;
        prep.which = GapSide::Min;
        prep.kept = {1};
        SuperSequence seq = make_seq({1});
        CHECK_THROWS_WITH_AS(reconstruct_gap(prep, seq, kWorked),
                             "need two kept intervals", contract_error);
    }
}

TEST_CASE("oracle equivalence across every reconstruction path") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        for (std::size_t n : {3u, 12u, 60u}) {
            for (int delta : {1, 2, 4}) {
                if (static_cast<std::size_t>(delta) > n) continue;
                IntervalSet set =
                    generate_instance(InstanceKind::Unit, n, delta, seed);
                SuperSequence unit = build_unit_supersequence(set);
                SuperSequence general = build_general_supersequence(set);
                SuperSequence marked = build_marked_supersequence(set);
                for (auto strategy :
                     {Strategy::Uniform, Strategy::LeftEndpoints,
                      Strategy::RightEndpoints, Strategy::AdversarialReverse}) {
                    Realization r = sample_realization(set, strategy, seed + 7);
                    std::vector<double> expect =
                        sort_baseline(r).expanded_values();

                    for (const SuperSequence* seq : {&unit, &general}) {
                        HiddenSortedSequence h = realize_sequence(*seq, r);
                        CHECK(greedy_stack_sort(h, DictKind::Hash)
                                  .expanded_values() == expect);
                        CHECK(greedy_stack_sort(h, DictKind::Tree)
                                  .expanded_values() == expect);
                        CHECK(h.counters.retrievals ==
                              static_cast<std::int64_t>(n));
                    }
                    HiddenSortedSequence hu = realize_sequence(unit, r);
                    CHECK(smooth_sort(hu, *unit.alpha, *unit.beta)
                              .expanded_values() == expect);
                    CHECK(pq_sweep_sort(set, r).expanded_values() == expect);
                    CHECK(marked_reconstruct(marked, r).expanded_values(r) ==
                          expect);
                }
            }
        }
    }
}

TEST_CASE("stack discipline and window certificates") {
    for (std::uint64_t seed : {5u, 6u}) {
        IntervalSet set = generate_instance(InstanceKind::Unit, 50, 4, seed);
        SuperSequence seq = build_unit_supersequence(set);
        Realization r = sample_realization(set, Strategy::Uniform, seed);
        HiddenSortedSequence h = realize_sequence(seq, r);

        SortedGroups hash = greedy_stack_sort(h, DictKind::Hash);
        CHECK(hash.counters.stack_pushes <=
              static_cast<std::int64_t>(h.k) + hash.counters.stack_pops);
        CHECK(hash.counters.stack_ops() <=
              2 * static_cast<std::int64_t>(h.entries.size()));

        SortedGroups smooth = smooth_sort(h, *seq.alpha, *seq.beta);
        std::int64_t cap =
            static_cast<std::int64_t>(std::ceil(*seq.alpha * *seq.beta)) + 1;
        CHECK(smooth.counters.max_dict_size <= cap);
        CHECK(smooth.counters.stack_ops() <=
              2 * static_cast<std::int64_t>(h.entries.size()));
    }
}

TEST_CASE("reconstruction is deterministic, counters included") {
    IntervalSet set = generate_instance(InstanceKind::Unit, 40, 3, 9);
    SuperSequence seq = build_unit_supersequence(set);
    Realization r = sample_realization(set, Strategy::Uniform, 9);
    HiddenSortedSequence h = realize_sequence(seq, r);

    auto fingerprint = [](const SortedGroups& g) {
        return std::tuple(g.groups.size(), g.counters.comparisons,
                          g.counters.dict_ops, g.counters.stack_pushes,
                          g.counters.stack_pops);
    };
    CHECK(fingerprint(greedy_stack_sort(h, DictKind::Hash, 123)) ==
          fingerprint(greedy_stack_sort(h, DictKind::Hash, 123)));
    CHECK(fingerprint(greedy_stack_sort(h, DictKind::Tree)) ==
          fingerprint(greedy_stack_sort(h, DictKind::Tree)));
    CHECK(fingerprint(smooth_sort(h, 3.0, 6.0)) ==
          fingerprint(smooth_sort(h, 3.0, 6.0)));
    CHECK(fingerprint(pq_sweep_sort(set, r)) ==
          fingerprint(pq_sweep_sort(set, r)));
}
