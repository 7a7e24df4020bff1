#ifndef PRESORT_TEST_HELPERS_HPP
#define PRESORT_TEST_HELPERS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "presort/intervals.hpp"
#include "presort/preprocess.hpp"

namespace presort_test {

inline presort::IntervalSet make_set(
    std::vector<std::pair<double, double>> spans) {
    std::vector<presort::Interval> ivs;
    std::int64_t id = 1;
    for (auto [l, r] : spans) ivs.emplace_back(id++, l, r);
    return presort::IntervalSet(std::move(ivs));
}

inline std::vector<std::int64_t> occurrence_ids(const presort::SuperSequence& seq) {
    std::vector<std::int64_t> ids;
    for (const auto& occ : seq.occurrences) ids.push_back(occ.id);
    return ids;
}

} // namespace presort_test

#endif
