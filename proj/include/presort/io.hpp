#ifndef PRESORT_IO_HPP
#define PRESORT_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "presort/intervals.hpp"
#include "presort/preprocess.hpp"
#include "presort/reconstruct.hpp"
#include "presort/oracle.hpp"

namespace presort {

// Malformed input files. The CLI maps these to exit code 2.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error(msg + " (line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

namespace io {

// shortest round-trip representation
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

struct Field {
    std::string text;
    std::size_t line;
    std::size_t column; // 1-based offset of the field start
};

inline std::vector<Field> split_line(const std::string& line, std::size_t lineno) {
    std::vector<Field> row;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::size_t end = comma == std::string::npos ? line.size() : comma;
        row.push_back({line.substr(start, end - start), lineno, start + 1});
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return row;
}

inline std::vector<std::vector<Field>> read_csv(std::istream& in) {
    std::vector<std::vector<Field>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_line(line, lineno));
    }
    return rows;
}

inline double parse_double(const Field& f) {
    double v = 0.0;
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw parse_error("expected a number, got '" + f.text + "'", f.line,
                          f.column);
    if (!std::isfinite(v))
        throw parse_error("non-finite number", f.line, f.column);
    return v;
}

inline std::int64_t parse_int(const Field& f) {
    std::int64_t v = 0;
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw parse_error("expected an integer, got '" + f.text + "'", f.line,
                          f.column);
    return v;
}

inline void expect_header(const std::vector<Field>& row,
                          const std::vector<std::string>& names) {
    bool ok = row.size() == names.size();
    for (std::size_t i = 0; ok && i < names.size(); ++i)
        ok = row[i].text == names[i];
    if (!ok) {
        std::string want;
        for (std::size_t i = 0; i < names.size(); ++i)
            want += (i ? "," : "") + names[i];
        throw parse_error("expected header '" + want + "'",
                          row.empty() ? 1 : row[0].line, 1);
    }
}

inline void expect_columns(const std::vector<Field>& row, std::size_t count) {
    if (row.size() != count)
        throw parse_error("expected " + std::to_string(count) + " columns",
                          row[0].line, 1);
}

} // namespace detail

// ---- interval CSV: id,left,right ----

inline void write_intervals(std::ostream& out, const IntervalSet& set) {
    out << "id,left,right\n";
    for (const auto& iv : set)
        out << iv.id << ',' << format_double(iv.left) << ','
            << format_double(iv.right) << '\n';
}

inline IntervalSet read_intervals(std::istream& in) {
    auto rows = detail::read_csv(in);
    if (rows.empty()) throw parse_error("empty interval file", 1, 1);
    detail::expect_header(rows[0], {"id", "left", "right"});
    std::vector<Interval> intervals;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        detail::expect_columns(rows[i], 3);
        intervals.emplace_back(detail::parse_int(rows[i][0]),
                               detail::parse_double(rows[i][1]),
                               detail::parse_double(rows[i][2]));
    }
    return IntervalSet(std::move(intervals));
}

// ---- realization CSV: id,value ----

inline void write_realization(std::ostream& out, const Realization& r) {
    out << "id,value\n";
    for (const auto& [id, v] : r.entries())
        out << id << ',' << format_double(v) << '\n';
}

inline Realization read_realization(std::istream& in) {
    auto rows = detail::read_csv(in);
    if (rows.empty()) throw parse_error("empty realization file", 1, 1);
    detail::expect_header(rows[0], {"id", "value"});
    std::vector<std::pair<std::int64_t, double>> values;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        detail::expect_columns(rows[i], 2);
        values.emplace_back(detail::parse_int(rows[i][0]),
                            detail::parse_double(rows[i][1]));
    }
    return Realization(std::move(values));
}

// ---- supersequence CSV ----
// metadata lines '# key=value' (provenance, alpha, beta, n, delta), then
// position,interval_id,marked,next_marked. next_marked is derived data and
// is recomputed on load.

inline void write_supersequence(std::ostream& out, const SuperSequence& seq) {
    out << "# provenance=" << to_string(seq.provenance) << '\n';
    if (seq.alpha) out << "# alpha=" << format_double(*seq.alpha) << '\n';
    if (seq.beta) out << "# beta=" << format_double(*seq.beta) << '\n';
    out << "# n=" << seq.source_n << '\n';
    out << "# delta=" << seq.source_delta << '\n';
    out << "position,interval_id,marked,next_marked\n";
    for (std::size_t i = 0; i < seq.occurrences.size(); ++i)
        out << i << ',' << seq.occurrences[i].id << ','
            << (seq.occurrences[i].marked ? 1 : 0) << ',' << seq.next_marked[i]
            << '\n';
}

inline SuperSequence read_supersequence(std::istream& in) {
    SuperSequence seq;
    std::string line;
    std::size_t lineno = 0;
    bool have_provenance = false;
    std::vector<std::vector<detail::Field>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# ", 0) != 0) {
            if (!line.empty()) rows.push_back(detail::split_line(line, lineno));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("malformed metadata line", lineno, 1);
        std::string key = line.substr(2, eq - 2);
        std::string value = line.substr(eq + 1);
        detail::Field f{value, lineno, eq + 2};
        if (key == "provenance") {
            if (value == "unit")
                seq.provenance = Provenance::Unit;
            else if (value == "general")
                seq.provenance = Provenance::General;
            else if (value == "marked")
                seq.provenance = Provenance::Marked;
            else
                throw parse_error("unknown provenance '" + value + "'", lineno,
                                  eq + 2);
            have_provenance = true;
        } else if (key == "alpha") {
            seq.alpha = detail::parse_double(f);
        } else if (key == "beta") {
            seq.beta = detail::parse_double(f);
        } else if (key == "n") {
            seq.source_n = static_cast<std::size_t>(detail::parse_int(f));
        } else if (key == "delta") {
            seq.source_delta = static_cast<int>(detail::parse_int(f));
        } else {
            throw parse_error("unknown metadata key '" + key + "'", lineno, 3);
        }
    }
    if (!have_provenance) throw parse_error("missing provenance metadata", 1, 1);
    if (seq.alpha.has_value() != seq.beta.has_value())
        throw parse_error("alpha and beta must appear together", 1, 1);

    if (rows.empty()) throw parse_error("missing occurrence header", 1, 1);
    detail::expect_header(rows[0],
                          {"position", "interval_id", "marked", "next_marked"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        detail::expect_columns(rows[i], 4);
        std::int64_t pos = detail::parse_int(rows[i][0]);
        if (pos != static_cast<std::int64_t>(i - 1))
            throw parse_error("positions must be consecutive from 0",
                              rows[i][0].line, rows[i][0].column);
        std::int64_t marked = detail::parse_int(rows[i][2]);
        if (marked != 0 && marked != 1)
            throw parse_error("marked must be 0 or 1", rows[i][2].line,
                              rows[i][2].column);
        detail::parse_int(rows[i][3]); // validated as an integer, then derived
        seq.occurrences.push_back(
            {detail::parse_int(rows[i][1]), marked == 1});
    }
    seq.derive_marks();
    return seq;
}

// ---- sorted groups CSV: rank,value,ids (ids ';'-joined) ----

inline void write_groups(std::ostream& out, const SortedGroups& g) {
    out << "rank,value,ids\n";
    for (std::size_t i = 0; i < g.groups.size(); ++i) {
        out << (i + 1) << ',' << format_double(g.groups[i].value) << ',';
        for (std::size_t j = 0; j < g.groups[i].ids.size(); ++j)
            out << (j ? ";" : "") << g.groups[i].ids[j];
        out << '\n';
    }
}

inline SortedGroups read_groups(std::istream& in) {
    auto rows = detail::read_csv(in);
    if (rows.empty()) throw parse_error("empty groups file", 1, 1);
    detail::expect_header(rows[0], {"rank", "value", "ids"});
    SortedGroups g;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        detail::expect_columns(rows[i], 3);
        SortedGroups::Group grp;
        grp.value = detail::parse_double(rows[i][1]);
        const detail::Field& f = rows[i][2];
        std::size_t start = 0;
        while (start <= f.text.size()) {
            std::size_t semi = f.text.find(';', start);
            std::size_t end = semi == std::string::npos ? f.text.size() : semi;
            detail::Field part{f.text.substr(start, end - start), f.line,
                               f.column + start};
            grp.ids.push_back(detail::parse_int(part));
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        g.groups.push_back(std::move(grp));
    }
    return g;
}

// ---- GapPrep JSON ----

inline nlohmann::json gap_prep_to_json(const GapPrep& prep) {
    nlohmann::json j;
    j["which"] = prep.which == GapSide::Min ? "min" : "max";
    j["variant"] =
        prep.variant == GapVariant::Safe ? "safe" : "paper-literal";
    j["bound"] = prep.bound;
    j["kept"] = prep.kept;
    j["omitted"] = prep.omitted;
    if (prep.witness_pair)
        j["witness"] = {{"pair", {prep.witness_pair->first,
                                  prep.witness_pair->second}}};
    else if (prep.witness_gap)
        j["witness"] = {{"gap", {prep.witness_gap->first,
                                 prep.witness_gap->second}}};
    else
        j["witness"] = nullptr;
    return j;
}

inline GapPrep gap_prep_from_json(const nlohmann::json& j) {
    GapPrep prep;
    std::string which = j.at("which").get<std::string>();
    if (which == "min")
        prep.which = GapSide::Min;
    else if (which == "max")
        prep.which = GapSide::Max;
    else
        throw parse_error("unknown gap side '" + which + "'", 1, 1);
    if (j.contains("variant"))
        prep.variant = j["variant"] == "paper-literal" ? GapVariant::PaperLiteral
                                                       : GapVariant::Safe;
    prep.bound = j.at("bound").get<double>();
    prep.kept = j.at("kept").get<std::vector<std::int64_t>>();
    prep.omitted = j.at("omitted").get<std::vector<std::int64_t>>();
    if (j.contains("witness") && !j["witness"].is_null()) {
        const auto& w = j["witness"];
        if (w.contains("pair"))
            prep.witness_pair = {w["pair"][0].get<std::int64_t>(),
                                 w["pair"][1].get<std::int64_t>()};
        if (w.contains("gap"))
            prep.witness_gap = {w["gap"][0].get<double>(),
                                w["gap"][1].get<double>()};
    }
    return prep;
}

// ---- result / verdict JSON ----

inline nlohmann::json counters_to_json(const Counters& c) {
    return {{"comparisons", c.comparisons},
            {"dict_ops", c.dict_ops},
            {"stack_ops", c.stack_ops()},
            {"retrievals", c.retrievals}};
}

inline nlohmann::json gap_result_to_json(const GapResult& res) {
    return {{"which", res.which == GapSide::Min ? "min" : "max"},
            {"gap", res.gap},
            {"witness", {res.witness.first, res.witness.second}},
            {"retrievals", res.counters.retrievals},
            {"comparisons", res.counters.comparisons}};
}

inline nlohmann::json verdict_to_json(const oracle::Verdict& v) {
    nlohmann::json j;
    j["check"] = v.check;
    j["ok"] = v.ok;
    if (v.ok) {
        j["counterexample"] = nullptr;
    } else {
        nlohmann::json ce;
        ce["detail"] = v.detail;
        if (v.counterexample) {
            nlohmann::json values = nlohmann::json::object();
            for (const auto& [id, value] : v.counterexample->entries())
                values[std::to_string(id)] = value;
            ce["realization"] = values;
        }
        j["counterexample"] = ce;
    }
    return j;
}

// ---- file helpers ----

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'", 0, 0);
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open '" + path + "' for writing", 0, 0);
    return out;
}

template <typename T, typename Reader>
T read_file(const std::string& path, Reader reader) {
    std::ifstream in = open_input(path);
    return reader(in);
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in = open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what(), 0, 0);
    }
}

} // namespace io
} // namespace presort

#endif
