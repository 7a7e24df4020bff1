#ifndef PRESORT_CLI_HPP
#define PRESORT_CLI_HPP

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "presort/intervals.hpp"
#include "presort/io.hpp"
#include "presort/oracle.hpp"
#include "presort/preprocess.hpp"
#include "presort/reconstruct.hpp"

namespace presort::cli {

// exit codes: 0 ok, 1 verification counterexample, 2 malformed input,
// 3 contract violation

namespace detail {

inline InstanceKind parse_kind(const std::string& s) {
    if (s == "unit") return InstanceKind::Unit;
    if (s == "general") return InstanceKind::General;
    throw contract_error("unknown kind '" + s + "'");
}

inline Strategy parse_strategy(const std::string& s) {
    if (s == "uniform") return Strategy::Uniform;
    if (s == "left-endpoints") return Strategy::LeftEndpoints;
    if (s == "right-endpoints") return Strategy::RightEndpoints;
    if (s == "adversarial-reverse") return Strategy::AdversarialReverse;
    throw contract_error("unknown strategy '" + s + "'");
}

inline Algo parse_algo(const std::string& s) {
    if (s == "baseline") return Algo::Baseline;
    if (s == "stack-hash") return Algo::StackHash;
    if (s == "stack-tree") return Algo::StackTree;
    if (s == "smooth") return Algo::Smooth;
    if (s == "pq-sweep") return Algo::PqSweep;
    throw contract_error("unknown algorithm '" + s + "'");
}

inline const char* algo_name(Algo a) {
    switch (a) {
    case Algo::Baseline: return "baseline";
    case Algo::StackHash: return "stack-hash";
    case Algo::StackTree: return "stack-tree";
    case Algo::Smooth: return "smooth";
    case Algo::PqSweep: return "pq-sweep";
    }
    return "?";
}

struct GridSpec {
    std::vector<std::size_t> ns;
    std::vector<int> deltas;
};

inline GridSpec parse_grid(const std::string& text) {
    GridSpec grid;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        std::size_t end = semi == std::string::npos ? text.size() : semi;
        std::string part = text.substr(start, end - start);
        std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw contract_error("grid parts must look like key=v1,v2");
        std::string key = part.substr(0, eq);
        std::string list = part.substr(eq + 1);
        std::vector<double> values;
        std::size_t p = 0;
        while (p <= list.size()) {
            std::size_t comma = list.find(',', p);
            std::size_t e2 = comma == std::string::npos ? list.size() : comma;
            std::string item = list.substr(p, e2 - p);
            try {
                values.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw contract_error("bad grid value '" + item + "'");
            }
            if (comma == std::string::npos) break;
            p = comma + 1;
        }
        if (key == "n") {
            for (double v : values) grid.ns.push_back(static_cast<std::size_t>(v));
        } else if (key == "delta") {
            for (double v : values) grid.deltas.push_back(static_cast<int>(v));
        } else {
            throw contract_error("unknown grid key '" + key + "'");
        }
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (grid.ns.empty() || grid.deltas.empty())
        throw contract_error("grid needs both n and delta lists");
    return grid;
}

inline std::uint64_t cell_seed(std::uint64_t seed, std::size_t n, int delta) {
    return SplitMix64(seed).fork(n * 64 + static_cast<std::size_t>(delta)).next();
}

} // namespace detail

// One benchmark row per (grid cell, algorithm). Every column except
// wall_ns is reproducible bit for bit for a fixed seed.
struct BenchReport {
    struct Row {
        std::size_t n = 0;
        int delta = 0;
        Algo algo = Algo::Baseline;
        std::size_t seq_len = 0;
        Counters counters;
        std::int64_t wall_ns = 0;
    };
    std::vector<Row> rows;
};

inline BenchReport run_bench_grid(const std::string& grid_text,
                                  std::uint64_t seed) {
    detail::GridSpec grid = detail::parse_grid(grid_text);
    BenchReport report;
    const Algo algos[] = {Algo::Baseline, Algo::StackHash, Algo::StackTree,
                          Algo::Smooth, Algo::PqSweep};
    for (std::size_t n : grid.ns) {
        for (int delta : grid.deltas) {
            if (static_cast<std::size_t>(delta) > n) continue;
            std::uint64_t cs = detail::cell_seed(seed, n, delta);
            IntervalSet set = generate_instance(InstanceKind::Unit, n, delta, cs);
            SuperSequence seq = build_unit_supersequence(set);
            Realization r = sample_realization(set, Strategy::Uniform, cs + 1);
            for (Algo algo : algos) {
                auto t0 = std::chrono::steady_clock::now();
                SortedGroups g = run_algorithm(algo, &seq, &set, r);
                auto t1 = std::chrono::steady_clock::now();
                BenchReport::Row row;
                row.n = n;
                row.delta = delta;
                row.algo = algo;
                row.seq_len = (algo == Algo::Baseline || algo == Algo::PqSweep)
                                  ? set.size()
                                  : seq.length();
                row.counters = g.counters;
                row.wall_ns =
                    std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                        .count();
                report.rows.push_back(row);
            }
        }
    }
    return report;
}

inline void write_bench_csv(std::ostream& out, const BenchReport& report) {
    out << "n,delta,algorithm,seq_len,comparisons,dict_ops,stack_ops,"
           "retrievals,wall_ns\n";
    for (const auto& row : report.rows)
        out << row.n << ',' << row.delta << ',' << detail::algo_name(row.algo)
            << ',' << row.seq_len << ',' << row.counters.comparisons << ','
            << row.counters.dict_ops << ',' << row.counters.stack_ops() << ','
            << row.counters.retrievals << ',' << row.wall_ns << '\n';
}

inline int run(const std::vector<std::string>& args) {
    CLI::App app{"preprocess uncertain intervals into sorting supersequences "
                 "and reconstruct sorted orders and gaps"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a deterministic instance");
    std::string gen_kind = "unit";
    std::size_t gen_n = 10;
    int gen_ply = 2;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"unit", "general"}));
    gen->add_option("--n", gen_n)->required();
    gen->add_option("--ply", gen_ply)->required();
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out)->required();

    // ply
    auto* plycmd = app.add_subcommand("ply", "print the ply of an instance");
    std::string ply_in;
    plycmd->add_option("--in", ply_in)->required();

    // preprocess
    auto* prep = app.add_subcommand("preprocess", "build the auxiliary structure");
    std::string prep_in, prep_mode, prep_out, prep_seq_out, prep_variant = "safe";
    prep->add_option("--in", prep_in)->required();
    prep->add_option("--mode", prep_mode)
        ->required()
        ->check(CLI::IsMember({"unit", "general", "marked", "gap-min", "gap-max"}));
    prep->add_option("--gap-variant", prep_variant)
        ->check(CLI::IsMember({"safe", "paper-literal"}));
    prep->add_option("--out", prep_out)->required();
    prep->add_option("--seq-out", prep_seq_out,
                     "kept-set supersequence path for gap modes "
                     "(default: <out>.seq.csv)");

    // realize
    auto* real = app.add_subcommand("realize", "sample one point per interval");
    std::string real_in, real_strategy = "uniform", real_out;
    std::uint64_t real_seed = 0;
    real->add_option("--in", real_in)->required();
    real->add_option("--strategy", real_strategy)
        ->check(CLI::IsMember({"uniform", "left-endpoints", "right-endpoints",
                               "adversarial-reverse"}));
    real->add_option("--seed", real_seed);
    real->add_option("--out", real_out)->required();

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "recover the sorted order");
    std::string rec_seq, rec_real, rec_algo, rec_out, rec_in;
    std::uint64_t rec_seed = kDefaultHashSeed;
    rec->add_option("--seq", rec_seq, "supersequence CSV (stack/smooth algos)");
    rec->add_option("--real", rec_real)->required();
    rec->add_option("--algo", rec_algo)
        ->required()
        ->check(CLI::IsMember(
            {"stack-hash", "stack-tree", "smooth", "pq-sweep", "baseline"}));
    rec->add_option("--in", rec_in, "interval CSV (pq-sweep only)");
    rec->add_option("--seed", rec_seed, "hash seed for stack-hash");
    rec->add_option("--out", rec_out)->required();

    // gaps
    auto* gaps = app.add_subcommand("gaps", "reconstruct the smallest/largest gap");
    std::string gaps_prep, gaps_seq, gaps_real, gaps_which;
    gaps->add_option("--prep", gaps_prep)->required();
    gaps->add_option("--seq", gaps_seq)->required();
    gaps->add_option("--real", gaps_real)->required();
    gaps->add_option("--which", gaps_which)
        ->required()
        ->check(CLI::IsMember({"min", "max"}));

    // verify
    auto* verify = app.add_subcommand("verify", "run the brute-force oracles");
    std::string ver_in, ver_seq, ver_prep;
    int ver_trials = 200;
    std::uint64_t ver_seed = 0;
    verify->add_option("--in", ver_in)->required();
    verify->add_option("--seq", ver_seq);
    verify->add_option("--prep", ver_prep);
    verify->add_option("--trials", ver_trials);
    verify->add_option("--seed", ver_seed);

    // bench
    auto* bench = app.add_subcommand("bench", "instrumented benchmark grid");
    std::string bench_grid = "n=1e3,1e4,1e5;delta=2,4,8";
    std::uint64_t bench_seed = 0;
    std::string bench_out;
    bench->add_option("--grid", bench_grid);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--out", bench_out)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            IntervalSet set = generate_instance(detail::parse_kind(gen_kind),
                                                gen_n, gen_ply, gen_seed);
            std::ofstream out = io::open_output(gen_out);
            io::write_intervals(out, set);
            return 0;
        }
        if (plycmd->parsed()) {
            IntervalSet set = io::read_file<IntervalSet>(
                ply_in, [](std::istream& in) { return io::read_intervals(in); });
            std::cout << ply(set) << '\n';
            return 0;
        }
        if (prep->parsed()) {
            IntervalSet set = io::read_file<IntervalSet>(
                prep_in, [](std::istream& in) { return io::read_intervals(in); });
            if (prep_mode == "unit" || prep_mode == "general" ||
                prep_mode == "marked") {
                SuperSequence seq =
                    prep_mode == "unit" ? build_unit_supersequence(set)
                    : prep_mode == "general" ? build_general_supersequence(set)
                                             : build_marked_supersequence(set);
                std::ofstream out = io::open_output(prep_out);
                io::write_supersequence(out, seq);
                return 0;
            }
            GapPrep gp =
                prep_mode == "gap-min"
                    ? omit_for_smallest_gap(set)
                    : omit_for_largest_gap(set, prep_variant == "safe"
                                                    ? GapVariant::Safe
                                                    : GapVariant::PaperLiteral);
            {
                std::ofstream out = io::open_output(prep_out);
                out << io::gap_prep_to_json(gp).dump(2) << '\n';
            }
            std::string seq_path =
                prep_seq_out.empty() ? prep_out + ".seq.csv" : prep_seq_out;
            SuperSequence kept_seq = build_kept_supersequence(set, gp);
            std::ofstream sout = io::open_output(seq_path);
            io::write_supersequence(sout, kept_seq);
            return 0;
        }
        if (real->parsed()) {
            IntervalSet set = io::read_file<IntervalSet>(
                real_in, [](std::istream& in) { return io::read_intervals(in); });
            Realization r = sample_realization(
                set, detail::parse_strategy(real_strategy), real_seed);
            std::ofstream out = io::open_output(real_out);
            io::write_realization(out, r);
            return 0;
        }
        if (rec->parsed()) {
            Realization r = io::read_file<Realization>(
                rec_real, [](std::istream& in) { return io::read_realization(in); });
            Algo algo = detail::parse_algo(rec_algo);
            std::optional<SuperSequence> seq;
            std::optional<IntervalSet> set;
            if (!rec_seq.empty())
                seq = io::read_file<SuperSequence>(rec_seq, [](std::istream& in) {
                    return io::read_supersequence(in);
                });
            if (!rec_in.empty())
                set = io::read_file<IntervalSet>(rec_in, [](std::istream& in) {
                    return io::read_intervals(in);
                });
            SortedGroups g =
                run_algorithm(algo, seq ? &*seq : nullptr,
                              set ? &*set : nullptr, r, rec_seed);
            std::ofstream out = io::open_output(rec_out);
            io::write_groups(out, g);
            std::cerr << io::counters_to_json(g.counters).dump() << '\n';
            return 0;
        }
        if (gaps->parsed()) {
            GapPrep gp = io::gap_prep_from_json(io::read_json_file(gaps_prep));
            if ((gaps_which == "min") != (gp.which == GapSide::Min))
                throw contract_error("--which does not match the preprocessing");
            SuperSequence seq = io::read_file<SuperSequence>(
                gaps_seq,
                [](std::istream& in) { return io::read_supersequence(in); });
            Realization r = io::read_file<Realization>(
                gaps_real,
                [](std::istream& in) { return io::read_realization(in); });
            GapResult res = reconstruct_gap(gp, seq, r);
            std::cout << io::gap_result_to_json(res).dump() << '\n';
            return 0;
        }
        if (verify->parsed()) {
            IntervalSet set = io::read_file<IntervalSet>(
                ver_in, [](std::istream& in) { return io::read_intervals(in); });
            std::vector<oracle::Verdict> verdicts;
            if (!ver_seq.empty()) {
                SuperSequence seq = io::read_file<SuperSequence>(
                    ver_seq,
                    [](std::istream& in) { return io::read_supersequence(in); });
                verdicts.push_back(oracle::check_sorting_supersequence(
                    seq, set, ver_trials, ver_seed));
                if (seq.alpha && seq.beta)
                    verdicts.push_back(
                        oracle::check_smooth(seq, set, *seq.alpha, *seq.beta));
            }
            if (!ver_prep.empty()) {
                GapPrep gp = io::gap_prep_from_json(io::read_json_file(ver_prep));
                verdicts.push_back(
                    oracle::check_gap_omission(set, gp, ver_trials, ver_seed));
            }
            if (verdicts.empty()) {
                oracle::Verdict v;
                v.check = "instance";
                v.ok = ply(set) >= 1;
                verdicts.push_back(v);
            }
            bool all_ok = true;
            for (const auto& v : verdicts) {
                std::cout << io::verdict_to_json(v).dump() << '\n';
                all_ok = all_ok && v.ok;
            }
            return all_ok ? 0 : 1;
        }
        if (bench->parsed()) {
            BenchReport report = run_bench_grid(bench_grid, bench_seed);
            std::ofstream out = io::open_output(bench_out);
            write_bench_csv(out, report);
            return 0;
        }
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace presort::cli

#endif
