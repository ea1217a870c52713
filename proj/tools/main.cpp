// Command-line front-end: solve problem files with or without symmetry
// exploitation, generate and count rotation classes, and verify declared
// symmetries.
//
// Exit codes: 0 success, 1 input/parse error, 2 domain not usable as a cube
// (or invalid split point), 3 box budget exhausted (partial output written),
// 4 symmetry verification failed.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symprune/symprune.hpp"

namespace {

constexpr double kClusterRadius = 0.05;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw symprune::Error("cannot read file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_hexfloat(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
    std::string s(buf, res.ptr);
    // to_chars omits the 0x prefix; add it back so strtod and float.fromhex
    // can read the endpoints verbatim.
    const std::size_t pos = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (pos < s.size() && std::isxdigit(static_cast<unsigned char>(s[pos]))) {
        s.insert(pos, "0x");
    }
    return s;
}

std::string format_endpoint(double v, bool hex_floats) {
    return hex_floats ? format_hexfloat(v) : symprune::detail::format_double(v);
}

std::string timestamp_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::uint64_t sampling_seed() {
    if (const char* env = std::getenv("SYMPRUNE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw symprune::Error("SYMPRUNE_SEED must be an unsigned integer");
        }
    }
    return 0x5f3759df;
}

struct SolveFlags {
    std::string file;
    bool no_symmetry = false;
    double epsilon = 1e-6;
    std::uint64_t max_boxes = 10'000'000;
    std::string bisection = "midpoint";
    int parallel = 1;
    bool hex_floats = false;
    std::string output_path;
    std::string stats_path;
};

void write_boxes(std::ostream& os, const std::vector<symprune::SolutionBox>& boxes,
                 bool hex_floats) {
    for (const symprune::SolutionBox& s : boxes) {
        for (std::size_t d = 0; d < s.box.size(); ++d) {
            os << format_endpoint(s.box[d].lo(), hex_floats) << '\t'
               << format_endpoint(s.box[d].hi(), hex_floats) << '\t';
        }
        os << s.representative << '\t' << s.shift << '\n';
    }
}

void write_common_stats(std::ostream& os, const SolveFlags& flags, const symprune::Problem& p,
                        const symprune::SolveStats& totals, std::size_t output_boxes,
                        std::size_t clusters, bool budget_exceeded) {
    using symprune::detail::format_double;
    os << "epsilon " << format_double(flags.epsilon) << '\n';
    os << "max_boxes " << flags.max_boxes << '\n';
    os << "parallel " << flags.parallel << '\n';
    os << "timestamp " << timestamp_now() << '\n';
    os << "variables " << p.n_vars() << '\n';
    os << "constraints " << p.constraints.size() << '\n';
    os << "boxes_processed " << totals.boxes_processed << '\n';
    os << "boxes_rejected " << totals.boxes_rejected << '\n';
    os << "solution_boxes " << totals.solution_boxes << '\n';
    os << "output_boxes " << output_boxes << '\n';
    os << "solution_clusters " << clusters << '\n';
    os << "wall_time_seconds " << format_double(totals.wall_time_seconds) << '\n';
    os << "budget_exceeded " << (budget_exceeded ? 1 : 0) << '\n';
}

int run_solve(const SolveFlags& flags) {
    const symprune::Problem p = symprune::parse_problem(read_file(flags.file));

    symprune::SolverConfig cfg;
    cfg.epsilon = flags.epsilon;
    cfg.max_boxes = flags.max_boxes;

    const bool use_symmetry = !flags.no_symmetry && p.symmetry.has_value();

    std::vector<symprune::SolutionBox> boxes;
    std::ostringstream stats;
    bool budget_exceeded = false;

    if (use_symmetry) {
        symprune::CsymOptions options;
        options.parallel = flags.parallel;
        if (flags.bisection != "midpoint") {
            try {
                std::size_t consumed = 0;
                const double v = std::stod(flags.bisection, &consumed);
                if (consumed != flags.bisection.size()) throw std::invalid_argument(flags.bisection);
                options.bisection_point = v;
            } catch (const std::exception&) {
                throw symprune::Error("--bisection expects 'midpoint' or a number");
            }
        }
        symprune::CsymResult result = symprune::csym1(p, cfg, options);
        boxes = std::move(result.boxes);
        budget_exceeded = result.budget_exceeded;

        const auto clusters = symprune::cluster_boxes(boxes, kClusterRadius);
        const symprune::CsymReport& rep = result.report;
        stats << "mode csym\n";
        write_common_stats(stats, flags, p, rep.totals, boxes.size(), clusters.size(),
                           budget_exceeded);
        stats << "cycle_length " << p.symmetry->length() << '\n';
        stats << "representatives_solved " << rep.representatives_solved << '\n';
        stats << "subboxes_total " << rep.subboxes_total << '\n';
        stats << "representative_fraction "
              << symprune::detail::format_double(rep.representative_fraction) << '\n';
        stats << "one_over_ifdp "
              << symprune::detail::format_double(
                     static_cast<double>(symprune::count_classes(p.symmetry->length())) /
                     static_cast<double>(symprune::pow2(p.symmetry->length())))
              << '\n';
        stats << "ifdp " << symprune::detail::format_double(rep.ifdp) << '\n';
        stats << "expansion_factor " << symprune::detail::format_double(rep.expansion_factor)
              << '\n';
        for (const symprune::RepresentativeResult& rr : rep.per_representative) {
            stats << "representative " << symprune::code_to_binary(rr.code) << " period="
                  << rr.period << " processed=" << rr.stats.boxes_processed
                  << " rejected=" << rr.stats.boxes_rejected
                  << " solutions=" << rr.ccs_solutions << " budget=" << (rr.budget_exceeded ? 1 : 0)
                  << '\n';
        }
    } else {
        symprune::SolveResult result = symprune::branch_and_prune(p, p.initial_box, cfg);
        boxes = std::move(result.boxes);
        budget_exceeded = result.budget_exceeded;
        const auto clusters = symprune::cluster_boxes(boxes, kClusterRadius);
        stats << "mode plain\n";
        write_common_stats(stats, flags, p, result.stats, boxes.size(), clusters.size(),
                           budget_exceeded);
    }

    if (flags.output_path.empty()) {
        write_boxes(std::cout, boxes, flags.hex_floats);
    } else {
        std::ofstream out(flags.output_path, std::ios::binary);
        if (!out) throw symprune::Error("cannot write file: " + flags.output_path);
        write_boxes(out, boxes, flags.hex_floats);
    }
    if (flags.stats_path.empty()) {
        std::cerr << stats.str();
    } else {
        std::ofstream out(flags.stats_path, std::ios::binary);
        if (!out) throw symprune::Error("cannot write file: " + flags.stats_path);
        out << stats.str();
    }
    return budget_exceeded ? 3 : 0;
}

std::string runs_field(const symprune::ClassCode& code) {
    if (code.all_zeros) return "-";
    std::string s;
    for (std::size_t i = 0; i < code.runs.size(); ++i) {
        if (i > 0) s += ' ';
        s += std::to_string(code.runs[i]);
    }
    return s;
}

int run_classes_gen(int n, std::optional<int> m, bool full_period) {
    if (n < 1 || n > 30) {
        std::cerr << "error: generation supports 1 <= n <= 30\n";
        return 1;
    }
    if (m.has_value() && (*m < 0 || *m > n)) {
        std::cerr << "error: m must lie in [0, n]\n";
        return 1;
    }
    std::ostream& os = std::cout;
    auto emit = [&](const symprune::ClassCode& code, int period) {
        os << runs_field(code) << '\t' << symprune::code_to_binary(code) << '\t' << period << '\n';
    };
    if (full_period) {
        auto emit_for = [&](int ones) {
            if (ones == 0) {
                // Only the length-1 all-zeros string is aperiodic.
                if (n == 1) emit(symprune::make_all_zeros_code(1), 1);
                return;
            }
            symprune::generate_full_period(n, ones,
                                           [&](const symprune::ClassCode& c) { emit(c, n); });
        };
        if (m.has_value()) {
            emit_for(*m);
        } else {
            for (int ones = 0; ones <= n; ++ones) emit_for(ones);
        }
    } else {
        symprune::for_each_representative(n, [&](const symprune::ClassCode& code, int period) {
            if (m.has_value() && code.ones() != *m) return;
            emit(code, period);
        });
    }
    return 0;
}

int run_classes_count(int n) {
    if (n < 1 || n > 64) {
        std::cerr << "error: counting supports 1 <= n <= 64\n";
        return 1;
    }
    using symprune::to_string;
    std::ostream& os = std::cout;
    os << "n " << n << '\n';
    os << "subboxes " << to_string(symprune::pow2(n)) << '\n';
    os << "total_classes " << to_string(symprune::count_classes(n)) << '\n';
    os << "full_period " << to_string(symprune::count_full_period(n)) << '\n';
    os << "ifdp " << symprune::detail::format_double(symprune::ifdp(n)) << '\n';
    for (int p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        os << "period " << p << " count " << to_string(symprune::count_classes_with_period(n, p))
           << '\n';
    }
    for (int ones = 0; ones <= n; ++ones) {
        os << "ones " << ones << " count " << to_string(symprune::count_classes(n, ones)) << '\n';
    }
    return 0;
}

int run_verify(const std::string& file) {
    const symprune::Problem p = symprune::parse_problem(read_file(file));
    if (!p.symmetry.has_value()) {
        std::cerr << "error: cycle required\n";
        return 1;
    }
    if (!p.sigma.has_value()) {
        std::cerr << "error: sigma required\n";
        return 1;
    }
    const symprune::SymmetryCheck check =
        symprune::check_symmetry(p, *p.symmetry, *p.sigma, 100, sampling_seed());
    if (check.ok) {
        std::cout << "OK\n";
        return 0;
    }
    std::cout << "FAIL constraint " << (check.failing_constraint + 1) << '\n';
    if (!check.counterexample.empty()) {
        std::cout << "counterexample";
        for (double v : check.counterexample) {
            std::cout << ' ' << symprune::detail::format_double(v);
        }
        std::cout << '\n';
    }
    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interval branch-and-prune solver with cyclic-symmetry pruning"};
    app.require_subcommand(1);

    SolveFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "solve a problem file");
    solve->add_option("file", solve_flags.file, "problem file")->required();
    solve->add_flag("--no-symmetry", solve_flags.no_symmetry,
                    "ignore any declared cycle and solve the full box");
    solve->add_option("--epsilon", solve_flags.epsilon, "accepted box width")
        ->check(CLI::PositiveNumber);
    solve->add_option("--max-boxes", solve_flags.max_boxes, "processed-box budget")
        ->check(CLI::PositiveNumber);
    solve->add_option("--bisection", solve_flags.bisection,
                      "'midpoint' or a fixed split value for the cube");
    solve->add_option("--parallel", solve_flags.parallel,
                      "concurrent representative solves")
        ->check(CLI::PositiveNumber);
    solve->add_flag("--hex-floats", solve_flags.hex_floats, "bit-exact hexadecimal endpoints");
    solve->add_option("--output", solve_flags.output_path, "write boxes here instead of stdout");
    solve->add_option("--stats", solve_flags.stats_path, "write the stats report here");

    CLI::App* classes = app.add_subcommand("classes", "rotation-class tools");
    classes->require_subcommand(1);
    int gen_n = 0;
    int count_n = 0;
    std::optional<int> gen_m;
    bool gen_full_period = false;
    CLI::App* gen = classes->add_subcommand("gen", "list class representatives");
    gen->add_option("--n", gen_n, "code length")->required();
    gen->add_option("--m", gen_m, "restrict to codes with m ones");
    gen->add_flag("--full-period", gen_full_period, "only aperiodic codes");
    CLI::App* count = classes->add_subcommand("count", "class counting tables");
    count->add_option("--n", count_n, "code length")->required();

    std::string verify_file;
    CLI::App* verify = app.add_subcommand("verify", "check a declared symmetry");
    verify->add_option("file", verify_file, "problem file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(solve_flags);
        if (gen->parsed()) return run_classes_gen(gen_n, gen_m, gen_full_period);
        if (count->parsed()) return run_classes_count(count_n);
        if (verify->parsed()) return run_verify(verify_file);
    } catch (const symprune::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const symprune::NotACube& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const symprune::OutOfRange& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const symprune::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
