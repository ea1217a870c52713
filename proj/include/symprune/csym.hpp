#pragma once

// Symmetry-exploiting solve orchestration. The initial cube over the cycle
// variables is bisected in every cycle dimension at one shared point, the
// resulting subboxes are grouped into rotation-equivalence classes, and the
// solver runs on one representative per class. Solutions found in a
// representative are expanded to its whole class by applying the cycle
// shift, so the solver touches only |SR_k| of the 2^k subboxes.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "symprune/codes.hpp"
#include "symprune/interval.hpp"
#include "symprune/problem.hpp"
#include "symprune/solver.hpp"
#include "symprune/symmetry.hpp"

namespace symprune {

struct NotACube : Error {
    using Error::Error;
};

struct OutOfRange : Error {
    using Error::Error;
};

struct CsymOptions {
    std::optional<double> bisection_point;  // fixed split value; midpoint when absent
    int parallel = 1;                       // concurrent representative solves
};

struct RepresentativeResult {
    ClassCode code;
    int period = 0;
    SolveStats stats;
    std::uint64_t ccs_solutions = 0;  // boxes found inside the representative itself
    bool budget_exceeded = false;
};

struct CsymReport {
    std::vector<RepresentativeResult> per_representative;
    SolveStats totals;                     // exact sum of per-representative stats
    std::uint64_t representatives_solved = 0;
    std::uint64_t subboxes_total = 0;      // 2^k simultaneous-bisection subboxes
    double representative_fraction = 0.0;  // representatives_solved / 2^k
    double ifdp = 0.0;                     // 2^k / |SR_k|
    double expansion_factor = 0.0;         // expanded boxes / representative boxes
};

struct CsymResult {
    std::vector<SolutionBox> boxes;
    CsymReport report;
    bool budget_exceeded = false;
};

// Split point for the shared cycle interval: strictly interior, midpoint by
// default, or a caller-supplied value.
inline double select_bisection_point(double x_l, double x_h,
                                     std::optional<double> fixed = std::nullopt) {
    assert(x_l < x_h);
    const double x_star = fixed.has_value() ? *fixed : x_l + 0.5 * (x_h - x_l);
    if (!(x_l < x_star && x_star < x_h)) {
        throw OutOfRange("bisection point must lie strictly between the cube bounds");
    }
    return x_star;
}

// Instantiates one subbox of the simultaneous bisection: cycle dimension j
// becomes the lower half [x_l, x*] where bit j is '0' and the upper half
// [x*, x_h] where it is '1'; non-cycle dimensions pass through.
inline Box generate_subbox(std::string_view bits, double x_l, double x_h, double x_star,
                           const Box& full_box, const std::vector<int>& cycle) {
    assert(bits.size() == cycle.size());
    std::vector<Interval> dims = full_box.dims();
    for (std::size_t j = 0; j < cycle.size(); ++j) {
        const std::size_t d = static_cast<std::size_t>(cycle[j]);
        if (!(dims[d] == Interval(x_l, x_h))) {
            throw NotACube("cycle dimensions must share one interval");
        }
        dims[d] = bits[j] == '0' ? Interval(x_l, x_star) : Interval(x_star, x_h);
    }
    return Box(std::move(dims));
}

inline Box generate_subbox(const ClassCode& code, double x_l, double x_h, double x_star,
                           const Box& full_box, const std::vector<int>& cycle) {
    assert(code.n == static_cast<int>(cycle.size()));
    return generate_subbox(code_to_binary(code), x_l, x_h, x_star, full_box, cycle);
}

// Solves one representative subbox and expands every solution across the
// class: shift 0 keeps the solver's boxes, shifts 1..P-1 append their
// symmetric images, each tagged with its provenance.
struct RepresentativeOutcome {
    std::vector<SolutionBox> boxes;
    SolveStats stats;
    std::uint64_t ccs_solutions = 0;
    bool budget_exceeded = false;
};

inline RepresentativeOutcome process_representative(const Problem& p, const Box& rep_box,
                                                    int rep_index, int period,
                                                    const SolverConfig& cfg) {
    const CycleSymmetry& sym = *p.symmetry;
    SolveResult solved = branch_and_prune(p, rep_box, cfg);

    RepresentativeOutcome out;
    out.stats = solved.stats;
    out.ccs_solutions = solved.boxes.size();
    out.budget_exceeded = solved.budget_exceeded;
    out.boxes.reserve(solved.boxes.size() * static_cast<std::size_t>(period));
    for (int shift = 0; shift < period; ++shift) {
        for (const SolutionBox& s : solved.boxes) {
            out.boxes.push_back(SolutionBox{apply_box(sym, s.box, shift), rep_index, shift});
        }
    }
    return out;
}

inline CsymResult csym1(const Problem& p, const SolverConfig& cfg, const CsymOptions& options = {}) {
    if (!p.symmetry.has_value() || p.symmetry->length() < 2) {
        throw NotACube("symmetry-exploiting solve needs a declared cycle of length >= 2");
    }
    const CycleSymmetry& sym = *p.symmetry;
    validate(sym);
    if (static_cast<std::size_t>(sym.n_vars) != p.initial_box.size()) {
        throw DimensionMismatch("symmetry variable count does not match problem");
    }

    const Interval shared = p.initial_box[static_cast<std::size_t>(sym.cycle.front())];
    for (int idx : sym.cycle) {
        if (!(p.initial_box[static_cast<std::size_t>(idx)] == shared)) {
            throw NotACube("cycle dimensions must share one interval");
        }
    }
    if (!(shared.lo() < shared.hi())) {
        throw NotACube("cycle interval must have positive width");
    }

    const int k = sym.length();
    const double x_star = select_bisection_point(shared.lo(), shared.hi(), options.bisection_point);
    const RepresentativeSet sr = representative_set(k);

    std::vector<RepresentativeOutcome> outcomes(sr.size());
    auto solve_one = [&](std::size_t i) {
        const ClassEntry& entry = sr.entries[i];
        const Box rep_box =
            generate_subbox(entry.code, shared.lo(), shared.hi(), x_star, p.initial_box, sym.cycle);
        outcomes[i] = process_representative(p, rep_box, static_cast<int>(i), entry.period, cfg);
    };

    const int workers = std::max(1, options.parallel);
    if (workers == 1 || sr.size() <= 1) {
        for (std::size_t i = 0; i < sr.size(); ++i) solve_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        const std::size_t thread_count =
            std::min(static_cast<std::size_t>(workers), sr.size());
        pool.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= sr.size()) return;
                    try {
                        solve_one(i);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    CsymResult result;
    result.report.per_representative.reserve(sr.size());
    std::uint64_t rep_solutions = 0;
    for (std::size_t i = 0; i < sr.size(); ++i) {
        const RepresentativeOutcome& oc = outcomes[i];
        result.report.per_representative.push_back(RepresentativeResult{
            sr.entries[i].code, sr.entries[i].period, oc.stats, oc.ccs_solutions,
            oc.budget_exceeded});
        result.report.totals += oc.stats;
        rep_solutions += oc.ccs_solutions;
        result.budget_exceeded = result.budget_exceeded || oc.budget_exceeded;
        result.boxes.insert(result.boxes.end(), oc.boxes.begin(), oc.boxes.end());
    }
    result.report.representatives_solved = sr.size();
    result.report.subboxes_total = static_cast<std::uint64_t>(pow2(k));
    result.report.representative_fraction =
        static_cast<double>(sr.size()) / static_cast<double>(result.report.subboxes_total);
    result.report.ifdp = ifdp(k);
    result.report.expansion_factor =
        rep_solutions == 0 ? 0.0
                           : static_cast<double>(result.boxes.size()) /
                                 static_cast<double>(rep_solutions);
    return result;
}

}  // namespace symprune
