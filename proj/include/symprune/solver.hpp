#pragma once

// Branch-and-prune over boxes. Each popped box is contracted with
// forward-backward hull-consistency passes over every constraint; an
// emptied box is rejected, a box with all widths at or below epsilon is
// accepted as a candidate solution, and anything else is bisected along its
// widest dimension. The traversal is depth-first and fully deterministic.
//
// Accepted boxes carry candidate semantics: not refuted at the requested
// resolution, with no existence certificate.

#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "symprune/expression.hpp"
#include "symprune/interval.hpp"
#include "symprune/problem.hpp"

namespace symprune {

struct SolverConfig {
    double epsilon = 1e-6;          // max accepted box width
    std::uint64_t max_boxes = 10'000'000;  // processed-box safety cap
    int contraction_rounds = 10;    // hull-consistency sweeps per box
    double equality_widening = 0.0; // delta applied to degenerate ranges
};

struct SolveStats {
    std::uint64_t boxes_processed = 0;
    std::uint64_t boxes_rejected = 0;
    std::uint64_t solution_boxes = 0;
    double wall_time_seconds = 0.0;

    SolveStats& operator+=(const SolveStats& other) {
        boxes_processed += other.boxes_processed;
        boxes_rejected += other.boxes_rejected;
        solution_boxes += other.solution_boxes;
        wall_time_seconds += other.wall_time_seconds;
        return *this;
    }
};

// One candidate box with its provenance: which class representative it was
// found in (-1 for a plain full-domain run) and how many cycle shifts were
// applied to produce it.
struct SolutionBox {
    Box box;
    int representative = -1;
    int shift = 0;
};

struct SolveResult {
    std::vector<SolutionBox> boxes;
    SolveStats stats;
    bool budget_exceeded = false;
};

namespace detail {

// Backward projection step: narrow `down[child]` to `required`; false means
// the constraint cannot hold anywhere in the current box.
inline bool tighten(std::vector<Interval>& down, int child, const Interval& required) {
    const Interval next = intersect(down[static_cast<std::size_t>(child)], required);
    if (next.is_empty()) return false;
    down[static_cast<std::size_t>(child)] = next;
    return true;
}

// Preimage of `target` under x^k for even k intersected with `current`:
// both sign branches are checked and hulled, so a box on one side of zero
// keeps a one-sided bound.
inline Interval even_power_preimage(const Interval& target, int k, const Interval& current) {
    const Interval pos = nonneg_root(target, k);
    if (pos.is_empty()) return Interval::empty();
    const Interval neg(-pos.hi(), -pos.lo());
    return hull(intersect(current, pos), intersect(current, neg));
}

// One forward-backward sweep of a single constraint. Returns false when the
// box is proven infeasible; otherwise tightens box dimensions in place.
inline bool hc4_revise(const Constraint& c, Box& b, std::vector<Interval>& values,
                       std::vector<Interval>& down) {
    const std::vector<ExprNode>& nodes = c.expr.nodes();
    c.expr.forward(b, values, /*hull_division=*/true);

    down = values;
    {
        const Interval rooted = intersect(values.back(), c.range);
        if (rooted.is_empty()) return false;
        down.back() = rooted;
    }

    std::vector<Interval> dims = b.dims();
    for (std::size_t ri = nodes.size(); ri-- > 0;) {
        const ExprNode& n = nodes[ri];
        const Interval& req = down[ri];
        switch (n.op) {
            case Op::constant:
                break;  // emptiness already caught when req was narrowed
            case Op::variable: {
                const Interval next = intersect(dims[static_cast<std::size_t>(n.index)], req);
                if (next.is_empty()) return false;
                dims[static_cast<std::size_t>(n.index)] = next;
                break;
            }
            case Op::add:
                if (!tighten(down, n.lhs, req - values[static_cast<std::size_t>(n.rhs)])) return false;
                if (!tighten(down, n.rhs, req - values[static_cast<std::size_t>(n.lhs)])) return false;
                break;
            case Op::sub:
                if (!tighten(down, n.lhs, req + values[static_cast<std::size_t>(n.rhs)])) return false;
                if (!tighten(down, n.rhs, values[static_cast<std::size_t>(n.lhs)] - req)) return false;
                break;
            case Op::mul:
                // Dividing by a zero-spanning factor yields no finite bound;
                // skipping the projection is sound, just less tight.
                if (!values[static_cast<std::size_t>(n.rhs)].contains_zero()) {
                    if (!tighten(down, n.lhs, req / values[static_cast<std::size_t>(n.rhs)])) return false;
                }
                if (!values[static_cast<std::size_t>(n.lhs)].contains_zero()) {
                    if (!tighten(down, n.rhs, req / values[static_cast<std::size_t>(n.lhs)])) return false;
                }
                break;
            case Op::div:
                if (!tighten(down, n.lhs, req * values[static_cast<std::size_t>(n.rhs)])) return false;
                if (!req.contains_zero()) {
                    if (!tighten(down, n.rhs, values[static_cast<std::size_t>(n.lhs)] / req)) return false;
                }
                break;
            case Op::neg:
                if (!tighten(down, n.lhs, -req)) return false;
                break;
            case Op::pow:
                if (n.exponent % 2 == 0) {
                    const Interval pre = even_power_preimage(
                        req, n.exponent, down[static_cast<std::size_t>(n.lhs)]);
                    if (pre.is_empty()) return false;
                    down[static_cast<std::size_t>(n.lhs)] = pre;
                } else {
                    if (!tighten(down, n.lhs, odd_root(req, n.exponent))) return false;
                }
                break;
        }
    }
    b = Box(std::move(dims));
    return true;
}

}  // namespace detail

// Hull-consistency contraction: repeated forward-backward sweeps over all
// constraints, stopping after `rounds` sweeps or as soon as a sweep fails to
// shrink any dimension by more than 1% of its width. Empty result means the
// box is proven to contain no solution.
inline std::optional<Box> contract(Box b, const std::vector<Constraint>& constraints, int rounds) {
    std::vector<Interval> values;
    std::vector<Interval> down;
    for (int round = 0; round < rounds; ++round) {
        const Box before = b;
        for (const Constraint& c : constraints) {
            if (!detail::hc4_revise(c, b, values, down)) return std::nullopt;
        }
        bool meaningful = false;
        for (std::size_t d = 0; d < b.size() && !meaningful; ++d) {
            const double shrink = before[d].width() - b[d].width();
            meaningful = shrink > 0.01 * before[d].width();
        }
        if (!meaningful) break;
    }
    return b;
}

// Spec'd natural-extension entry point (throws on zero-spanning division).
inline Interval eval_expr(const Expression& e, const Box& b) { return e.eval(b); }

inline SolveResult branch_and_prune(const Problem& p, const Box& b0, const SolverConfig& cfg) {
    assert(cfg.epsilon > 0 && cfg.max_boxes > 0);
    assert(b0.size() == static_cast<std::size_t>(p.n_vars()));
    const auto t0 = std::chrono::steady_clock::now();

    const std::vector<Constraint>* constraints = &p.constraints;
    std::vector<Constraint> widened;
    if (cfg.equality_widening > 0) {
        widened = p.constraints;
        for (Constraint& c : widened) {
            if (c.range.is_degenerate()) {
                c.range = Interval(detail::sub_round(c.range.lo(), cfg.equality_widening, false),
                                   detail::add_round(c.range.hi(), cfg.equality_widening, true));
            }
        }
        constraints = &widened;
    }

    SolveResult result;
    std::vector<Box> stack;
    stack.push_back(b0);
    while (!stack.empty()) {
        if (result.stats.boxes_processed >= cfg.max_boxes) {
            result.budget_exceeded = true;
            break;
        }
        Box b = std::move(stack.back());
        stack.pop_back();
        result.stats.boxes_processed += 1;

        std::optional<Box> contracted = contract(std::move(b), *constraints, cfg.contraction_rounds);
        if (!contracted.has_value()) {
            result.stats.boxes_rejected += 1;
            continue;
        }
        b = std::move(*contracted);

        const std::size_t dim = b.widest_dim();
        const double mid = b[dim].mid();
        if (b.max_width() <= cfg.epsilon || !(b[dim].lo() < mid && mid < b[dim].hi())) {
            // At resolution, or no representable interior split point left.
            result.stats.solution_boxes += 1;
            result.boxes.push_back(SolutionBox{std::move(b), -1, 0});
            continue;
        }
        auto [left, right] = bisect(b, dim);
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));  // popped first: leftmost-first order
    }

    result.stats.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace symprune
