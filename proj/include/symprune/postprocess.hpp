#pragma once

// Post-processing of candidate boxes: grouping boxes that enclose the same
// solution point into clusters, polishing cluster centers with Newton steps
// on the equality subsystem, and measuring residual constraint violation.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "symprune/problem.hpp"
#include "symprune/solver.hpp"

namespace symprune {

inline double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

struct Cluster {
    std::vector<double> center;        // mean of member box centers
    std::vector<std::size_t> members;  // indices into the input box list
};

// Greedy grouping by L-infinity distance to each cluster's first member;
// deterministic for a fixed box order. Adjacent candidate boxes produced at
// resolution epsilon merge whenever `radius` comfortably exceeds epsilon.
inline std::vector<Cluster> cluster_boxes(const std::vector<SolutionBox>& boxes, double radius) {
    std::vector<Cluster> clusters;
    std::vector<std::vector<double>> anchors;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const std::vector<double> c = boxes[i].box.center();
        bool placed = false;
        for (std::size_t k = 0; k < clusters.size() && !placed; ++k) {
            if (linf_distance(c, anchors[k]) <= radius) {
                Cluster& cl = clusters[k];
                for (std::size_t d = 0; d < c.size(); ++d) {
                    cl.center[d] = (cl.center[d] * static_cast<double>(cl.members.size()) + c[d]) /
                                   static_cast<double>(cl.members.size() + 1);
                }
                cl.members.push_back(i);
                placed = true;
            }
        }
        if (!placed) {
            clusters.push_back(Cluster{c, {i}});
            anchors.push_back(c);
        }
    }
    return clusters;
}

// Worst violation across all constraints: 0 when every f_i(x) lies inside
// its range, otherwise the largest distance to the nearest range endpoint.
inline double max_residual(const Problem& p, const std::vector<double>& x) {
    double worst = 0.0;
    for (const Constraint& c : p.constraints) {
        const double v = c.expr.eval(x);
        double gap = 0.0;
        if (v < c.range.lo()) {
            gap = c.range.lo() - v;
        } else if (v > c.range.hi()) {
            gap = v - c.range.hi();
        }
        worst = std::max(worst, gap);
    }
    return worst;
}

namespace detail {

// In-place Gaussian elimination with partial pivoting; false on a pivot too
// small to trust.
inline bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-14) return false;
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[r][k] -= factor * a[col][k];
            rhs[r] -= factor * rhs[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        double acc = rhs[col];
        for (std::size_t k = col + 1; k < n; ++k) acc -= a[col][k] * rhs[k];
        rhs[col] = acc / a[col][col];
    }
    return true;
}

}  // namespace detail

// Newton polish on the equality constraints (degenerate ranges). Requires a
// square system — as many equalities as variables — and returns the input
// unchanged otherwise or when the Jacobian is singular at the point.
inline std::vector<double> newton_refine(const Problem& p, std::vector<double> x, int steps = 1) {
    const std::size_t n = x.size();
    std::vector<const Constraint*> equalities;
    for (const Constraint& c : p.constraints) {
        if (c.range.is_degenerate()) equalities.push_back(&c);
    }
    if (equalities.size() != n) return x;

    for (int step = 0; step < steps; ++step) {
        std::vector<std::vector<double>> jac(n);
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            jac[i] = equalities[i]->expr.gradient(x);
            rhs[i] = -(equalities[i]->expr.eval(x) - equalities[i]->range.lo());
        }
        if (!detail::solve_linear(jac, rhs)) return x;
        for (std::size_t i = 0; i < n; ++i) x[i] += rhs[i];
    }
    return x;
}

}  // namespace symprune
