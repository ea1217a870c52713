#pragma once

// Point and box images under a single-cycle variable permutation. The cycle
// is stored as an ordered list of variable indices; variables outside the
// cycle are fixed points. Applying the map shifts values one position along
// the cycle, so k applications restore the original point.

#include <cassert>
#include <vector>

#include "symprune/interval.hpp"

namespace symprune {

struct DimensionMismatch : Error {
    using Error::Error;
};

// ψ in cycle notation: one application sends the value at cycle[(j+1) mod k]
// to position cycle[j]. Indices are 0-based and must be distinct.
struct CycleSymmetry {
    int n_vars = 0;
    std::vector<int> cycle;

    int length() const { return static_cast<int>(cycle.size()); }

    friend bool operator==(const CycleSymmetry&, const CycleSymmetry&) = default;
};

// Throws DimensionMismatch on out-of-range or repeated cycle indices.
inline void validate(const CycleSymmetry& sym) {
    if (sym.n_vars < 1) throw DimensionMismatch("symmetry must cover at least one variable");
    std::vector<bool> used(static_cast<std::size_t>(sym.n_vars), false);
    for (int idx : sym.cycle) {
        if (idx < 0 || idx >= sym.n_vars) {
            throw DimensionMismatch("cycle index out of range");
        }
        if (used[static_cast<std::size_t>(idx)]) {
            throw DimensionMismatch("cycle index repeated");
        }
        used[static_cast<std::size_t>(idx)] = true;
    }
}

namespace detail {

// Reduces an arbitrary shift count to [0, k).
inline int normalize_shift(int times, int k) {
    if (k <= 0) return 0;
    const int t = times % k;
    return t < 0 ? t + k : t;
}

}  // namespace detail

inline std::vector<double> apply_point(const CycleSymmetry& sym, const std::vector<double>& x,
                                       int times) {
    if (static_cast<int>(x.size()) != sym.n_vars) {
        throw DimensionMismatch("point dimension does not match symmetry");
    }
    const int k = sym.length();
    std::vector<double> y = x;
    const int t = detail::normalize_shift(times, k);
    if (t == 0) return y;
    for (int j = 0; j < k; ++j) {
        y[static_cast<std::size_t>(sym.cycle[static_cast<std::size_t>(j)])] =
            x[static_cast<std::size_t>(sym.cycle[static_cast<std::size_t>((j + t) % k)])];
    }
    return y;
}

inline Box apply_box(const CycleSymmetry& sym, const Box& b, int times) {
    if (static_cast<int>(b.size()) != sym.n_vars) {
        throw DimensionMismatch("box dimension does not match symmetry");
    }
    const int k = sym.length();
    const int t = detail::normalize_shift(times, k);
    if (t == 0) return b;
    std::vector<Interval> dims = b.dims();
    for (int j = 0; j < k; ++j) {
        dims[static_cast<std::size_t>(sym.cycle[static_cast<std::size_t>(j)])] =
            b[static_cast<std::size_t>(sym.cycle[static_cast<std::size_t>((j + t) % k)])];
    }
    return Box(std::move(dims));
}

// Smallest i >= 1 with S^i(B) = B. The fixed shifts form a subgroup of Z_k,
// so the period is a divisor of the cycle length.
inline int box_period(const CycleSymmetry& sym, const Box& b) {
    const int k = sym.length();
    if (k == 0) return 1;
    for (int d = 1; d <= k; ++d) {
        if (k % d != 0) continue;
        if (apply_box(sym, b, d) == b) return d;
    }
    return k;  // unreachable: d = k always matches
}

// The distinct images {S^i(B), i = 0..P(B)-1}; the first element is b.
inline std::vector<Box> box_class(const CycleSymmetry& sym, const Box& b) {
    const int p = box_period(sym, b);
    std::vector<Box> cls;
    cls.reserve(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) cls.push_back(apply_box(sym, b, i));
    return cls;
}

// σ on constraint indices (0-based): applying the point symmetry to the
// argument of constraint i yields the value of constraint sigma[i].
struct ConstraintPermutation {
    std::vector<int> sigma;

    int size() const { return static_cast<int>(sigma.size()); }

    friend bool operator==(const ConstraintPermutation&, const ConstraintPermutation&) = default;
};

inline void validate(const ConstraintPermutation& perm, int n_constraints) {
    if (perm.size() != n_constraints) {
        throw DimensionMismatch("sigma must cover every constraint exactly once");
    }
    std::vector<bool> hit(static_cast<std::size_t>(n_constraints), false);
    for (int j : perm.sigma) {
        if (j < 0 || j >= n_constraints) throw DimensionMismatch("sigma index out of range");
        if (hit[static_cast<std::size_t>(j)]) throw DimensionMismatch("sigma is not a bijection");
        hit[static_cast<std::size_t>(j)] = true;
    }
}

}  // namespace symprune
