// Tests for cyclic point/box symmetry: shifting, periods, classes.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "symprune/codes.hpp"
#include "symprune/symmetry.hpp"

namespace {

using symprune::Box;
using symprune::CycleSymmetry;
using symprune::Interval;

CycleSymmetry full_cycle(int n) {
    CycleSymmetry sym;
    sym.n_vars = n;
    sym.cycle.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sym.cycle[static_cast<std::size_t>(i)] = i;
    return sym;
}

}  // namespace

TEST_CASE("point shifts along the cycle", "[symmetry]") {
    const CycleSymmetry sym = full_cycle(3);
    const std::vector<double> x = {10.0, 20.0, 30.0};
    CHECK(symprune::apply_point(sym, x, 1) == std::vector<double>{20.0, 30.0, 10.0});
    CHECK(symprune::apply_point(sym, x, 0) == x);
    CHECK(symprune::apply_point(sym, x, 3) == x);
    CHECK(symprune::apply_point(sym, x, 2) == std::vector<double>{30.0, 10.0, 20.0});
    CHECK(symprune::apply_point(sym, x, -1) == symprune::apply_point(sym, x, 2));
}

TEST_CASE("variables outside the cycle stay fixed", "[symmetry]") {
    CycleSymmetry sym;
    sym.n_vars = 4;
    sym.cycle = {0, 2};  // swap x1 and x3, leave x2 and x4 alone
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    CHECK(symprune::apply_point(sym, x, 1) == std::vector<double>{3.0, 2.0, 1.0, 4.0});
    CHECK(symprune::apply_point(sym, x, 2) == x);

    const Box b({Interval(0, 1), Interval(2, 3), Interval(4, 5), Interval(6, 7)});
    const Box shifted = symprune::apply_box(sym, b, 1);
    CHECK(shifted[0] == Interval(4, 5));
    CHECK(shifted[1] == Interval(2, 3));
    CHECK(shifted[2] == Interval(0, 1));
    CHECK(shifted[3] == Interval(6, 7));
}

TEST_CASE("box images, period, and class for a period-3 box", "[symmetry]") {
    const CycleSymmetry sym = full_cycle(6);
    const Interval low(0, 4);
    const Interval high(2, 5);
    const Box b({low, high, high, low, high, high});

    const Box s1 = symprune::apply_box(sym, b, 1);
    const Box expected({high, high, low, high, high, low});
    CHECK(s1 == expected);
    CHECK(symprune::apply_box(sym, b, 3) == b);
    CHECK(symprune::apply_box(sym, b, 0) == b);

    CHECK(symprune::box_period(sym, b) == 3);

    const std::vector<Box> cls = symprune::box_class(sym, b);
    REQUIRE(cls.size() == 3);
    CHECK(cls[0] == b);
    CHECK(cls[1] == s1);
    CHECK(cls[2] == symprune::apply_box(sym, b, 2));
    CHECK_FALSE(cls[1] == cls[2]);
}

TEST_CASE("cube has period one and a singleton class", "[symmetry]") {
    const CycleSymmetry sym = full_cycle(5);
    const Box cube(5, Interval(-10, 10));
    CHECK(symprune::box_period(sym, cube) == 1);
    CHECK(symprune::box_class(sym, cube).size() == 1);

    const CycleSymmetry pair = full_cycle(2);
    const Box distinct({Interval(0, 1), Interval(2, 3)});
    CHECK(symprune::box_period(pair, distinct) == 2);
}

TEST_CASE("shift composition is additive", "[symmetry]") {
    std::mt19937 rng(20260813u);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::uniform_int_distribution<int> shift(0, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const CycleSymmetry sym = full_cycle(n);
        std::vector<double> x(static_cast<std::size_t>(n));
        for (double& v : x) v = coord(rng);
        const int i = shift(rng);
        const int j = shift(rng);
        const std::vector<double> once = symprune::apply_point(sym, symprune::apply_point(sym, x, i), j);
        const std::vector<double> combined = symprune::apply_point(sym, x, i + j);
        REQUIRE(once == combined);
    }
}

TEST_CASE("box images contain exactly the shifted points", "[symmetry]") {
    std::mt19937 rng(987654u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const CycleSymmetry sym = full_cycle(n);
        std::vector<Interval> dims;
        std::vector<double> x;
        for (int d = 0; d < n; ++d) {
            const double lo = -5.0 + 10.0 * unit(rng);
            const double hi = lo + 3.0 * unit(rng);
            dims.emplace_back(lo, hi);
            x.push_back(lo + (hi - lo) * unit(rng));
        }
        const Box b(dims);
        const int i = static_cast<int>(rng() % static_cast<unsigned>(2 * n));
        REQUIRE(symprune::apply_box(sym, b, i).contains(symprune::apply_point(sym, x, i)));
    }
}

TEST_CASE("box period matches the class-code period", "[symmetry]") {
    for (int n = 1; n <= 10; ++n) {
        const CycleSymmetry sym = full_cycle(n);
        symprune::for_each_representative(n, [&](const symprune::ClassCode& code, int period) {
            const std::string bits = symprune::code_to_binary(code);
            std::vector<Interval> dims;
            for (char ch : bits) {
                dims.push_back(ch == '0' ? Interval(0, 1) : Interval(1, 2));
            }
            REQUIRE(symprune::box_period(sym, Box(dims)) == period);
        });
    }
}

TEST_CASE("invalid symmetries and permutations are rejected", "[symmetry]") {
    CycleSymmetry bad;
    bad.n_vars = 3;
    bad.cycle = {0, 3};
    CHECK_THROWS_AS(symprune::validate(bad), symprune::DimensionMismatch);
    bad.cycle = {1, 1};
    CHECK_THROWS_AS(symprune::validate(bad), symprune::DimensionMismatch);
    bad.cycle = {0, 1, 2};
    CHECK_NOTHROW(symprune::validate(bad));

    const CycleSymmetry sym = full_cycle(3);
    CHECK_THROWS_AS(symprune::apply_point(sym, {1.0, 2.0}, 1), symprune::DimensionMismatch);
    CHECK_THROWS_AS(symprune::apply_box(sym, Box(2, Interval(0, 1)), 1),
                    symprune::DimensionMismatch);

    symprune::ConstraintPermutation perm;
    perm.sigma = {0, 2, 1};
    CHECK_NOTHROW(symprune::validate(perm, 3));
    CHECK_THROWS_AS(symprune::validate(perm, 4), symprune::DimensionMismatch);
    perm.sigma = {0, 0, 1};
    CHECK_THROWS_AS(symprune::validate(perm, 3), symprune::DimensionMismatch);
}
