// Tests for the problem model: parsing, serialization round-trips, the
// built-in generators, and symmetry verification.

#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>
#include <string>
#include <vector>

#include "symprune/problem.hpp"

namespace {

using symprune::Expression;
using symprune::Interval;
using symprune::Problem;

const char* kSphereText =
    "var x1 in [-1, 1]\n"
    "var x2 in [-1, 1]\n"
    "var x3 in [-1, 1]\n"
    "cycle (x1 x2 x3)\n"
    "sigma (1 -> 1, 2 -> 3, 3 -> 4, 4 -> 2)\n"
    "constraint x1^2 + x2^2 + x3^2 in [5, 5]\n"
    "constraint 2*x1 - x2 in [0, inf]\n"
    "constraint 2*x2 - x3 in [0, inf]\n"
    "constraint 2*x3 - x1 in [0, inf]\n";

}  // namespace

TEST_CASE("parsing the three-variable showcase file", "[problems]") {
    const Problem p = symprune::parse_problem(kSphereText);
    REQUIRE(p.n_vars() == 3);
    CHECK(p.var_names == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(p.initial_box == symprune::Box(3, Interval(-1, 1)));
    REQUIRE(p.constraints.size() == 4);
    CHECK(p.constraints[0].range == Interval(5, 5));
    CHECK(p.constraints[1].range == Interval(0, std::numeric_limits<double>::infinity()));
    REQUIRE(p.symmetry.has_value());
    CHECK(p.symmetry->n_vars == 3);
    CHECK(p.symmetry->cycle == std::vector<int>{0, 1, 2});
    REQUIRE(p.sigma.has_value());
    CHECK(p.sigma->sigma == std::vector<int>{0, 2, 3, 1});

    CHECK(p == symprune::example_sphere());
}

TEST_CASE("comments, blank lines, and spacing are tolerated", "[problems]") {
    const Problem p = symprune::parse_problem(
        "# heading comment\n"
        "\n"
        "var a in [0, 2]   # trailing comment\n"
        "var b in [ -1.5 , 2.5 ]\n"
        "constraint a*b in [1, 1]\n");
    REQUIRE(p.n_vars() == 2);
    CHECK(p.initial_box[0] == Interval(0, 2));
    CHECK(p.initial_box[1] == Interval(-1.5, 2.5));
    REQUIRE(p.constraints.size() == 1);
    CHECK_FALSE(p.symmetry.has_value());
}

TEST_CASE("parse errors carry kind and position", "[problems]") {
    using symprune::BadInterval;
    using symprune::DuplicateVariable;
    using symprune::SyntaxError;
    using symprune::UnknownVariable;

    CHECK_THROWS_AS(symprune::parse_problem("var x in [2, 1]\n"), BadInterval);
    CHECK_THROWS_AS(symprune::parse_problem("var x in [-inf, 1]\n"), BadInterval);
    CHECK_THROWS_AS(symprune::parse_problem("var x in [0, 1]\nvar x in [0, 1]\n"),
                    DuplicateVariable);
    CHECK_THROWS_AS(symprune::parse_problem("var x in [0, 1]\nconstraint y + 1 in [0, 0]\n"),
                    UnknownVariable);
    CHECK_THROWS_AS(symprune::parse_problem("var x in [0, 1]\ncycle (x y)\n"), UnknownVariable);
    CHECK_THROWS_AS(symprune::parse_problem("frobnicate\n"), SyntaxError);
    CHECK_THROWS_AS(symprune::parse_problem("var x in [0, 1\n"), SyntaxError);
    CHECK_THROWS_AS(symprune::parse_problem("var x in [0, 1]\nconstraint x + in [0, 0]\n"),
                    SyntaxError);
    CHECK_THROWS_AS(symprune::parse_problem(""), SyntaxError);
    CHECK_THROWS_AS(symprune::parse_problem("var x in [0, 1]\ncycle (x)\n"), SyntaxError);
    CHECK_THROWS_AS(
        symprune::parse_problem("var x in [0,1]\nvar y in [0,1]\ncycle (x y)\ncycle (x y)\n"),
        SyntaxError);
    CHECK_THROWS_AS(
        symprune::parse_problem("var x in [0,1]\nsigma (1 -> 2)\nconstraint x in [0,1]\n"),
        SyntaxError);

    try {
        symprune::parse_problem("var x in [0, 1]\nconstraint x + in [0, 0]\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 1);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("emitted problems reparse to equal problems", "[problems]") {
    const Problem parsed = symprune::parse_problem(kSphereText);
    const std::string emitted = symprune::emit_problem(parsed);
    CHECK(symprune::parse_problem(emitted) == parsed);

    for (int n : {2, 3, 5, 6}) {
        const Problem p = symprune::cyclic_n_roots(n);
        CHECK(symprune::parse_problem(symprune::emit_problem(p)) == p);
    }

    const Problem tricky = symprune::parse_problem(
        "var x in [0.1, 1e3]\n"
        "var y in [-2.5e-2, 4]\n"
        "constraint (x + y)*x - y/2 in [0, inf]\n"
        "constraint -x^2 + 0.3 in [-inf, 0]\n"
        "constraint (x - y)^3 in [-1000, 1000]\n");
    CHECK(symprune::parse_problem(symprune::emit_problem(tricky)) == tricky);
}

TEST_CASE("cyclic roots generator matches the explicit five-variable system", "[problems]") {
    const Problem p = symprune::cyclic_n_roots(5);
    REQUIRE(p.n_vars() == 5);
    REQUIRE(p.constraints.size() == 5);
    CHECK(p.initial_box == symprune::Box(5, Interval(-10, 10)));

    const std::vector<std::string>& names = p.var_names;
    CHECK(p.constraints[0].expr.to_string(names) == "x1 + x2 + x3 + x4 + x5");
    CHECK(p.constraints[1].expr.to_string(names) ==
          "x1*x2 + x2*x3 + x3*x4 + x4*x5 + x5*x1");
    CHECK(p.constraints[2].expr.to_string(names) ==
          "x1*x2*x3 + x2*x3*x4 + x3*x4*x5 + x4*x5*x1 + x5*x1*x2");
    CHECK(p.constraints[3].expr.to_string(names) ==
          "x1*x2*x3*x4 + x2*x3*x4*x5 + x3*x4*x5*x1 + x4*x5*x1*x2 + x5*x1*x2*x3");
    CHECK(p.constraints[4].expr.to_string(names) == "x1*x2*x3*x4*x5 - 1");
    for (int i = 0; i < 5; ++i) CHECK(p.constraints[static_cast<std::size_t>(i)].range == Interval(0, 0));

    REQUIRE(p.symmetry.has_value());
    CHECK(p.symmetry->cycle == std::vector<int>{0, 1, 2, 3, 4});
    REQUIRE(p.sigma.has_value());
    CHECK(p.sigma->sigma == std::vector<int>{0, 1, 2, 3, 4});

    CHECK(symprune::cyclic_n_roots(3).constraints.size() == 3);
    CHECK(symprune::cyclic_n_roots(8, -5, 5).initial_box == symprune::Box(8, Interval(-5, 5)));
}

TEST_CASE("generated problems verify their own symmetry", "[problems]") {
    for (int n : {2, 3, 5, 7}) {
        const Problem p = symprune::cyclic_n_roots(n);
        REQUIRE(symprune::verify_symmetry(p, *p.symmetry, *p.sigma));
    }
    const Problem sphere = symprune::example_sphere();
    REQUIRE(symprune::verify_symmetry(sphere, *sphere.symmetry, *sphere.sigma));
}

TEST_CASE("cyclic constraint values are invariant under every shift", "[problems]") {
    std::mt19937 rng(13579u);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int n : {3, 5, 6}) {
        const Problem p = symprune::cyclic_n_roots(n);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (double& v : x) v = coord(rng);
            for (int shift = 0; shift < n; ++shift) {
                const std::vector<double> sx = symprune::apply_point(*p.symmetry, x, shift);
                for (const symprune::Constraint& c : p.constraints) {
                    REQUIRE(c.expr.eval(sx) ==
                            Catch::Approx(c.expr.eval(x)).margin(1e-7).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("a wrong sigma is detected with the failing constraint", "[problems]") {
    Problem p = symprune::example_sphere();
    symprune::ConstraintPermutation identity;
    identity.sigma = {0, 1, 2, 3};
    const symprune::SymmetryCheck check = symprune::check_symmetry(p, *p.symmetry, identity);
    CHECK_FALSE(check.ok);
    CHECK(check.failing_constraint == 1);  // the first dominance condition moves under the cycle
    CHECK_FALSE(check.counterexample.empty());
    CHECK_FALSE(symprune::verify_symmetry(p, *p.symmetry, identity));

    // Identity symmetry with identity sigma is always consistent.
    symprune::CycleSymmetry ident_sym;
    ident_sym.n_vars = 3;
    ident_sym.cycle = {};
    CHECK(symprune::verify_symmetry(p, ident_sym, identity));
}

TEST_CASE("size mismatches raise dimension errors", "[problems]") {
    const Problem p = symprune::example_sphere();
    symprune::CycleSymmetry wrong = *p.symmetry;
    wrong.n_vars = 4;
    CHECK_THROWS_AS(symprune::check_symmetry(p, wrong, *p.sigma), symprune::DimensionMismatch);
    symprune::ConstraintPermutation small;
    small.sigma = {0, 1, 2};
    CHECK_THROWS_AS(symprune::check_symmetry(p, *p.symmetry, small), symprune::DimensionMismatch);
}
