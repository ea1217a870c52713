// Tests for hull-consistency contraction and the branch-and-prune loop.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "symprune/postprocess.hpp"
#include "symprune/problem.hpp"
#include "symprune/solver.hpp"

namespace {

using symprune::Box;
using symprune::Interval;
using symprune::Problem;
using symprune::SolverConfig;

Problem parabola_roots() {
    return symprune::parse_problem(
        "var x in [-10, 10]\n"
        "constraint x^2 in [4, 4]\n");
}

}  // namespace

TEST_CASE("contraction clamps an even power to its root hull", "[solver]") {
    const Problem p = parabola_roots();
    const std::optional<Box> out = symprune::contract(p.initial_box, p.constraints, 10);
    REQUIRE(out.has_value());
    CHECK((*out)[0] == Interval(-2, 2));
}

TEST_CASE("contraction proves infeasibility", "[solver]") {
    const Problem sphere = symprune::example_sphere();
    CHECK_FALSE(symprune::contract(sphere.initial_box, sphere.constraints, 10).has_value());

    const Problem sum = symprune::parse_problem(
        "var x in [0, 1]\n"
        "var y in [0.5, 2]\n"
        "constraint x + y in [0, 0]\n");
    CHECK_FALSE(symprune::contract(sum.initial_box, sum.constraints, 10).has_value());
}

TEST_CASE("contraction is monotone and keeps feasible points", "[solver]") {
    const Problem circle = symprune::parse_problem(
        "var x in [-2, 2]\n"
        "var y in [-2, 2]\n"
        "constraint x^2 + y^2 in [1, 1]\n");
    std::mt19937 rng(31415u);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    const std::optional<Box> out = symprune::contract(circle.initial_box, circle.constraints, 10);
    REQUIRE(out.has_value());
    REQUIRE(out->size() == circle.initial_box.size());
    for (std::size_t i = 0; i < out->size(); ++i) {
        CHECK(circle.initial_box[i].contains((*out)[i]));
    }
    for (int trial = 0; trial < 500; ++trial) {
        const double t = angle(rng);
        REQUIRE(out->contains({std::cos(t), std::sin(t)}));
    }
}

TEST_CASE("branch and prune isolates both parabola roots", "[solver]") {
    const Problem p = parabola_roots();
    SolverConfig cfg;
    cfg.epsilon = 1e-6;
    const symprune::SolveResult r = symprune::branch_and_prune(p, p.initial_box, cfg);
    CHECK_FALSE(r.budget_exceeded);
    REQUIRE_FALSE(r.boxes.empty());

    bool covers_neg = false;
    bool covers_pos = false;
    for (const symprune::SolutionBox& s : r.boxes) {
        CHECK(s.box.max_width() <= cfg.epsilon);
        const double lo = s.box[0].lo();
        const double hi = s.box[0].hi();
        const double dist = std::min(std::abs(lo + 2) + std::abs(hi + 2), std::abs(lo - 2) + std::abs(hi - 2));
        CHECK(dist <= 2 * cfg.epsilon);  // every accepted box hugs a true root
        covers_neg = covers_neg || (lo <= -2 && -2 <= hi);
        covers_pos = covers_pos || (lo <= 2 && 2 <= hi);
    }
    CHECK(covers_neg);
    CHECK(covers_pos);
    CHECK(r.stats.solution_boxes == r.boxes.size());
    CHECK(r.stats.boxes_processed >= r.stats.boxes_rejected + r.stats.solution_boxes);
}

TEST_CASE("the infeasible showcase system solves to an empty set", "[solver]") {
    const Problem sphere = symprune::example_sphere();
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    const symprune::SolveResult r = symprune::branch_and_prune(sphere, sphere.initial_box, cfg);
    CHECK(r.boxes.empty());
    CHECK_FALSE(r.budget_exceeded);
    CHECK(r.stats.boxes_rejected >= 1);
}

TEST_CASE("identical runs produce identical box lists", "[solver]") {
    const Problem p = symprune::parse_problem(
        "var x in [-3, 3]\n"
        "var y in [-3, 3]\n"
        "constraint x^2 + y^2 in [4, 4]\n"
        "constraint x - y in [0, 0]\n");
    SolverConfig cfg;
    cfg.epsilon = 1e-4;
    const symprune::SolveResult a = symprune::branch_and_prune(p, p.initial_box, cfg);
    const symprune::SolveResult b = symprune::branch_and_prune(p, p.initial_box, cfg);
    REQUIRE(a.boxes.size() == b.boxes.size());
    for (std::size_t i = 0; i < a.boxes.size(); ++i) {
        REQUIRE(a.boxes[i].box == b.boxes[i].box);
    }
    CHECK(a.stats.boxes_processed == b.stats.boxes_processed);
    CHECK(a.stats.boxes_rejected == b.stats.boxes_rejected);
    REQUIRE_FALSE(a.boxes.empty());
    // Both intersection points of the circle with the diagonal are covered.
    const double root = std::sqrt(2.0);
    bool neg = false;
    bool pos = false;
    for (const symprune::SolutionBox& s : a.boxes) {
        neg = neg || s.box.contains({-root, -root});
        pos = pos || s.box.contains({root, root});
    }
    CHECK(neg);
    CHECK(pos);
}

TEST_CASE("the processed-box budget is honored", "[solver]") {
    const Problem p = parabola_roots();
    SolverConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.max_boxes = 2;
    const symprune::SolveResult r = symprune::branch_and_prune(p, p.initial_box, cfg);
    CHECK(r.budget_exceeded);
    CHECK(r.stats.boxes_processed <= 2);

    cfg.max_boxes = 10'000;
    const symprune::SolveResult full = symprune::branch_and_prune(p, p.initial_box, cfg);
    CHECK_FALSE(full.budget_exceeded);
}

TEST_CASE("equality widening relaxes degenerate ranges", "[solver]") {
    const Problem p = parabola_roots();
    SolverConfig cfg;
    cfg.epsilon = 1e-2;
    cfg.equality_widening = 0.5;
    const symprune::SolveResult r = symprune::branch_and_prune(p, p.initial_box, cfg);
    REQUIRE_FALSE(r.boxes.empty());
    bool neg = false;
    bool pos = false;
    for (const symprune::SolutionBox& s : r.boxes) {
        neg = neg || s.box.contains({-2.0});
        pos = pos || s.box.contains({2.0});
    }
    CHECK(neg);
    CHECK(pos);
}

TEST_CASE("rejected regions contain no feasible point of a known system", "[solver]") {
    // For the parabola the feasible set is exactly {-2, +2}; any random point
    // outside the accepted boxes must violate the constraint.
    const Problem p = parabola_roots();
    SolverConfig cfg;
    cfg.epsilon = 1e-6;
    const symprune::SolveResult r = symprune::branch_and_prune(p, p.initial_box, cfg);
    std::mt19937 rng(2718u);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::vector<double> x = {coord(rng)};
        bool inside_accepted = false;
        for (const symprune::SolutionBox& s : r.boxes) {
            inside_accepted = inside_accepted || s.box.contains(x);
        }
        if (!inside_accepted) {
            REQUIRE(symprune::max_residual(p, x) > 0.0);
        }
    }
}

TEST_CASE("newton refinement polishes cluster centers", "[solver]") {
    const Problem p = symprune::parse_problem(
        "var x in [-3, 3]\n"
        "var y in [-3, 3]\n"
        "constraint x^2 + y^2 in [4, 4]\n"
        "constraint x - y in [0, 0]\n");
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    const symprune::SolveResult r = symprune::branch_and_prune(p, p.initial_box, cfg);
    const auto clusters = symprune::cluster_boxes(r.boxes, 0.05);
    REQUIRE(clusters.size() == 2);
    for (const symprune::Cluster& cl : clusters) {
        const std::vector<double> refined = symprune::newton_refine(p, cl.center, 1);
        CHECK(symprune::max_residual(p, refined) <= 1e-6);
        CHECK(symprune::max_residual(p, refined) <= symprune::max_residual(p, cl.center) + 1e-12);
    }
}
