#pragma once

// Umbrella header: interval arithmetic, rotation-class codes, cyclic
// symmetry, expressions, problems, the branch-and-prune solver, the
// symmetry-exploiting orchestrator, and solution post-processing.

#include "symprune/codes.hpp"
#include "symprune/csym.hpp"
#include "symprune/expression.hpp"
#include "symprune/interval.hpp"
#include "symprune/postprocess.hpp"
#include "symprune/problem.hpp"
#include "symprune/solver.hpp"
#include "symprune/symmetry.hpp"
