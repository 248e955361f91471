#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secvne/milp.hpp"
#include "secvne/simplex.hpp"

namespace secvne::solver {

struct SolveLimits {
    std::int64_t max_nodes = 200000;
    // Cumulative simplex-pivot budget across the whole search. Unlike the
    // wall-clock budget this one is deterministic: the same model with the
    // same limits always stops at the same point.
    std::int64_t max_lp_iterations = 2'000'000;
    double time_budget_s = 60.0;
    double integrality_tol = 1e-6;
    double lp_tol = 1e-6;
};

enum class Status { Optimal, Infeasible, LimitReached };

struct SolveOutcome {
    Status status = Status::Infeasible;
    std::vector<double> assignment;  // structural columns; empty if none found
    double objective = 0.0;
    std::int64_t lp_iterations = 0;
    std::int64_t nodes_explored = 0;
};

// Optimal basic solution of the LP relaxation (binaries treated as [0,1]
// continuous). Deterministic; throws NumericalError on numerical failure.
SolveOutcome solve_lp(const milp::MilpModel& model);

// Exact branch-and-bound: most-fractional branching (ties by lowest column
// index), depth-first with periodic best-bound restarts. Returns limit_reached
// with the best incumbent when a budget runs out.
SolveOutcome solve_milp(const milp::MilpModel& model, const SolveLimits& limits);

}  // namespace secvne::solver
