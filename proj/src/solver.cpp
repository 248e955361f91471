#include "secvne/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace secvne::solver {

SolveOutcome solve_lp(const milp::MilpModel& model) {
    SolveOutcome out;
    SimplexSolver s(model);
    auto st = s.solve(false);
    out.lp_iterations = s.iterations();
    out.nodes_explored = 0;
    if (st == SimplexSolver::LpStatus::Infeasible) {
        out.status = Status::Infeasible;
        return out;
    }
    out.status = Status::Optimal;
    out.assignment = s.structural_values();
    out.objective = s.objective();
    auto bad = verify_assignment(model, out.assignment, 1e-6, 2.0 /* integrality not required */);
    if (!bad.empty()) throw NumericalError("solve_lp: " + bad.front());
    return out;
}

namespace {

struct Node {
    std::vector<std::pair<int, char>> fixes;  // (binary column, value), cumulative from root
    double bound;                             // parent LP objective
};

}  // namespace

SolveOutcome solve_milp(const milp::MilpModel& model, const SolveLimits& limits) {
    if (limits.max_nodes <= 0 || limits.max_lp_iterations <= 0 || limits.integrality_tol <= 0 ||
        limits.integrality_tol > 1e-3 || limits.lp_tol <= 0 || limits.lp_tol > 1e-3)
        throw std::invalid_argument("solve_milp: bad limits");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    std::vector<int> binaries;
    for (std::size_t j = 0; j < model.vars.size(); ++j)
        if (model.vars[j].kind == milp::VarKind::Binary) binaries.push_back(static_cast<int>(j));

    SimplexSolver lp(model);
    SolveOutcome out;
    bool have_incumbent = false;
    double inc_obj = 0.0;
    std::vector<double> inc_x;

    std::vector<Node> open;
    open.push_back({{}, -std::numeric_limits<double>::infinity()});
    std::int64_t selections = 0;
    bool hit_limit = false;

    while (!open.empty()) {
        if (out.nodes_explored >= limits.max_nodes || lp.iterations() > limits.max_lp_iterations ||
            elapsed() > limits.time_budget_s) {
            hit_limit = true;
            break;
        }

        // depth-first, with a best-bound restart every 32 picks to keep the
        // global lower bound moving
        std::size_t pick = open.size() - 1;
        if (++selections % 32 == 0) {
            for (std::size_t i = 0; i < open.size(); ++i)
                if (open[i].bound < open[pick].bound) pick = i;
        }
        Node node = std::move(open[pick]);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));

        if (have_incumbent &&
            node.bound >= inc_obj - 1e-9 * std::max(1.0, std::abs(inc_obj)))
            continue;

        lp.reset_bounds();
        for (auto [col, v] : node.fixes) lp.set_bounds(col, v, v);
        lp.set_cutoff(have_incumbent ? inc_obj - 1e-9 * std::max(1.0, std::abs(inc_obj))
                                     : std::numeric_limits<double>::infinity());
        auto st = lp.solve(true);
        ++out.nodes_explored;
        out.lp_iterations = lp.iterations();
        if (st != SimplexSolver::LpStatus::Optimal) continue;  // infeasible or cut off
        double bound = lp.objective();
        if (have_incumbent && bound >= inc_obj - 1e-9 * std::max(1.0, std::abs(inc_obj)))
            continue;

        int branch_col = -1;
        double branch_frac = 0.0;
        double branch_val = 0.0;
        int branch_prio = 0;
        for (int col : binaries) {
            double v = lp.value(col);
            double frac = std::abs(v - std::round(v));
            if (frac <= limits.integrality_tol) continue;
            int prio = model.vars[col].branch_priority;
            if (branch_col < 0 || prio < branch_prio ||
                (prio == branch_prio && frac > branch_frac)) {
                branch_prio = prio;
                branch_frac = frac;
                branch_col = col;
                branch_val = v;
            }
        }

        if (branch_col < 0) {
            if (!have_incumbent || bound < inc_obj) {
                have_incumbent = true;
                inc_obj = bound;
                inc_x = lp.structural_values();
            }
            continue;
        }

        char near = branch_val >= 0.5 ? 1 : 0;
        Node far_child{node.fixes, bound};
        far_child.fixes.push_back({branch_col, static_cast<char>(1 - near)});
        Node near_child{std::move(node.fixes), bound};
        near_child.fixes.push_back({branch_col, near});
        open.push_back(std::move(far_child));
        open.push_back(std::move(near_child));  // explored first (DFS)
    }

    if (have_incumbent) {
        out.status = hit_limit ? Status::LimitReached : Status::Optimal;
        out.assignment = std::move(inc_x);
        out.objective = inc_obj;
        auto bad = verify_assignment(model, out.assignment, limits.lp_tol, limits.integrality_tol);
        if (!bad.empty()) throw NumericalError("solve_milp: incumbent rejected: " + bad.front());
    } else {
        out.status = hit_limit ? Status::LimitReached : Status::Infeasible;
    }
    return out;
}

}  // namespace secvne::solver
