#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "secvne/kernels.hpp"
#include "secvne/milp.hpp"

namespace secvne::solver {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bounded-variable two-phase revised primal simplex over a product-form basis
// inverse with sparse eta vectors. Rows are turned into equalities with one
// slack each (Le: s in [0,inf), Ge: (-inf,0], Eq: [0,0]). Deterministic:
// Dantzig pricing with lowest-index tie breaks, Bland's rule after a stall.
//
// The object is reusable: set_bounds/reset_bounds mutate structural bounds and
// solve(warm=true) restarts from the previous basis, which is how
// branch-and-bound revisits it cheaply.
class SimplexSolver {
public:
    explicit SimplexSolver(const milp::MilpModel& model);

    void set_bounds(int col, double lb, double ub);
    void reset_bounds();

    enum class LpStatus { Optimal, Infeasible, CutoffReached };

    LpStatus solve(bool warm);

    // Dual-simplex early exit: once the dual bound proves the optimum cannot
    // beat this value, solve(true) returns CutoffReached without finishing.
    void set_cutoff(double c) { cutoff_ = c; }

    double objective() const { return objective_; }
    double value(int col) const { return x_[col]; }
    std::vector<double> structural_values() const {
        return std::vector<double>(x_.begin(), x_.begin() + n_);
    }
    std::int64_t iterations() const { return iterations_; }

    // Hard per-solve pivot cap; exceeding it throws NumericalError.
    void set_iteration_limit(std::int64_t v) { iter_limit_ = v; }

private:
    enum class VStat : char { AtLower, AtUpper, Basic };

    struct Eta {
        int pivot_row;
        double pivot_val;
        std::vector<std::pair<int, double>> entries;  // includes the pivot entry
    };

    void refactorize();
    void compute_basics();
    void ftran(std::vector<double>& v) const;
    void btran(std::vector<double>& v) const;
    bool run_phase1();
    void run_phase2(const double* cost);
    enum class DualResult { Optimal, Infeasible, GiveUp, Cutoff };
    DualResult run_dual(const double* cost);
    // May flip nonbasic variables to the bound matching their reduced-cost
    // sign (and recompute basics); false when repair is impossible.
    bool dual_feasible(const double* cost);
    double infeasibility() const;

    int m_ = 0;  // rows
    int n_ = 0;  // structural columns
    int total_ = 0;

    kernels::Csc cols_;  // all columns incl. slacks
    std::vector<double> cost_;
    std::vector<double> lb_, ub_;
    std::vector<double> model_lb_, model_ub_;
    std::vector<double> rhs_;

    std::vector<VStat> stat_;
    std::vector<int> basis_;  // row position -> column
    std::vector<double> x_;
    std::vector<Eta> etas_;
    int etas_base_ = 0;  // eta count right after the last refactorization

    // last dual-feasible basis (variable statuses), restored when the current
    // basis lost dual feasibility, e.g. after an infeasible sibling node
    std::vector<VStat> snap_stat_;

    double objective_ = 0.0;
    std::int64_t iterations_ = 0;
    std::int64_t iter_limit_ = 100'000'000;  // hard safety net, not a budget
    double cutoff_ = std::numeric_limits<double>::infinity();
    bool have_basis_ = false;

    // work vectors
    std::vector<double> work_y_, work_d_, work_col_, work_beta_;
    std::vector<double> phase_cost_, pert_cost_;
    std::vector<double> d_;        // phase-2 reduced costs, updated incrementally
    std::vector<double> devex_w_;  // devex reference weights
};

// Re-checks an assignment against every row, bound and integrality marker of
// the model, independent of any solver state. Returns human-readable
// violations; empty means clean.
std::vector<std::string> verify_assignment(const milp::MilpModel& model,
                                           const std::vector<double>& x, double lp_tol,
                                           double integrality_tol);

}  // namespace secvne::solver
