#include <doctest.h>

#include <random>

#include "secvne/solver.hpp"
#include "helpers.hpp"

using namespace secvne;
using milp::MilpModel;
using milp::Sense;
using milp::VarKind;

TEST_CASE("trivial LPs") {
    SUBCASE("min x subject to x >= 3") {
        MilpModel m;
        m.add_var("x", VarKind::Continuous, 0, 100, 1.0);
        m.add_row("r0", {{0, 1.0}}, Sense::Ge, 3.0);
        auto r = solver::solve_lp(m);
        REQUIRE(r.status == solver::Status::Optimal);
        CHECK(r.objective == doctest::Approx(3.0));
        CHECK(r.assignment[0] == doctest::Approx(3.0));
    }
    SUBCASE("x >= 2 and x <= 1 is infeasible") {
        MilpModel m;
        m.add_var("x", VarKind::Continuous, 0, 100, 1.0);
        m.add_row("r0", {{0, 1.0}}, Sense::Ge, 2.0);
        m.add_row("r1", {{0, 1.0}}, Sense::Le, 1.0);
        CHECK(solver::solve_lp(m).status == solver::Status::Infeasible);
    }
    SUBCASE("bounds-only model solves at the active bound") {
        MilpModel m;
        m.add_var("x", VarKind::Continuous, -2, 5, 1.0);
        m.add_var("y", VarKind::Continuous, 0, 5, -1.0);
        auto r = solver::solve_lp(m);
        REQUIRE(r.status == solver::Status::Optimal);
        CHECK(r.objective == doctest::Approx(-7.0));  // x at -2, y at 5
    }
    SUBCASE("equality row") {
        MilpModel m;
        m.add_var("x", VarKind::Continuous, 0, 10, 2.0);
        m.add_var("y", VarKind::Continuous, 0, 10, 3.0);
        m.add_row("r0", {{0, 1.0}, {1, 1.0}}, Sense::Eq, 4.0);
        auto r = solver::solve_lp(m);
        REQUIRE(r.status == solver::Status::Optimal);
        CHECK(r.objective == doctest::Approx(8.0));  // all mass on the cheap column
    }
}

TEST_CASE("trivial MILPs") {
    SUBCASE("binary cover x + y >= 1") {
        MilpModel m;
        m.add_var("x", VarKind::Binary, 0, 1, 1.0);
        m.add_var("y", VarKind::Binary, 0, 1, 1.5);
        m.add_row("r0", {{0, 1.0}, {1, 1.0}}, Sense::Ge, 1.0);
        auto r = solver::solve_milp(m, {});
        REQUIRE(r.status == solver::Status::Optimal);
        CHECK(r.objective == doctest::Approx(1.0));
        CHECK(r.assignment[0] == doctest::Approx(1.0));
        CHECK(r.assignment[1] == doctest::Approx(0.0));
    }
    SUBCASE("fractional-only constraint is integer-infeasible") {
        // 2x = 1 admits x = 0.5 but no binary value
        MilpModel m;
        m.add_var("x", VarKind::Binary, 0, 1, 1.0);
        m.add_row("r0", {{0, 2.0}}, Sense::Eq, 1.0);
        CHECK(solver::solve_lp(m).status == solver::Status::Optimal);
        CHECK(solver::solve_milp(m, {}).status == solver::Status::Infeasible);
    }
    SUBCASE("relaxation bounds the integer optimum") {
        MilpModel m;
        m.add_var("x", VarKind::Binary, 0, 1, 3.0);
        m.add_var("y", VarKind::Binary, 0, 1, 5.0);
        m.add_row("r0", {{0, 2.0}, {1, 3.0}}, Sense::Ge, 3.0);
        auto lp = solver::solve_lp(m);
        auto ip = solver::solve_milp(m, {});
        REQUIRE(lp.status == solver::Status::Optimal);
        REQUIRE(ip.status == solver::Status::Optimal);
        CHECK(lp.objective <= ip.objective + 1e-9);
        CHECK(ip.objective == doctest::Approx(5.0));  // y alone covers
    }
}

TEST_CASE("random MILPs agree with exhaustive enumeration") {
    std::mt19937_64 rng(2024);
    int solved = 0;
    for (int t = 0; t < 30; ++t) {
        auto m = testutil::random_milp(rng);
        auto r = solver::solve_milp(m, {});
        double oracle;
        bool feasible = testutil::enumerate_milp(m, oracle);
        CAPTURE(t);
        if (feasible) {
            REQUIRE(r.status == solver::Status::Optimal);
            CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-7));
            ++solved;
        } else {
            CHECK(r.status == solver::Status::Infeasible);
        }
    }
    CHECK(solved > 5);  // the generator must not be degenerate
}

TEST_CASE("returned assignments satisfy the model") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 15; ++t) {
        auto m = testutil::random_milp(rng);
        auto r = solver::solve_milp(m, {});
        if (r.status != solver::Status::Optimal) continue;
        REQUIRE(r.assignment.size() == m.vars.size());
        for (std::size_t j = 0; j < m.vars.size(); ++j) {
            CHECK(r.assignment[j] >= m.vars[j].lb - 1e-6);
            CHECK(r.assignment[j] <= m.vars[j].ub + 1e-6);
            if (m.vars[j].kind == VarKind::Binary)
                CHECK(std::abs(r.assignment[j] - std::round(r.assignment[j])) < 1e-6);
        }
        for (const auto& row : m.rows) {
            double lhs = 0;
            for (auto [j, c] : row.coeffs) lhs += c * r.assignment[j];
            if (row.sense == Sense::Le) CHECK(lhs <= row.rhs + 1e-6);
            if (row.sense == Sense::Ge) CHECK(lhs >= row.rhs - 1e-6);
            if (row.sense == Sense::Eq) CHECK(lhs == doctest::Approx(row.rhs).epsilon(1e-6));
        }
    }
}

TEST_CASE("determinism") {
    std::mt19937_64 rng(5);
    auto m = testutil::random_milp(rng);
    auto r1 = solver::solve_milp(m, {});
    auto r2 = solver::solve_milp(m, {});
    CHECK(r1.status == r2.status);
    CHECK(r1.objective == r2.objective);       // bitwise, not approximate
    CHECK(r1.assignment == r2.assignment);
    CHECK(r1.lp_iterations == r2.lp_iterations);
    CHECK(r1.nodes_explored == r2.nodes_explored);
}

TEST_CASE("iteration budget stops deterministically") {
    // vertex cover of a 5-cycle: LP relaxation is fractional (all 0.5), so the
    // search must branch; a one-pivot budget stops it right after the root
    MilpModel m;
    for (int j = 0; j < 5; ++j) m.add_var("x" + std::to_string(j), VarKind::Binary, 0, 1, 1.0);
    for (int j = 0; j < 5; ++j)
        m.add_row("e" + std::to_string(j), {{j, 1.0}, {(j + 1) % 5, 1.0}}, Sense::Ge, 1.0);
    CHECK(solver::solve_milp(m, {}).objective == doctest::Approx(3.0));
    solver::SolveLimits tight;
    tight.max_lp_iterations = 1;
    auto r1 = solver::solve_milp(m, tight);
    auto r2 = solver::solve_milp(m, tight);
    CHECK(r1.status == solver::Status::LimitReached);
    CHECK(r1.status == r2.status);
    CHECK(r1.lp_iterations == r2.lp_iterations);
}
