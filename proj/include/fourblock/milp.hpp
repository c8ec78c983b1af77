#pragma once

#include <optional>
#include <vector>

#include "fourblock/linalg.hpp"

namespace fourblock {

enum class VarKind { Integer, Continuous };

struct Variable {
    VarKind kind = VarKind::Continuous;
    std::optional<Rational> lower;  // nullopt = unbounded
    std::optional<Rational> upper;
};

struct LinearRow {
    RatVector coeffs;
    Rational rhs;
};

// Minimization program with equality rows and <= rows.
struct LinearProgram {
    std::vector<Variable> vars;
    std::vector<LinearRow> eq_rows;
    std::vector<LinearRow> le_rows;
    RatVector objective;

    int num_vars() const { return static_cast<int>(vars.size()); }

    int add_var(VarKind kind, std::optional<Rational> lower, std::optional<Rational> upper,
                Rational cost);
    void add_eq(RatVector coeffs, Rational rhs) { eq_rows.push_back({std::move(coeffs), std::move(rhs)}); }
    void add_le(RatVector coeffs, Rational rhs) { le_rows.push_back({std::move(coeffs), std::move(rhs)}); }
};

enum class SolveKind { Optimal, Infeasible, Unbounded };

struct MilpResult {
    SolveKind status = SolveKind::Infeasible;
    RatVector assignment;  // set when Optimal
    Rational value;
    RatVector ray;  // set when Unbounded: directionally feasible, c^T ray < 0
    long nodes = 0;
    long pivots = 0;
};

struct MilpOptions {
    long node_budget = 2000000;
    // Prune nodes whose relaxation bound exceeds this value strictly; an
    // optimum equal to the cutoff is still found and reported. Infeasible
    // then means "nothing at or below the cutoff".
    std::optional<Rational> cutoff;
};

// Exact optimal basic solution of the LP relaxation (Bland's rule; always
// terminates). With check_integrality set, integer-kinded variables of an
// Optimal result are verified integral (NotIntegral otherwise).
MilpResult solve_lp_exact(const LinearProgram& lp, bool check_integrality = false);

// Best-first branch and bound on the most fractional integer variable.
MilpResult solve_milp(const LinearProgram& lp, const MilpOptions& options = {});

// Re-solves with the integer variables pinned to `assignment` and returns a
// basic optimum; asserts the continuous part came out integral (NotIntegral
// signals a violated total-unimodularity assumption upstream).
RatVector integral_vertex_restore(const LinearProgram& lp, const RatVector& assignment);

}  // namespace fourblock
