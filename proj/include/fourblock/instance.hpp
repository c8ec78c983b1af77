#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fourblock/linalg.hpp"

namespace fourblock {

// min c0.x0 + sum c_i.x_i  s.t.  A x0 + sum B_i x_i = b0,
//                                C_i x0 + D_i x_i = b_i,  x >= 0 integral.
struct FourBlockInstance {
    int s = 0, t = 0, d = 0, m = 0, n = 0;
    IntMatrix a;                      // m x s
    std::vector<IntMatrix> b_blocks;  // single entry when uniform
    bool b_uniform = false;
    std::vector<IntMatrix> c_blocks;  // n of d x s
    std::vector<IntMatrix> d_blocks;  // n of d x t
    IntVector b0;
    std::vector<IntVector> b_bricks;
    IntVector c0;
    std::vector<IntVector> c_bricks;

    const IntMatrix& b_block(int i) const {
        return b_uniform ? b_blocks.front() : b_blocks[static_cast<size_t>(i)];
    }

    // coefficient bounds are always derived from the data, never stored
    long delta() const;      // max |entry| over the diagonal blocks
    long delta_bar() const;  // max |entry| over A, B, C, D

    bool is_b_uniform() const;
    void validate() const;
};

struct Solution {
    IntVector x0;
    std::vector<IntVector> x_bricks;
    BigInt objective;
};

enum class SolveOutcome { Optimal, Infeasible, Unbounded };

struct SolveStats {
    long hyperplanes = 0;
    long faces = 0;
    long guesses = 0;
    long guesses_solved = 0;
    long milp_nodes = 0;
    long lp_pivots = 0;
    long wall_ms = 0;
};

struct SolveStatus {
    SolveOutcome outcome = SolveOutcome::Infeasible;
    std::optional<Solution> solution;
    SolveStats stats;
};

FourBlockInstance parse_instance(const std::string& text);
std::string serialize_instance(const FourBlockInstance& inst);

struct CheckReport {
    bool ok = false;
    std::string violation;  // first violated constraint, empty when ok
};

CheckReport check_solution(const FourBlockInstance& inst, const Solution& sol);
BigInt solution_objective(const FourBlockInstance& inst, const IntVector& x0,
                          const std::vector<IntVector>& x_bricks);

// Lemma-style reduction to a B-uniform instance: t' = (2*delta_bar+1)^(m+d)
// columns indexed by (p, q) patterns, d' = d + 1 with a presence-flag row.
struct ColumnOrigin {
    int brick = -1;
    int column = -1;  // -1: synthetic column, forced to zero
};

struct ReductionResult {
    FourBlockInstance instance;
    std::vector<std::vector<ColumnOrigin>> back_map;  // [brick][new column]
};

ReductionResult reduce_to_b_uniform(const FourBlockInstance& inst);

// Pulls a solution of the reduced instance back to the original one.
Solution lift_reduced_solution(const FourBlockInstance& original, const ReductionResult& red,
                               const Solution& reduced_sol);

struct GeneratorParams {
    int s = 0;
    int t = 2;
    int d = 1;
    int m = 1;
    int n = 1;
    long delta = 1;      // diagonal-block bound for the free rows
    long delta_bar = 1;  // A/B/C bound for the free rows
    long rhs_bound = 6;
    long box_bound = 20;
    long cost_bound = 5;
    bool uniform_b = true;
};

struct GeneratedInstance {
    FourBlockInstance instance;
    long variable_bound = 0;  // every variable of any solution is <= this
};

// Instances whose variables are all boxed through explicit constraint rows
// (a mass row per brick, and one for x0 when s > 0), so box enumeration is a
// complete oracle on them.
GeneratedInstance random_instance(const GeneratorParams& params, std::uint64_t seed);

}  // namespace fourblock
