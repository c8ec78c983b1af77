#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fourblock/instance.hpp"

namespace fourblock {

struct OracleReport {
    SolveOutcome outcome = SolveOutcome::Infeasible;
    BigInt objective;
    std::optional<Solution> witness;
    long enumerated = 0;  // lattice points visited
};

struct OracleParams {
    long box_cap = 200;
    long work_cap = 500000000;
};

// All nonnegative integer solutions of D x = b with ||x||_inf <= bound,
// in lexicographic order.
std::vector<IntVector> enumerate_solutions(const IntMatrix& d_matrix, const IntVector& b,
                                           long bound);

// Ground truth by enumerating x0 over [0, box]^s and combining per-brick
// solution sets through a partial-sum table on the global rows. Exact on
// instances whose variables are boxed by their own rows.
OracleReport brute_force_solve(const FourBlockInstance& inst, long box,
                               const OracleParams& params = {});

// Faithfulness check for a decomposition multiset: every solution of
// D x = b with ||x||_inf <= bound must split into per-part solutions, one
// per multiset element. Reachability over partial sums with memoization.
bool check_faithful(const std::vector<std::pair<IntVector, BigInt>>& parts,
                    const IntMatrix& d_matrix, const IntVector& b, long bound,
                    const OracleParams& params = {});

// Constructive variant for one concrete solution x: the list of per-part
// solutions summing to x, or nullopt when x does not split.
std::optional<std::vector<IntVector>> extract_split(
    const std::vector<std::pair<IntVector, BigInt>>& parts, const IntMatrix& d_matrix,
    const IntVector& x, const OracleParams& params = {});

}  // namespace fourblock
