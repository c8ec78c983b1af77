#pragma once

#include <utility>
#include <vector>

#include "fourblock/linalg.hpp"

namespace fourblock {

struct GraverBasis {
    IntMatrix matrix;
    std::vector<IntVector> elements;  // conformally minimal, closed under negation
};

struct BaseSolutionSet {
    IntMatrix matrix;
    IntVector rhs;
    std::vector<IntVector> solutions;  // componentwise-minimal nonnegative solutions
};

struct GraverParams {
    long work_cap = 50000000;  // enumeration node budget
};

// x conformal to y: same signs, no larger magnitudes, componentwise.
bool conformal(const IntVector& x, const IntVector& y);

// Complete Graver basis of a d x t matrix with entries bounded by delta,
// by enumerating kernel vectors with ||g||_1 <= (2 d delta + 1)^d and
// keeping the conformally minimal ones.
GraverBasis graver_basis(const IntMatrix& d_matrix, long delta, const GraverParams& params = {});

// The nonnegative Graver elements. Computed directly over the nonnegative
// orthant (where conformal order is plain componentwise order), which gives
// the same set as filtering graver_basis but stays feasible for wide
// matrices such as the reduction's pattern columns.
std::vector<IntVector> nonneg_graver(const IntMatrix& d_matrix, long delta,
                                     const GraverParams& params = {});

// All componentwise-minimal nonnegative solutions of D x = rhs, found by a
// bounded search with cutoff (2 d (delta + ||rhs||_inf))^(d+1); a minimal
// solution touching the cutoff raises BoundTooSmall.
BaseSolutionSet base_solutions(const IntMatrix& d_matrix, const IntVector& rhs, long delta,
                               const GraverParams& params = {});

struct SolutionDecomposition {
    IntVector base;
    std::vector<std::pair<IntVector, BigInt>> graver_multiset;
};

// x = base + sum multiplicity * g by greedy subtraction of nonnegative
// Graver elements; the remainder is irreducible.
SolutionDecomposition decompose_solution(const IntMatrix& d_matrix, const IntVector& x,
                                         const IntVector& rhs, long delta,
                                         const GraverParams& params = {});

}  // namespace fourblock
