#pragma once

#include <vector>

#include "fourblock/linalg.hpp"

namespace fourblock {

// All invertible d x d integer matrices with entries in [-bound, bound],
// enumerated in a fixed row-major entry order.
struct BasisSet {
    int d = 0;
    long bound = 0;
    std::vector<IntMatrix> bases;
};

struct GeneratorSet {
    std::vector<IntVector> generators;  // primitive, pairwise distinct, sorted
};

struct ConeParams {
    long enumeration_cap = 1000000;  // on (2*bound+1)^(d*d)
};

BasisSet enumerate_bases(int d, long delta, const ConeParams& params = {});

// U is generating for the witness iff U^{-1} witness >= 0 componentwise.
std::vector<int> generating_basis_indices(const RatVector& witness, const BasisSet& bases);
std::vector<IntMatrix> generating_bases(const RatVector& witness, const BasisSet& bases);

// Generators of the intersection cone of the given bases, from every choice
// of d-1 linearly independent facet normals (adjugate rows), oriented into
// the cone and filtered by membership in all cones. d = 1 is the sign ray.
GeneratorSet intersection_generators(const std::vector<IntMatrix>& gen_bases);

// Psi = lcm of |det U|: Psi * v has integral coordinates in any basis whose
// cone contains v.
BigInt compute_psi(const BasisSet& bases);

// Phi = max(delta, sup norm of the candidate-generator superset).
BigInt compute_phi(int d, long delta, const ConeParams& params = {});

struct CaratheodorySelection {
    std::vector<IntVector> v;  // linearly independent, |v| <= d
    RatVector mu;              // strictly positive, witness = sum mu_i v_i
};

// Smallest (by size, then enumeration order) subset of P that conically
// generates the witness with strictly positive multipliers.
CaratheodorySelection caratheodory_select(const GeneratorSet& p, const RatVector& witness);

// Square basis with the columns of V first, completed by standard unit
// vectors.
IntMatrix extend_to_basis(const std::vector<IntVector>& v, int d);

// exact membership tests used across modules and tests
bool in_cone_of_basis(const IntMatrix& basis, const RatVector& x);
bool in_cone(const std::vector<IntVector>& generators, const RatVector& x);

}  // namespace fourblock
