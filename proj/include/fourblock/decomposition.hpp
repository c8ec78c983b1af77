#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fourblock/arrangement.hpp"
#include "fourblock/cones.hpp"

namespace fourblock {

enum class SchemeKind { Zero, Plus };  // offset 0, or t_dec * psi

struct SchemeHyperplane {
    int basis_index;
    int row;
    SchemeKind kind;
    Hyperplane h;  // normal = row of inverse(basis)
};

// Hyperplane family, modulus and multipliers for dimension d and coefficient
// bound delta; one scheme serves every diagonal block with entries <= delta.
struct DecompositionScheme {
    int d = 0;
    long delta = 0;
    long t_dec = 0;
    BigInt psi, phi, modulus;
    BasisSet delta_bases;  // generating-basis candidates
    BasisSet basis_list;   // all bases of the phi-hypercube; hyperplane sources
    std::vector<SchemeHyperplane> hyperplanes;
    std::map<std::string, int> basis_index_by_key;

    int hyperplane_index(int basis_index, int row, SchemeKind kind) const {
        return basis_index * 2 * d + row * 2 + (kind == SchemeKind::Plus ? 1 : 0);
    }
    int find_basis(const IntMatrix& m) const;
    static std::string basis_key(const IntMatrix& m);
};

// t_dec defaults (in the solver) to the standard-matrix column count
// (2*delta+1)^d; the modulus override exists for worked-example checks where
// a per-basis modulus is used instead of the uniform one.
DecompositionScheme build_scheme(int d, long delta, long t_dec,
                                 std::optional<BigInt> modulus_override = std::nullopt,
                                 const ConeParams& params = {});

// Affine map b -> multiset over the support R = {q, w_i : i not in S}:
// multiplicity(q) = 1, multiplicity(w_i) = (wbar^{-1} b)_i - gamma_i.
struct AffineDecomposition {
    std::vector<IntVector> support;
    RatMatrix lambda;  // |R| x d
    RatVector mu;      // |R|
    std::vector<int> s_set;
    IntMatrix wbar;
    RatVector alpha;
    RatVector gamma;  // meaningful off s_set
    int ell = 0;
};

using PositionLookup = std::function<Position(int basis_index, int row, SchemeKind kind)>;

// Constructs the map for residue r and the face described by the position
// lookup; the witness must realize that face exactly. Returns nullopt when
// the root fails integrality, which certifies an empty (r, F) domain.
std::optional<AffineDecomposition> build_affine_map(const DecompositionScheme& scheme,
                                                    const IntVector& r,
                                                    const PositionLookup& positions,
                                                    const RatVector& witness);

// Convenience: face and witness taken from a concrete point b.
std::optional<AffineDecomposition> build_affine_map_at(const DecompositionScheme& scheme,
                                                       const IntVector& r, const IntVector& b);

// Multiplicities at b; errors with DomainViolation when b is outside the
// map's (r, F) domain (non-integral or negative result).
IntVector evaluate(const AffineDecomposition& map, const IntVector& b);

// max infinity norm over the support
BigInt decomposition_order(const AffineDecomposition& map);

}  // namespace fourblock
