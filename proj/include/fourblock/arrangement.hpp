#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fourblock/linalg.hpp"

namespace fourblock {

enum class Position { LT, EQ, GT };

inline char position_char(Position p) { return p == Position::LT ? '<' : (p == Position::EQ ? '=' : '>'); }
inline Position flip_position(Position p) {
    return p == Position::LT ? Position::GT : (p == Position::GT ? Position::LT : Position::EQ);
}

// a^T x = beta; a = 0 is allowed (whole space or empty, depending on beta).
struct Hyperplane {
    RatVector a;
    Rational beta;
};

using PositionVector = std::vector<Position>;

Position position_of(const RatVector& x, const Hyperplane& h);

// Strict/exact feasibility of a partially open polyhedron, by maximizing a
// shared slack on the strict rows; returns an exact witness or nullopt.
std::optional<RatVector> face_feasible(const PositionVector& pv, const std::vector<Hyperplane>& hs);

struct Face {
    PositionVector pv;
    RatVector witness;
};

struct Arrangement {
    std::vector<Hyperplane> hyperplanes;
    std::vector<Face> faces;
};

struct ArrangementOptions {
    long face_budget = 500000;
};

// All nonempty faces, built by incremental insertion. Parallel or repeated
// input hyperplanes are grouped geometrically first, so duplicates cost
// nothing beyond the position-vector expansion.
Arrangement enumerate_faces(const std::vector<Hyperplane>& hs, const ArrangementOptions& options = {});

// L_i^{-1}(h) = (-C^T a_h, beta_h - a_h^T b): the x0-space hyperplane whose
// positions agree with h evaluated at b - C x0.
Hyperplane preimage_hyperplane(const Hyperplane& h, const IntMatrix& c, const IntVector& b);

// Slice of a lifted position vector for one brick; the lifted family is laid
// out as brick-major blocks of per_brick entries.
PositionVector induced_brick_position(const PositionVector& lifted_pv, int brick, int per_brick);

// Class-level arrangement used by the solver: faces carry symbols only for
// distinct non-degenerate hyperplane classes and expand on demand.
class CompactArrangement {
public:
    struct HyperplaneRef {
        int class_id = -1;  // -1: degenerate (a = 0)
        bool flipped = false;
        Position fixed = Position::EQ;  // symbol when degenerate
    };

    struct ClassRow {
        IntVector a;  // canonical coprime integer form, orientation preserved
        BigInt beta;
    };

    struct CompactFace {
        PositionVector class_pv;
        RatVector witness;
    };

    static CompactArrangement build(const std::vector<Hyperplane>& hs, int dim,
                                    const ArrangementOptions& options = {});

    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_classes() const { return static_cast<int>(classes_.size()); }
    const std::vector<ClassRow>& classes() const { return classes_; }
    const CompactFace& face(int f) const { return faces_[static_cast<size_t>(f)]; }

    Position position(int face, int hyperplane_index) const;

    // Expands a face into a full-length position vector over the input list.
    PositionVector expand(int face) const;

    int input_size() const { return static_cast<int>(refs_.size()); }

private:
    std::vector<HyperplaneRef> refs_;
    std::vector<ClassRow> classes_;
    std::vector<CompactFace> faces_;
};

std::string position_vector_str(const PositionVector& pv);

}  // namespace fourblock
