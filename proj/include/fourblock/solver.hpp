#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fourblock/arrangement.hpp"
#include "fourblock/decomposition.hpp"
#include "fourblock/instance.hpp"
#include "fourblock/milp.hpp"

namespace fourblock {

struct SolverOptions {
    int threads = 1;
    long face_budget = 500000;
    long node_budget = 2000000;
    ConeParams cone_params;
};

// Per-brick data for one (r, F) guess.
struct BrickData {
    int index = 0;
    IntVector residue;                       // (b_i - C_i r) mod M
    AffineDecomposition map;                 // for (residue, induced face)
    std::vector<IntVector> graver_nonneg;    // G_i
    std::vector<std::vector<IntVector>> base_sets;  // X for each support piece
};

// High-multiplicity encoding of one guess, plus the metadata needed to pull
// a solution back out of it.
struct ConfigurationProgram {
    LinearProgram lp;
    IntVector residue;          // x0 = residue + M v
    Rational objective_offset;  // c0 . residue
    BigInt modulus;
    int s = 0, n = 0;
    std::vector<int> v_vars;

    struct QVar {
        IntVector vec;
        int var;
        int row;  // aggregation row index in lp.eq_rows
    };
    std::vector<QVar> q_solution;  // keyed by base-solution vector
    std::vector<QVar> q_graver;

    struct PVar {
        int brick;
        int var;
        IntVector vec;   // the base solution or Graver element
        bool graver;
        int agg_row;     // row of family (3)/(4)
        int dec_row;     // row of family (5); -1 for Graver columns
    };
    std::vector<PVar> p_vars;

    std::vector<BrickData> bricks;

    int global_rows = 0;      // family (2) count (= m)
    int face_row_count = 0;   // inequality rows encoding the face
};

class FourBlockSolver {
public:
    FourBlockSolver(const FourBlockInstance& inst, const SolverOptions& options = {});

    SolveStatus run();

    const DecompositionScheme& scheme() const { return scheme_; }
    const CompactArrangement& lifted_faces() const { return faces_; }
    long residue_count() const { return residue_count_; }
    long face_count() const { return faces_.num_faces(); }
    long guess_count() const { return residue_count_ * faces_.num_faces(); }
    IntVector residue_of(long residue_index) const;

    // the (r, F) pair behind a lexicographic guess index
    std::pair<long, int> split_guess(long guess_index) const;

    // index of the unique face whose position vector x0 realizes
    int face_containing(const RatVector& x0) const;

    // Full per-guess pipeline. nullopt when the guess domain is provably
    // empty (residue misses the face, or a brick map is inapplicable).
    std::optional<ConfigurationProgram> build_guess(long guess_index, bool relax_p = true);

    Solution reconstruct(const ConfigurationProgram& program, const MilpResult& result) const;

    const SolveStats& stats() const { return stats_; }

private:
    bool residue_feasible(long residue_index, int face);
    std::optional<BrickData> brick_guess(int brick, const IntVector& r, int face);

    const FourBlockInstance& inst_;
    SolverOptions options_;
    DecompositionScheme scheme_;
    std::vector<Hyperplane> lifted_;  // brick-major blocks of scheme hyperplanes
    CompactArrangement faces_;
    long residue_count_ = 1;
    std::vector<std::vector<IntVector>> graver_;  // per brick

    std::mutex cache_mutex_;
    std::map<std::string, std::shared_ptr<const std::optional<AffineDecomposition>>> map_cache_;
    std::map<std::string, std::shared_ptr<const std::vector<IntVector>>> base_cache_;

    SolveStats stats_;
};

// Solves the instance end to end; non-B-uniform input goes through
// reduce_to_b_uniform first and the solution is lifted back.
SolveStatus solve(const FourBlockInstance& inst, const SolverOptions& options = {});

}  // namespace fourblock
