#include "fourblock/solver.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "fourblock/graver.hpp"

namespace fourblock {

namespace {

IntVector mod_vector(const IntVector& v, const BigInt& m) {
    IntVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = fmod(v(i), m);
    return out;
}

std::string vec_key(const IntVector& v) {
    std::string k;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        k += v(i).str();
        k += ',';
    }
    return k;
}

std::string matrix_key(const IntMatrix& m) {
    std::string k = std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ":";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            k += m(i, j).str();
            k += ',';
        }
    return k;
}

}  // namespace

FourBlockSolver::FourBlockSolver(const FourBlockInstance& inst, const SolverOptions& options)
    : inst_(inst), options_(options) {
    inst_.validate();
    if (!inst_.is_b_uniform())
        fail(ErrorCode::DomainViolation, "FourBlockSolver needs a B-uniform instance");
    if (inst_.d < 1) fail(ErrorCode::DomainViolation, "FourBlockSolver needs d >= 1");

    const long delta = std::max(1L, inst_.delta());
    long t_std = 1;
    for (int i = 0; i < inst_.d; ++i) {
        t_std *= 2 * delta + 1;
        if (t_std > 1000000) fail(ErrorCode::ParamsTooLarge, "standard matrix too wide");
    }
    scheme_ = build_scheme(inst_.d, delta, t_std, std::nullopt, options_.cone_params);
    if (!scheme_.modulus.fits_long()) fail(ErrorCode::ParamsTooLarge, "modulus out of range");

    residue_count_ = 1;
    for (int j = 0; j < inst_.s; ++j) {
        double next = static_cast<double>(residue_count_) * static_cast<double>(scheme_.modulus.to_long());
        if (next > 50000000.0) fail(ErrorCode::ParamsTooLarge, "residue enumeration too large");
        residue_count_ *= scheme_.modulus.to_long();
    }

    lifted_.reserve(static_cast<size_t>(inst_.n) * scheme_.hyperplanes.size());
    for (int i = 0; i < inst_.n; ++i)
        for (const auto& sh : scheme_.hyperplanes)
            lifted_.push_back(preimage_hyperplane(sh.h, inst_.c_blocks[static_cast<size_t>(i)],
                                                  inst_.b_bricks[static_cast<size_t>(i)]));
    ArrangementOptions arr_opts;
    arr_opts.face_budget = options_.face_budget;
    faces_ = CompactArrangement::build(lifted_, inst_.s, arr_opts);

    for (int i = 0; i < inst_.n; ++i)
        graver_.push_back(nonneg_graver(inst_.d_blocks[static_cast<size_t>(i)], delta));

    stats_.hyperplanes = static_cast<long>(lifted_.size());
    stats_.faces = faces_.num_faces();
    stats_.guesses = guess_count();
}

IntVector FourBlockSolver::residue_of(long residue_index) const {
    IntVector r = IntVector::Constant(inst_.s, BigInt(0));
    long m = scheme_.modulus.to_long();
    for (int j = inst_.s - 1; j >= 0; --j) {
        r(j) = BigInt(residue_index % m);
        residue_index /= m;
    }
    return r;
}

std::pair<long, int> FourBlockSolver::split_guess(long guess_index) const {
    long faces = faces_.num_faces();
    return {guess_index / faces, static_cast<int>(guess_index % faces)};
}

int FourBlockSolver::face_containing(const RatVector& x0) const {
    PositionVector at;
    at.reserve(static_cast<size_t>(faces_.num_classes()));
    for (const auto& cls : faces_.classes()) {
        Hyperplane h;
        h.a = to_rational(cls.a);
        h.beta = Rational(cls.beta);
        at.push_back(position_of(x0, h));
    }
    int found = -1;
    for (int f = 0; f < faces_.num_faces(); ++f) {
        if (faces_.face(f).class_pv != at) continue;
        if (found >= 0) fail(ErrorCode::DomainViolation, "point matched two faces");
        found = f;
    }
    if (found < 0) fail(ErrorCode::DomainViolation, "point matched no enumerated face");
    return found;
}

namespace {

struct FaceRows {
    std::vector<LinearRow> eq;  // over the v variables
    std::vector<LinearRow> le;
};

// Face membership of x0 = r + M v, with strict rows tightened to the integer
// lattice (a^T x0 < beta  <=>  a^T x0 <= beta - 1 for integral data).
FaceRows face_rows_for(const CompactArrangement& faces, int face, const IntVector& r,
                       const BigInt& modulus, int s) {
    FaceRows out;
    const auto& pv = faces.face(face).class_pv;
    for (int c = 0; c < faces.num_classes(); ++c) {
        const auto& cls = faces.classes()[static_cast<size_t>(c)];
        BigInt a_dot_r(0);
        for (int j = 0; j < s; ++j) a_dot_r += cls.a(j) * r(j);
        RatVector coeffs(s);
        for (int j = 0; j < s; ++j) coeffs(j) = Rational(cls.a(j) * modulus);
        switch (pv[static_cast<size_t>(c)]) {
            case Position::EQ:
                out.eq.push_back({coeffs, Rational(cls.beta - a_dot_r)});
                break;
            case Position::LT:
                out.le.push_back({coeffs, Rational(cls.beta - BigInt(1) - a_dot_r)});
                break;
            case Position::GT:
                out.le.push_back({RatVector(-coeffs), Rational(a_dot_r - cls.beta - BigInt(1))});
                break;
        }
    }
    return out;
}

}  // namespace

bool FourBlockSolver::residue_feasible(long residue_index, int face) {
    IntVector r = residue_of(residue_index);
    FaceRows rows = face_rows_for(faces_, face, r, scheme_.modulus, inst_.s);
    LinearProgram lp;
    for (int j = 0; j < inst_.s; ++j)
        lp.add_var(VarKind::Integer, Rational(0), std::nullopt, Rational(0));
    for (auto& row : rows.eq) lp.add_eq(std::move(row.coeffs), std::move(row.rhs));
    for (auto& row : rows.le) lp.add_le(std::move(row.coeffs), std::move(row.rhs));
    MilpOptions mo;
    mo.node_budget = options_.node_budget;
    return solve_milp(lp, mo).status == SolveKind::Optimal;
}

std::optional<BrickData> FourBlockSolver::brick_guess(int brick, const IntVector& r, int face) {
    const IntMatrix& c_i = inst_.c_blocks[static_cast<size_t>(brick)];
    const IntVector& b_i = inst_.b_bricks[static_cast<size_t>(brick)];
    IntVector shifted = b_i - c_i * r;
    IntVector r_i = mod_vector(shifted, scheme_.modulus);

    const int per_brick = static_cast<int>(scheme_.hyperplanes.size());
    std::string pos_key;
    pos_key.reserve(static_cast<size_t>(per_brick) + 2);
    for (int j = 0; j < per_brick; ++j)
        pos_key += position_char(faces_.position(face, brick * per_brick + j));
    std::string cache_key = pos_key + "|" + vec_key(r_i);

    std::shared_ptr<const std::optional<AffineDecomposition>> cached;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = map_cache_.find(cache_key);
        if (it != map_cache_.end()) cached = it->second;
    }
    if (!cached) {
        RatVector witness =
            to_rational(b_i) - to_rational(c_i) * faces_.face(face).witness;
        PositionLookup lookup = [this, brick, face, per_brick](int basis_index, int row,
                                                               SchemeKind kind) {
            int idx = scheme_.hyperplane_index(basis_index, row, kind);
            return faces_.position(face, brick * per_brick + idx);
        };
        auto built = std::make_shared<std::optional<AffineDecomposition>>(
            build_affine_map(scheme_, r_i, lookup, witness));
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto [it, inserted] = map_cache_.emplace(cache_key, std::move(built));
        cached = it->second;
    }
    if (!cached->has_value()) return std::nullopt;

    BrickData data;
    data.index = brick;
    data.residue = std::move(r_i);
    data.map = **cached;
    data.graver_nonneg = graver_[static_cast<size_t>(brick)];

    const std::string d_key = matrix_key(inst_.d_blocks[static_cast<size_t>(brick)]);
    for (const auto& piece : data.map.support) {
        std::string key = d_key + "|" + vec_key(piece);
        std::shared_ptr<const std::vector<IntVector>> sols;
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = base_cache_.find(key);
            if (it != base_cache_.end()) sols = it->second;
        }
        if (!sols) {
            auto computed = std::make_shared<std::vector<IntVector>>(
                base_solutions(inst_.d_blocks[static_cast<size_t>(brick)], piece,
                               std::max(1L, inst_.delta()))
                    .solutions);
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto [it, inserted] = base_cache_.emplace(key, std::move(computed));
            sols = it->second;
        }
        data.base_sets.push_back(*sols);
    }
    return data;
}

std::optional<ConfigurationProgram> FourBlockSolver::build_guess(long guess_index, bool relax_p) {
    auto [residue_index, face] = split_guess(guess_index);
    if (!residue_feasible(residue_index, face)) return std::nullopt;
    IntVector r = residue_of(residue_index);

    std::vector<BrickData> bricks;
    bricks.reserve(static_cast<size_t>(inst_.n));
    for (int i = 0; i < inst_.n; ++i) {
        auto data = brick_guess(i, r, face);
        if (!data)
            fail(ErrorCode::DomainViolation,
                 "brick map inapplicable on a residue-feasible guess");
        bricks.push_back(std::move(*data));
    }

    ConfigurationProgram cfg;
    cfg.residue = r;
    cfg.modulus = scheme_.modulus;
    cfg.s = inst_.s;
    cfg.n = inst_.n;
    cfg.objective_offset = Rational(0);
    for (int j = 0; j < inst_.s; ++j) cfg.objective_offset += Rational(inst_.c0(j) * r(j));

    LinearProgram& lp = cfg.lp;
    for (int j = 0; j < inst_.s; ++j)
        cfg.v_vars.push_back(lp.add_var(VarKind::Integer, Rational(0), std::nullopt,
                                        Rational(inst_.c0(j) * scheme_.modulus)));

    // aggregated copies: observed base solutions and Graver elements
    std::map<std::string, IntVector> observed_x, observed_g;
    for (const auto& brick : bricks) {
        for (const auto& sols : brick.base_sets)
            for (const auto& x : sols) observed_x.emplace(vec_key(x), x);
        for (const auto& g : brick.graver_nonneg) observed_g.emplace(vec_key(g), g);
    }
    std::map<std::string, int> q_index, qg_index;
    for (const auto& [key, vec] : observed_x) {
        int var = lp.add_var(VarKind::Integer, Rational(0), std::nullopt, Rational(0));
        q_index.emplace(key, static_cast<int>(cfg.q_solution.size()));
        cfg.q_solution.push_back({vec, var, -1});
    }
    for (const auto& [key, vec] : observed_g) {
        int var = lp.add_var(VarKind::Integer, Rational(0), std::nullopt, Rational(0));
        qg_index.emplace(key, static_cast<int>(cfg.q_graver.size()));
        cfg.q_graver.push_back({vec, var, -1});
    }

    VarKind p_kind = relax_p ? VarKind::Continuous : VarKind::Integer;
    struct PendingP {
        int q_slot;    // index into q_solution / q_graver
        int dec_slot;  // (brick, piece) row slot; -1 for Graver columns
    };
    std::vector<PendingP> pending;
    std::vector<std::pair<int, int>> dec_slots;  // (brick, piece) in row order
    for (const auto& brick : bricks) {
        const IntVector& cost = inst_.c_bricks[static_cast<size_t>(brick.index)];
        for (size_t k = 0; k < brick.map.support.size(); ++k) {
            int slot = static_cast<int>(dec_slots.size());
            dec_slots.push_back({brick.index, static_cast<int>(k)});
            for (const auto& x : brick.base_sets[k]) {
                Rational c(0);
                for (int j = 0; j < inst_.t; ++j) c += Rational(cost(j) * x(j));
                int var = lp.add_var(p_kind, Rational(0), std::nullopt, std::move(c));
                cfg.p_vars.push_back({brick.index, var, x, false, -1, -1});
                pending.push_back({q_index.at(vec_key(x)), slot});
            }
        }
        for (const auto& g : brick.graver_nonneg) {
            Rational c(0);
            for (int j = 0; j < inst_.t; ++j) c += Rational(cost(j) * g(j));
            int var = lp.add_var(p_kind, Rational(0), std::nullopt, std::move(c));
            cfg.p_vars.push_back({brick.index, var, g, true, -1, -1});
            pending.push_back({qg_index.at(vec_key(g)), -1});
        }
    }

    const int num_vars = lp.num_vars();
    const IntMatrix& b_mat = inst_.b_block(0);
    const Rational m_rat(scheme_.modulus);

    // family (2): A x0 + B (sum x' q_x' + sum g q_g) = b0
    cfg.global_rows = inst_.m;
    for (int row = 0; row < inst_.m; ++row) {
        RatVector coeffs = RatVector::Constant(num_vars, Rational(0));
        for (int j = 0; j < inst_.s; ++j)
            coeffs(cfg.v_vars[static_cast<size_t>(j)]) = Rational(inst_.a(row, j) * scheme_.modulus);
        for (const auto& q : cfg.q_solution) {
            BigInt c(0);
            for (int j = 0; j < inst_.t; ++j) c += b_mat(row, j) * q.vec(j);
            if (!c.is_zero()) coeffs(q.var) = Rational(c);
        }
        for (const auto& q : cfg.q_graver) {
            BigInt c(0);
            for (int j = 0; j < inst_.t; ++j) c += b_mat(row, j) * q.vec(j);
            if (!c.is_zero()) coeffs(q.var) = Rational(c);
        }
        BigInt rhs = inst_.b0(row);
        for (int j = 0; j < inst_.s; ++j) rhs -= inst_.a(row, j) * r(j);
        lp.add_eq(std::move(coeffs), Rational(rhs));
    }

    // families (3) and (4): aggregation rows, one per observed copy
    for (auto& q : cfg.q_solution) {
        q.row = static_cast<int>(lp.eq_rows.size());
        RatVector coeffs = RatVector::Constant(num_vars, Rational(0));
        coeffs(q.var) = Rational(1);
        lp.add_eq(std::move(coeffs), Rational(0));
    }
    for (auto& q : cfg.q_graver) {
        q.row = static_cast<int>(lp.eq_rows.size());
        RatVector coeffs = RatVector::Constant(num_vars, Rational(0));
        coeffs(q.var) = Rational(1);
        lp.add_eq(std::move(coeffs), Rational(0));
    }

    // family (5): per brick and piece, sum of p's = affine multiplicity
    std::vector<int> dec_row_of(dec_slots.size());
    for (size_t slot = 0; slot < dec_slots.size(); ++slot) {
        auto [brick_idx, piece] = dec_slots[slot];
        const BrickData& brick = bricks[static_cast<size_t>(brick_idx)];
        const IntMatrix& c_i = inst_.c_blocks[static_cast<size_t>(brick_idx)];
        const IntVector& b_i = inst_.b_bricks[static_cast<size_t>(brick_idx)];
        RatVector coeffs = RatVector::Constant(num_vars, Rational(0));
        RatMatrix lam_c = brick.map.lambda * to_rational(c_i);  // |R| x s
        for (int j = 0; j < inst_.s; ++j) {
            Rational c = lam_c(piece, j) * m_rat;
            if (!c.is_zero()) coeffs(cfg.v_vars[static_cast<size_t>(j)]) = std::move(c);
        }
        RatVector rhs_vec = brick.map.lambda * to_rational(IntVector(b_i - c_i * r)) + brick.map.mu;
        dec_row_of[slot] = static_cast<int>(lp.eq_rows.size());
        lp.add_eq(std::move(coeffs), rhs_vec(piece));
    }

    // wire the p columns into their aggregation and multiplicity rows
    for (size_t pi = 0; pi < cfg.p_vars.size(); ++pi) {
        auto& p = cfg.p_vars[pi];
        const PendingP& links = pending[pi];
        if (p.graver) {
            auto& agg = cfg.q_graver[static_cast<size_t>(links.q_slot)];
            lp.eq_rows[static_cast<size_t>(agg.row)].coeffs(p.var) = Rational(-1);
            p.agg_row = agg.row;
        } else {
            auto& agg = cfg.q_solution[static_cast<size_t>(links.q_slot)];
            lp.eq_rows[static_cast<size_t>(agg.row)].coeffs(p.var) = Rational(-1);
            p.agg_row = agg.row;
            p.dec_row = dec_row_of[static_cast<size_t>(links.dec_slot)];
            lp.eq_rows[static_cast<size_t>(p.dec_row)].coeffs(p.var) = Rational(1);
        }
    }

    // face rows on x0 = r + M v
    FaceRows face_rows = face_rows_for(faces_, face, r, scheme_.modulus, inst_.s);
    for (auto& row : face_rows.eq) {
        RatVector coeffs = RatVector::Constant(num_vars, Rational(0));
        coeffs.head(inst_.s) = row.coeffs;
        lp.add_eq(std::move(coeffs), std::move(row.rhs));
    }
    cfg.face_row_count = 0;
    for (auto& row : face_rows.le) {
        RatVector coeffs = RatVector::Constant(num_vars, Rational(0));
        coeffs.head(inst_.s) = row.coeffs;
        lp.add_le(std::move(coeffs), std::move(row.rhs));
        ++cfg.face_row_count;
    }
    cfg.bricks = std::move(bricks);
    return cfg;
}

Solution FourBlockSolver::reconstruct(const ConfigurationProgram& program,
                                      const MilpResult& result) const {
    if (result.status != SolveKind::Optimal)
        fail(ErrorCode::DomainViolation, "reconstruct needs an optimal result");
    RatVector full = integral_vertex_restore(program.lp, result.assignment);

    Solution sol;
    sol.x0 = IntVector(program.s);
    for (int j = 0; j < program.s; ++j)
        sol.x0(j) = program.residue(j) +
                    program.modulus * full(program.v_vars[static_cast<size_t>(j)]).to_integer();
    sol.x_bricks.assign(static_cast<size_t>(program.n), IntVector::Constant(inst_.t, BigInt(0)));
    for (const auto& p : program.p_vars) {
        BigInt count = full(p.var).to_integer();
        if (count.is_zero()) continue;
        sol.x_bricks[static_cast<size_t>(p.brick)] += p.vec * count;
    }
    sol.objective = solution_objective(inst_, sol.x0, sol.x_bricks);
    Rational expect = result.value + program.objective_offset;
    if (Rational(sol.objective) != expect)
        fail(ErrorCode::ReconstructionMismatch, "objective drifted during reconstruction");
    CheckReport check = check_solution(inst_, sol);
    if (!check.ok)
        fail(ErrorCode::ReconstructionMismatch, "reconstructed solution invalid: " + check.violation);
    return sol;
}

SolveStatus FourBlockSolver::run() {
    auto start = std::chrono::steady_clock::now();
    const long total = guess_count();

    enum class Kind { Skipped, Infeasible, Optimal, Unbounded };
    struct Outcome {
        Kind kind = Kind::Skipped;
        Rational value;
        long nodes = 0;
        long pivots = 0;
    };
    std::vector<Outcome> outcomes(static_cast<size_t>(total));
    std::atomic<long> next{0};
    std::atomic<bool> stop{false};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(std::max(1, options_.threads)));
    std::mutex best_mutex;
    std::optional<Rational> shared_best;  // strict cutoff across guesses

    auto worker = [&](int wid) {
        try {
            while (!stop.load(std::memory_order_relaxed)) {
                long g = next.fetch_add(1);
                if (g >= total) break;
                auto program = build_guess(g);
                if (!program) continue;
                MilpOptions mo;
                mo.node_budget = options_.node_budget;
                {
                    std::lock_guard<std::mutex> lock(best_mutex);
                    if (shared_best) mo.cutoff = *shared_best - program->objective_offset;
                }
                MilpResult res = solve_milp(program->lp, mo);
                Outcome& out = outcomes[static_cast<size_t>(g)];
                out.nodes = res.nodes;
                out.pivots = res.pivots;
                switch (res.status) {
                    case SolveKind::Infeasible:
                        out.kind = Kind::Infeasible;
                        break;
                    case SolveKind::Unbounded:
                        out.kind = Kind::Unbounded;
                        stop.store(true, std::memory_order_relaxed);
                        break;
                    case SolveKind::Optimal:
                        out.kind = Kind::Optimal;
                        out.value = res.value + program->objective_offset;
                        {
                            std::lock_guard<std::mutex> lock(best_mutex);
                            if (!shared_best || out.value < *shared_best) shared_best = out.value;
                        }
                        break;
                }
            }
        } catch (...) {
            errors[static_cast<size_t>(wid)] = std::current_exception();
            stop.store(true, std::memory_order_relaxed);
        }
    };

    const int threads = std::max(1, options_.threads);
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    SolveStatus status;
    bool unbounded = false;
    std::optional<Rational> best;
    long best_guess = -1;
    for (long g = 0; g < total; ++g) {
        const Outcome& out = outcomes[static_cast<size_t>(g)];
        stats_.milp_nodes += out.nodes;
        stats_.lp_pivots += out.pivots;
        if (out.kind == Kind::Skipped) continue;
        ++stats_.guesses_solved;
        if (out.kind == Kind::Unbounded) unbounded = true;
        if (out.kind == Kind::Optimal && (!best || out.value < *best)) {
            best = out.value;
            best_guess = g;
        }
    }

    if (unbounded) {
        status.outcome = SolveOutcome::Unbounded;
    } else if (best) {
        auto program = build_guess(best_guess);
        if (!program) fail(ErrorCode::DomainViolation, "winning guess vanished on rebuild");
        MilpOptions mo;
        mo.node_budget = options_.node_budget;
        MilpResult res = solve_milp(program->lp, mo);
        if (res.status != SolveKind::Optimal || res.value + program->objective_offset != *best)
            fail(ErrorCode::DomainViolation, "winning guess not reproducible");
        status.outcome = SolveOutcome::Optimal;
        status.solution = reconstruct(*program, res);
    } else {
        status.outcome = SolveOutcome::Infeasible;
    }
    stats_.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    status.stats = stats_;
    return status;
}

SolveStatus solve(const FourBlockInstance& inst, const SolverOptions& options) {
    inst.validate();
    if (inst.d == 0) {
        // pad a zero local row so the scheme machinery has a dimension to work in
        FourBlockInstance padded = inst;
        padded.d = 1;
        padded.c_blocks.clear();
        padded.d_blocks.clear();
        padded.b_bricks.clear();
        for (int i = 0; i < inst.n; ++i) {
            padded.c_blocks.push_back(IntMatrix::Constant(1, inst.s, BigInt(0)));
            padded.d_blocks.push_back(IntMatrix::Constant(1, inst.t, BigInt(0)));
            padded.b_bricks.push_back(IntVector::Constant(1, BigInt(0)));
        }
        return solve(padded, options);
    }
    if (!inst.is_b_uniform()) {
        ReductionResult red = reduce_to_b_uniform(inst);
        SolveStatus reduced = solve(red.instance, options);
        if (reduced.outcome == SolveOutcome::Optimal)
            reduced.solution = lift_reduced_solution(inst, red, *reduced.solution);
        return reduced;
    }
    FourBlockSolver solver(inst, options);
    return solver.run();
}

}  // namespace fourblock
