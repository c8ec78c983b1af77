#include "fourblock/milp.hpp"

#include <algorithm>
#include <queue>

namespace fourblock {

int LinearProgram::add_var(VarKind kind, std::optional<Rational> lower,
                           std::optional<Rational> upper, Rational cost) {
    vars.push_back({kind, std::move(lower), std::move(upper)});
    RatVector obj = RatVector::Constant(static_cast<Eigen::Index>(vars.size()), Rational(0));
    for (Eigen::Index i = 0; i < objective.size(); ++i) obj(i) = objective(i);
    obj(static_cast<Eigen::Index>(vars.size()) - 1) = std::move(cost);
    objective = std::move(obj);
    return static_cast<int>(vars.size()) - 1;
}

namespace {

// Standard-form translation: every variable becomes one or two nonnegative
// columns (shifted by a finite lower bound, or split when free); upper bounds
// and <= rows turn into slack columns on equality rows.
struct StandardForm {
    struct VarMap {
        int col_pos = -1;
        int col_neg = -1;  // set when the variable is free and split
        Rational offset;
    };
    std::vector<VarMap> var_map;
    int num_cols = 0;
    std::vector<RatVector> rows;
    std::vector<Rational> rhs;
    RatVector cost;
    Rational cost_offset;
    bool trivially_infeasible = false;
};

StandardForm standardize(const LinearProgram& lp) {
    StandardForm sf;
    const int n = lp.num_vars();
    sf.var_map.resize(static_cast<size_t>(n));

    struct PendingRow {
        const RatVector* coeffs = nullptr;  // dense over original vars, or
        int bound_var = -1;                 // a single-variable upper-bound row
        Rational rhs;
        bool is_eq = false;
    };
    std::vector<PendingRow> pending;
    pending.reserve(lp.eq_rows.size() + lp.le_rows.size() + static_cast<size_t>(n));
    for (const auto& r : lp.eq_rows) pending.push_back({&r.coeffs, -1, r.rhs, true});
    for (const auto& r : lp.le_rows) pending.push_back({&r.coeffs, -1, r.rhs, false});

    int base_cols = 0;
    for (int v = 0; v < n; ++v) {
        const auto& var = lp.vars[static_cast<size_t>(v)];
        auto& vm = sf.var_map[static_cast<size_t>(v)];
        if (var.lower && var.upper && *var.upper < *var.lower) {
            sf.trivially_infeasible = true;
            return sf;
        }
        if (var.lower) {
            vm.col_pos = base_cols++;
            vm.offset = *var.lower;
        } else {
            vm.col_pos = base_cols++;
            vm.col_neg = base_cols++;
        }
        if (var.upper) pending.push_back({nullptr, v, *var.upper, false});
    }

    int num_slacks = 0;
    for (const auto& pr : pending)
        if (!pr.is_eq) ++num_slacks;
    sf.num_cols = base_cols + num_slacks;

    int slack_at = base_cols;
    for (const auto& pr : pending) {
        RatVector row = RatVector::Constant(sf.num_cols, Rational(0));
        Rational rhs = pr.rhs;
        auto add_term = [&](int v, const Rational& c) {
            const auto& vm = sf.var_map[static_cast<size_t>(v)];
            row(vm.col_pos) += c;
            if (vm.col_neg >= 0) row(vm.col_neg) -= c;
            rhs -= c * vm.offset;
        };
        if (pr.coeffs) {
            for (int v = 0; v < n; ++v)
                if (!(*pr.coeffs)(v).is_zero()) add_term(v, (*pr.coeffs)(v));
        } else {
            add_term(pr.bound_var, Rational(1));
        }
        if (!pr.is_eq) row(slack_at++) = Rational(1);
        sf.rows.push_back(std::move(row));
        sf.rhs.push_back(std::move(rhs));
    }

    sf.cost = RatVector::Constant(sf.num_cols, Rational(0));
    sf.cost_offset = Rational(0);
    for (int v = 0; v < n; ++v) {
        const Rational& c = lp.objective(v);
        if (c.is_zero()) continue;
        const auto& vm = sf.var_map[static_cast<size_t>(v)];
        sf.cost(vm.col_pos) += c;
        if (vm.col_neg >= 0) sf.cost(vm.col_neg) -= c;
        sf.cost_offset += c * vm.offset;
    }
    return sf;
}

// Dense tableau simplex with Bland's rule; a reduced-cost row is kept
// up to date across pivots.
class Tableau {
public:
    Tableau(const StandardForm& sf, long* pivot_counter) : pivots_(pivot_counter) {
        n_struct_ = sf.num_cols;
        m_ = static_cast<int>(sf.rows.size());
        n_total_ = n_struct_ + m_;
        t_.assign(static_cast<size_t>(m_),
                  std::vector<Rational>(static_cast<size_t>(n_total_) + 1, Rational(0)));
        basis_.resize(static_cast<size_t>(m_));
        in_basis_.assign(static_cast<size_t>(n_total_), false);
        for (int i = 0; i < m_; ++i) {
            bool flip = sf.rhs[static_cast<size_t>(i)].sign() < 0;
            for (int j = 0; j < n_struct_; ++j) {
                const Rational& v = sf.rows[static_cast<size_t>(i)](j);
                if (!v.is_zero()) cell(i, j) = flip ? -v : v;
            }
            cell(i, n_total_) = flip ? -sf.rhs[static_cast<size_t>(i)] : sf.rhs[static_cast<size_t>(i)];
            cell(i, n_struct_ + i) = Rational(1);
            basis_[static_cast<size_t>(i)] = n_struct_ + i;
            in_basis_[static_cast<size_t>(n_struct_ + i)] = true;
        }
    }

    bool phase1() {
        RatVector cost = RatVector::Constant(n_total_, Rational(0));
        for (int j = n_struct_; j < n_total_; ++j) cost(j) = Rational(1);
        run(cost, /*bar_artificials=*/false, nullptr);
        Rational v(0);
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<size_t>(i)] >= n_struct_) v += cell(i, n_total_);
        if (!v.is_zero()) return false;
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<size_t>(i)] < n_struct_) continue;
            int enter = -1;
            for (int j = 0; j < n_struct_; ++j)
                if (!cell(i, j).is_zero()) { enter = j; break; }
            if (enter >= 0) {
                pivot(i, enter);
            } else {
                drop_row(i);
                --i;
            }
        }
        return true;
    }

    bool phase2(const RatVector& cost, int* unbounded_col) {
        RatVector full = RatVector::Constant(n_total_, Rational(0));
        full.head(n_struct_) = cost;
        return run(full, /*bar_artificials=*/true, unbounded_col);
    }

    RatVector solution() const {
        RatVector x = RatVector::Constant(n_struct_, Rational(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<size_t>(i)] < n_struct_)
                x(basis_[static_cast<size_t>(i)]) = cell(i, n_total_);
        return x;
    }

    RatVector ray(int enter) const {
        RatVector r = RatVector::Constant(n_struct_, Rational(0));
        r(enter) = Rational(1);
        for (int i = 0; i < m_; ++i) {
            int b = basis_[static_cast<size_t>(i)];
            if (b < n_struct_) r(b) = -cell(i, enter);
        }
        return r;
    }

private:
    Rational& cell(int i, int j) { return t_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    const Rational& cell(int i, int j) const { return t_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

    void drop_row(int i) {
        in_basis_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = false;
        t_.erase(t_.begin() + i);
        basis_.erase(basis_.begin() + i);
        --m_;
    }

    bool run(const RatVector& cost, bool bar_artificials, int* unbounded_col) {
        // z_j = c_j - c_B (B^{-1}A)_j, recomputed once then pivot-updated.
        z_.assign(static_cast<size_t>(n_total_) + 1, Rational(0));
        for (int j = 0; j <= n_total_; ++j) {
            Rational red = j < n_total_ ? cost(j) : Rational(0);
            for (int i = 0; i < m_; ++i) {
                const Rational& cb = cost(basis_[static_cast<size_t>(i)]);
                if (!cb.is_zero() && !cell(i, j).is_zero()) red -= cb * cell(i, j);
            }
            z_[static_cast<size_t>(j)] = std::move(red);
        }
        z_active_ = true;
        while (true) {
            int enter = -1;
            for (int j = 0; j < n_total_; ++j) {
                if (in_basis_[static_cast<size_t>(j)]) continue;
                if (bar_artificials && j >= n_struct_) break;
                if (z_[static_cast<size_t>(j)].sign() < 0) { enter = j; break; }
            }
            if (enter < 0) {
                z_active_ = false;
                return true;
            }
            int leave = -1;
            Rational best;
            for (int i = 0; i < m_; ++i) {
                const Rational& a = cell(i, enter);
                if (a.sign() <= 0) continue;
                Rational ratio = cell(i, n_total_) / a;
                if (leave < 0 || ratio < best ||
                    (ratio == best &&
                     basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) {
                if (unbounded_col) *unbounded_col = enter;
                z_active_ = false;
                return false;
            }
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        if (pivots_) ++(*pivots_);
        auto& pr = t_[static_cast<size_t>(row)];
        Rational inv_p = Rational(1) / pr[static_cast<size_t>(col)];
        for (auto& v : pr)
            if (!v.is_zero()) v *= inv_p;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            auto& ri = t_[static_cast<size_t>(i)];
            const Rational f = ri[static_cast<size_t>(col)];
            if (f.is_zero()) continue;
            for (int j = 0; j <= n_total_; ++j) {
                const Rational& p = pr[static_cast<size_t>(j)];
                if (!p.is_zero()) ri[static_cast<size_t>(j)] -= f * p;
            }
        }
        if (z_active_) {
            const Rational f = z_[static_cast<size_t>(col)];
            if (!f.is_zero())
                for (int j = 0; j <= n_total_; ++j) {
                    const Rational& p = pr[static_cast<size_t>(j)];
                    if (!p.is_zero()) z_[static_cast<size_t>(j)] -= f * p;
                }
        }
        in_basis_[static_cast<size_t>(basis_[static_cast<size_t>(row)])] = false;
        in_basis_[static_cast<size_t>(col)] = true;
        basis_[static_cast<size_t>(row)] = col;
    }

    int n_struct_ = 0;
    int n_total_ = 0;
    int m_ = 0;
    std::vector<std::vector<Rational>> t_;
    std::vector<Rational> z_;
    bool z_active_ = false;
    std::vector<int> basis_;
    std::vector<bool> in_basis_;
    long* pivots_;
};

RatVector map_back(const StandardForm& sf, const RatVector& x) {
    RatVector out = RatVector::Constant(static_cast<Eigen::Index>(sf.var_map.size()), Rational(0));
    for (size_t v = 0; v < sf.var_map.size(); ++v) {
        const auto& vm = sf.var_map[v];
        Rational val = x(vm.col_pos) + vm.offset;
        if (vm.col_neg >= 0) val -= x(vm.col_neg);
        out(static_cast<Eigen::Index>(v)) = std::move(val);
    }
    return out;
}

RatVector map_back_direction(const StandardForm& sf, const RatVector& r) {
    RatVector out = RatVector::Constant(static_cast<Eigen::Index>(sf.var_map.size()), Rational(0));
    for (size_t v = 0; v < sf.var_map.size(); ++v) {
        const auto& vm = sf.var_map[v];
        Rational val = r(vm.col_pos);
        if (vm.col_neg >= 0) val -= r(vm.col_neg);
        out(static_cast<Eigen::Index>(v)) = std::move(val);
    }
    return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
    Rational s(0);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!a(i).is_zero() && !b(i).is_zero()) s += a(i) * b(i);
    return s;
}

}  // namespace

MilpResult solve_lp_exact(const LinearProgram& lp, bool check_integrality) {
    MilpResult res;
    StandardForm sf = standardize(lp);
    if (sf.trivially_infeasible) {
        res.status = SolveKind::Infeasible;
        return res;
    }
    Tableau tab(sf, &res.pivots);
    if (!tab.phase1()) {
        res.status = SolveKind::Infeasible;
        return res;
    }
    int unbounded_col = -1;
    if (!tab.phase2(sf.cost, &unbounded_col)) {
        res.status = SolveKind::Unbounded;
        res.ray = map_back_direction(sf, tab.ray(unbounded_col));
        return res;
    }
    res.status = SolveKind::Optimal;
    res.assignment = map_back(sf, tab.solution());
    res.value = dot(lp.objective, res.assignment);
    if (check_integrality) {
        for (int v = 0; v < lp.num_vars(); ++v)
            if (lp.vars[static_cast<size_t>(v)].kind == VarKind::Integer &&
                !res.assignment(v).is_integer())
                fail(ErrorCode::NotIntegral, "integer variable with fractional LP value");
    }
    return res;
}

namespace {

struct Node {
    std::vector<Variable> vars;
    Rational bound;
    RatVector relax;
    long id;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;
    }
};

bool milp_feasible(LinearProgram lp, const MilpOptions& options, long* nodes, long* pivots);

MilpResult solve_milp_impl(const LinearProgram& lp, const MilpOptions& options, bool probing) {
    MilpResult best;
    best.status = SolveKind::Infeasible;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0;
    bool have_incumbent = false;
    bool settled = false;

    auto push_node = [&](std::vector<Variable> vars) {
        LinearProgram node_lp = lp;
        node_lp.vars = vars;
        MilpResult r = solve_lp_exact(node_lp);
        best.pivots += r.pivots;
        ++best.nodes;
        if (best.nodes > options.node_budget)
            fail(ErrorCode::NodeBudgetExceeded, "branch-and-bound node budget exhausted");
        if (r.status == SolveKind::Infeasible) return true;
        if (r.status == SolveKind::Unbounded) {
            // Children are restrictions of the root, so this only happens at
            // the root; an integral feasible point plus the integer-scaled
            // ray certifies an unbounded program.
            if (probing || milp_feasible(node_lp, options, &best.nodes, &best.pivots)) {
                best.status = SolveKind::Unbounded;
                best.ray = r.ray;
            } else {
                best.status = SolveKind::Infeasible;
            }
            settled = true;
            return false;
        }
        if (options.cutoff && r.value > *options.cutoff) return true;
        if (have_incumbent && r.value >= best.value) return true;
        open.push(Node{std::move(vars), std::move(r.value), std::move(r.assignment), next_id++});
        return true;
    };

    if (!push_node(lp.vars)) return best;

    while (!open.empty() && !settled) {
        Node node = open.top();
        open.pop();
        if (have_incumbent && node.bound >= best.value) continue;
        int branch_var = -1;
        Rational branch_score(0);
        for (int v = 0; v < lp.num_vars(); ++v) {
            if (lp.vars[static_cast<size_t>(v)].kind != VarKind::Integer) continue;
            const Rational& x = node.relax(v);
            if (x.is_integer()) continue;
            Rational fra = x - Rational(x.floor());
            Rational score = fra <= Rational(BigInt(1), BigInt(2)) ? fra : Rational(1) - fra;
            if (branch_var < 0 || score > branch_score) {
                branch_var = v;
                branch_score = score;
            }
        }
        if (branch_var < 0) {
            if (!have_incumbent || node.bound < best.value) {
                have_incumbent = true;
                best.status = SolveKind::Optimal;
                best.value = node.bound;
                best.assignment = node.relax;
                if (probing) break;
            }
            continue;
        }
        const Rational& x = node.relax(branch_var);
        std::vector<Variable> down = node.vars;
        down[static_cast<size_t>(branch_var)].upper = Rational(x.floor());
        std::vector<Variable> up = node.vars;
        up[static_cast<size_t>(branch_var)].lower = Rational(x.floor()) + Rational(1);
        if (!push_node(std::move(down))) break;
        if (!push_node(std::move(up))) break;
    }

    if (best.status == SolveKind::Optimal) {
        Rational check(0);
        for (int v = 0; v < lp.num_vars(); ++v)
            if (!lp.objective(v).is_zero()) check += lp.objective(v) * best.assignment(v);
        if (check != best.value)
            fail(ErrorCode::DomainViolation, "objective recomputation mismatch");
    }
    return best;
}

bool milp_feasible(LinearProgram lp, const MilpOptions& options, long* nodes, long* pivots) {
    lp.objective = RatVector::Constant(lp.num_vars(), Rational(0));
    MilpResult r = solve_milp_impl(lp, options, /*probing=*/true);
    *nodes += r.nodes;
    *pivots += r.pivots;
    return r.status == SolveKind::Optimal;
}

}  // namespace

MilpResult solve_milp(const LinearProgram& lp, const MilpOptions& options) {
    return solve_milp_impl(lp, options, /*probing=*/false);
}

RatVector integral_vertex_restore(const LinearProgram& lp, const RatVector& assignment) {
    LinearProgram fixed = lp;
    for (int v = 0; v < lp.num_vars(); ++v) {
        if (lp.vars[static_cast<size_t>(v)].kind != VarKind::Integer) continue;
        Rational val = assignment(v);
        if (!val.is_integer()) fail(ErrorCode::NotIntegral, "cannot pin fractional integer value");
        fixed.vars[static_cast<size_t>(v)].lower = val;
        fixed.vars[static_cast<size_t>(v)].upper = val;
    }
    MilpResult r = solve_lp_exact(fixed);
    if (r.status != SolveKind::Optimal)
        fail(ErrorCode::DomainViolation, "restore called on an infeasible pinning");
    for (int v = 0; v < lp.num_vars(); ++v)
        if (!r.assignment(v).is_integer())
            fail(ErrorCode::NotIntegral,
                 "basic optimum has a fractional component; TU structure violated");
    return r.assignment;
}

}  // namespace fourblock
