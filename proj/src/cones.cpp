#include "fourblock/cones.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "fourblock/milp.hpp"

namespace fourblock {

namespace {

bool lex_less(const IntVector& a, const IntVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (b(i) < a(i)) return false;
    }
    return false;
}

// Primitive integer kernel vector of a (d-1) x d full-rank rational system.
IntVector kernel_direction(const RatMatrix& rows) {
    const Eigen::Index d = rows.cols();
    RatMatrix w = rows;
    std::vector<Eigen::Index> pivot_of_col(static_cast<size_t>(d), -1);
    Eigen::Index r = 0;
    for (Eigen::Index col = 0; col < d && r < w.rows(); ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = r; i < w.rows(); ++i)
            if (!w(i, col).is_zero()) { pivot = i; break; }
        if (pivot < 0) continue;
        if (pivot != r) w.row(r).swap(w.row(pivot));
        Rational inv_p = Rational(1) / w(r, col);
        for (Eigen::Index j = col; j < d; ++j) w(r, j) *= inv_p;
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            if (i == r || w(i, col).is_zero()) continue;
            Rational f = w(i, col);
            for (Eigen::Index j = col; j < d; ++j) w(i, j) -= f * w(r, j);
        }
        pivot_of_col[static_cast<size_t>(col)] = r;
        ++r;
    }
    // one free column spans the kernel
    Eigen::Index free_col = -1;
    for (Eigen::Index col = 0; col < d; ++col)
        if (pivot_of_col[static_cast<size_t>(col)] < 0) { free_col = col; break; }
    if (free_col < 0) fail(ErrorCode::DomainViolation, "kernel_direction on full-rank square system");
    RatVector x = RatVector::Constant(d, Rational(0));
    x(free_col) = Rational(1);
    for (Eigen::Index col = 0; col < d; ++col) {
        Eigen::Index pr = pivot_of_col[static_cast<size_t>(col)];
        if (pr >= 0) x(col) = -w(pr, free_col);
    }
    // clear denominators, reduce
    BigInt l(1);
    for (Eigen::Index i = 0; i < d; ++i) l = lcm(l, x(i).den());
    IntVector xi(d);
    for (Eigen::Index i = 0; i < d; ++i) xi(i) = (x(i) * Rational(l)).to_integer();
    return primitive(xi);
}

}  // namespace

BasisSet enumerate_bases(int d, long delta, const ConeParams& params) {
    if (d < 1 || delta < 1) fail(ErrorCode::DomainViolation, "enumerate_bases needs d >= 1, delta >= 1");
    const long range = 2 * delta + 1;
    double total = 1;
    for (int i = 0; i < d * d; ++i) {
        total *= static_cast<double>(range);
        if (total > static_cast<double>(params.enumeration_cap))
            fail(ErrorCode::ParamsTooLarge, "basis enumeration size exceeds the configured cap");
    }
    BasisSet out;
    out.d = d;
    out.bound = delta;
    std::vector<long> entries(static_cast<size_t>(d * d), -delta);
    while (true) {
        IntMatrix m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = BigInt(entries[static_cast<size_t>(i * d + j)]);
        if (!det(m).is_zero()) out.bases.push_back(std::move(m));
        int pos = d * d - 1;
        while (pos >= 0 && entries[static_cast<size_t>(pos)] == delta) {
            entries[static_cast<size_t>(pos)] = -delta;
            --pos;
        }
        if (pos < 0) break;
        ++entries[static_cast<size_t>(pos)];
    }
    return out;
}

bool in_cone_of_basis(const IntMatrix& basis, const RatVector& x) {
    RatVector y = inverse(basis) * x;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i).sign() < 0) return false;
    return true;
}

std::vector<int> generating_basis_indices(const RatVector& witness, const BasisSet& bases) {
    std::vector<int> out;
    for (size_t i = 0; i < bases.bases.size(); ++i)
        if (in_cone_of_basis(bases.bases[i], witness)) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<IntMatrix> generating_bases(const RatVector& witness, const BasisSet& bases) {
    std::vector<IntMatrix> out;
    for (int idx : generating_basis_indices(witness, bases))
        out.push_back(bases.bases[static_cast<size_t>(idx)]);
    return out;
}

namespace {

// Distinct facet-normal directions (adjugate rows up to sign and scale).
std::vector<IntVector> facet_normals(const std::vector<IntMatrix>& bases) {
    std::map<std::string, IntVector> seen;
    for (const auto& u : bases) {
        IntMatrix adj = adjugate(u);
        for (Eigen::Index i = 0; i < adj.rows(); ++i) {
            IntVector row = adj.row(i).transpose();
            bool zero = true;
            for (Eigen::Index j = 0; j < row.size(); ++j)
                if (!row(j).is_zero()) { zero = false; break; }
            if (zero) continue;
            IntVector p = primitive(row);
            // canonical sign: first nonzero entry positive
            for (Eigen::Index j = 0; j < p.size(); ++j) {
                if (p(j).is_zero()) continue;
                if (p(j).sign() < 0) p = -p;
                break;
            }
            std::string key;
            for (Eigen::Index j = 0; j < p.size(); ++j) key += p(j).str() + ",";
            seen.emplace(std::move(key), std::move(p));
        }
    }
    std::vector<IntVector> out;
    out.reserve(seen.size());
    for (auto& [k, v] : seen) out.push_back(std::move(v));
    return out;
}

// All primitive directions spanned by d-1 linearly independent normals.
std::vector<IntVector> candidate_directions(const std::vector<IntMatrix>& bases, int d) {
    std::vector<IntVector> cands;
    if (d == 1) {
        IntVector e(1);
        e(0) = BigInt(1);
        cands.push_back(e);
        cands.push_back(-e);
        return cands;
    }
    std::vector<IntVector> normals = facet_normals(bases);
    const int k = d - 1;
    std::vector<int> pick(static_cast<size_t>(k));
    std::map<std::string, IntVector> seen;
    std::function<void(int, int)> rec = [&](int start, int chosen) {
        if (chosen == k) {
            RatMatrix rows(k, d);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < d; ++j)
                    rows(i, j) = Rational(normals[static_cast<size_t>(pick[static_cast<size_t>(i)])](j));
            if (rank(rows) < k) return;
            IntVector dir = kernel_direction(rows);
            for (const IntVector& v : {dir, IntVector(-dir)}) {
                std::string key;
                for (Eigen::Index j = 0; j < v.size(); ++j) key += v(j).str() + ",";
                seen.emplace(std::move(key), v);
            }
            return;
        }
        for (int i = start; i < static_cast<int>(normals.size()); ++i) {
            pick[static_cast<size_t>(chosen)] = i;
            rec(i + 1, chosen + 1);
        }
    };
    rec(0, 0);
    std::vector<IntVector> out;
    out.reserve(seen.size());
    for (auto& [key, v] : seen) out.push_back(std::move(v));
    return out;
}

}  // namespace

GeneratorSet intersection_generators(const std::vector<IntMatrix>& gen_bases) {
    if (gen_bases.empty()) fail(ErrorCode::DomainViolation, "intersection of an empty basis family");
    const int d = static_cast<int>(gen_bases.front().rows());
    std::vector<RatMatrix> inverses;
    inverses.reserve(gen_bases.size());
    for (const auto& u : gen_bases) inverses.push_back(inverse(u));
    auto in_all = [&](const IntVector& v) {
        RatVector x = to_rational(v);
        for (const auto& inv : inverses) {
            RatVector y = inv * x;
            for (Eigen::Index i = 0; i < y.size(); ++i)
                if (y(i).sign() < 0) return false;
        }
        return true;
    };
    GeneratorSet out;
    for (const IntVector& cand : candidate_directions(gen_bases, d)) {
        if (!in_all(cand)) continue;
        bool dup = false;
        for (const auto& g : out.generators)
            if (g == cand) { dup = true; break; }
        if (!dup) out.generators.push_back(cand);
    }
    std::sort(out.generators.begin(), out.generators.end(), lex_less);
    return out;
}

BigInt compute_psi(const BasisSet& bases) {
    BigInt psi(1);
    for (const auto& u : bases.bases) psi = lcm(psi, abs(det(u)));
    return psi;
}

BigInt compute_phi(int d, long delta, const ConeParams& params) {
    BasisSet bases = enumerate_bases(d, delta, params);
    BigInt phi(delta);
    for (const IntVector& cand : candidate_directions(bases.bases, d)) {
        BigInt n = linf_norm(cand);
        if (n > phi) phi = n;
    }
    if (phi < BigInt(1)) phi = BigInt(1);
    return phi;
}

CaratheodorySelection caratheodory_select(const GeneratorSet& p, const RatVector& witness) {
    const int d = static_cast<int>(witness.size());
    const int np = static_cast<int>(p.generators.size());
    std::vector<int> pick;
    CaratheodorySelection sel;
    bool found = false;
    std::function<void(int, int)> rec = [&](int start, int need) {
        if (found) return;
        if (need == 0) {
            const int k = static_cast<int>(pick.size());
            RatMatrix v(d, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < d; ++i)
                    v(i, j) = Rational(p.generators[static_cast<size_t>(pick[static_cast<size_t>(j)])](i));
            if (k > 0 && rank(v) < k) return;
            auto mu = k == 0 ? std::optional<RatVector>(RatVector(0)) : solve_full_column_rank(v, witness);
            if (!mu) return;
            if (k == 0) {
                for (Eigen::Index i = 0; i < witness.size(); ++i)
                    if (!witness(i).is_zero()) return;
            }
            for (int j = 0; j < k; ++j)
                if ((*mu)(j).sign() <= 0) return;
            found = true;
            sel.mu = *mu;
            for (int j = 0; j < k; ++j)
                sel.v.push_back(p.generators[static_cast<size_t>(pick[static_cast<size_t>(j)])]);
            return;
        }
        for (int i = start; i + need <= np; ++i) {
            pick.push_back(i);
            rec(i + 1, need - 1);
            pick.pop_back();
            if (found) return;
        }
    };
    for (int size = 0; size <= d && !found; ++size) rec(0, size);
    if (!found) fail(ErrorCode::NotInCone, "witness is not in the cone of the generators");
    return sel;
}

IntMatrix extend_to_basis(const std::vector<IntVector>& v, int d) {
    IntMatrix out(d, d);
    int col = 0;
    for (const auto& x : v) {
        for (int i = 0; i < d; ++i) out(i, col) = x(i);
        ++col;
    }
    auto current_rank = [&](int cols) {
        RatMatrix m(d, cols);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = Rational(out(i, j));
        return rank(m);
    };
    for (int unit = 0; unit < d && col < d; ++unit) {
        for (int i = 0; i < d; ++i) out(i, col) = BigInt(i == unit ? 1 : 0);
        if (current_rank(col + 1) == col + 1) ++col;
    }
    if (col < d) fail(ErrorCode::DomainViolation, "extend_to_basis could not complete a basis");
    return out;
}

bool in_cone(const std::vector<IntVector>& generators, const RatVector& x) {
    const int d = static_cast<int>(x.size());
    LinearProgram lp;
    for (size_t j = 0; j < generators.size(); ++j)
        lp.add_var(VarKind::Continuous, Rational(0), std::nullopt, Rational(0));
    for (int i = 0; i < d; ++i) {
        RatVector row(static_cast<Eigen::Index>(generators.size()));
        for (size_t j = 0; j < generators.size(); ++j) row(static_cast<Eigen::Index>(j)) = Rational(generators[j](i));
        lp.add_eq(std::move(row), x(i));
    }
    return solve_lp_exact(lp).status == SolveKind::Optimal;
}

}  // namespace fourblock
