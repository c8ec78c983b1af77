#include "fourblock/arrangement.hpp"

#include <map>

#include "fourblock/milp.hpp"

namespace fourblock {

Position position_of(const RatVector& x, const Hyperplane& h) {
    if (x.size() != h.a.size()) fail(ErrorCode::DimensionMismatch, "point/hyperplane dimensions differ");
    Rational v = -h.beta;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!h.a(i).is_zero()) v += h.a(i) * x(i);
    int s = v.sign();
    return s < 0 ? Position::LT : (s > 0 ? Position::GT : Position::EQ);
}

namespace {

// max eps over { sym rows hold with slack eps on strict ones, 0 <= eps <= 1 };
// strictly feasible iff the optimum is positive.
std::optional<RatVector> strict_feasible(
    const std::vector<std::pair<const Hyperplane*, Position>>& rows, int dim) {
    LinearProgram lp;
    for (int i = 0; i < dim; ++i) lp.add_var(VarKind::Continuous, std::nullopt, std::nullopt, Rational(0));
    int eps = lp.add_var(VarKind::Continuous, Rational(0), Rational(1), Rational(-1));
    for (const auto& [h, sym] : rows) {
        bool degenerate = true;
        for (Eigen::Index i = 0; i < h->a.size(); ++i)
            if (!h->a(i).is_zero()) { degenerate = false; break; }
        if (degenerate) {
            int s = (-h->beta).sign();
            Position actual = s < 0 ? Position::LT : (s > 0 ? Position::GT : Position::EQ);
            if (actual != sym) return std::nullopt;
            continue;
        }
        RatVector row = RatVector::Constant(dim + 1, Rational(0));
        switch (sym) {
            case Position::EQ:
                for (int i = 0; i < dim; ++i) row(i) = h->a(i);
                lp.add_eq(std::move(row), h->beta);
                break;
            case Position::LT:
                for (int i = 0; i < dim; ++i) row(i) = h->a(i);
                row(eps) = Rational(1);
                lp.add_le(std::move(row), h->beta);
                break;
            case Position::GT:
                for (int i = 0; i < dim; ++i) row(i) = -h->a(i);
                row(eps) = Rational(1);
                lp.add_le(std::move(row), -h->beta);
                break;
        }
    }
    MilpResult r = solve_lp_exact(lp);
    if (r.status != SolveKind::Optimal || r.value.sign() >= 0) return std::nullopt;
    RatVector witness(dim);
    for (int i = 0; i < dim; ++i) witness(i) = r.assignment(i);
    return witness;
}

}  // namespace

std::optional<RatVector> face_feasible(const PositionVector& pv, const std::vector<Hyperplane>& hs) {
    if (pv.size() != hs.size()) fail(ErrorCode::DimensionMismatch, "position vector length != |H|");
    int dim = hs.empty() ? 0 : static_cast<int>(hs.front().a.size());
    std::vector<std::pair<const Hyperplane*, Position>> rows;
    rows.reserve(hs.size());
    for (size_t i = 0; i < hs.size(); ++i) rows.push_back({&hs[i], pv[i]});
    return strict_feasible(rows, dim);
}

CompactArrangement CompactArrangement::build(const std::vector<Hyperplane>& hs, int dim,
                                             const ArrangementOptions& options) {
    CompactArrangement arr;
    arr.refs_.reserve(hs.size());
    std::map<std::string, int> class_by_key;
    auto key_of = [](const IntVector& a, const BigInt& beta) {
        std::string k = beta.str();
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            k += ',';
            k += a(i).str();
        }
        return k;
    };
    for (const auto& h : hs) {
        if (static_cast<int>(h.a.size()) != dim)
            fail(ErrorCode::DimensionMismatch, "hyperplane dimension mismatch");
        HyperplaneRef ref;
        bool degenerate = true;
        for (Eigen::Index i = 0; i < h.a.size(); ++i)
            if (!h.a(i).is_zero()) { degenerate = false; break; }
        if (degenerate) {
            int s = (-h.beta).sign();
            ref.fixed = s < 0 ? Position::LT : (s > 0 ? Position::GT : Position::EQ);
            arr.refs_.push_back(ref);
            continue;
        }
        IntVector ai;
        BigInt bi;
        integerize_row(h.a, h.beta, &ai, &bi);
        std::string key = key_of(ai, bi);
        auto it = class_by_key.find(key);
        if (it != class_by_key.end()) {
            ref.class_id = it->second;
            ref.flipped = false;
        } else {
            std::string neg_key = key_of(IntVector(-ai), BigInt(-bi));
            auto nit = class_by_key.find(neg_key);
            if (nit != class_by_key.end()) {
                ref.class_id = nit->second;
                ref.flipped = true;
            } else {
                ref.class_id = static_cast<int>(arr.classes_.size());
                class_by_key.emplace(key, ref.class_id);
                arr.classes_.push_back({std::move(ai), std::move(bi)});
            }
        }
        arr.refs_.push_back(ref);
    }

    // incremental refinement over the distinct classes
    arr.faces_.push_back({PositionVector{}, RatVector::Constant(dim, Rational(0))});
    std::vector<Hyperplane> class_planes;
    class_planes.reserve(arr.classes_.size());
    for (const auto& c : arr.classes_) {
        RatVector a(dim);
        for (int i = 0; i < dim; ++i) a(i) = Rational(c.a(i));
        class_planes.push_back({std::move(a), Rational(c.beta)});
    }
    for (size_t ci = 0; ci < arr.classes_.size(); ++ci) {
        std::vector<CompactFace> next;
        for (const auto& face : arr.faces_) {
            Position at_witness = position_of(face.witness, class_planes[ci]);
            for (Position sym : {Position::LT, Position::EQ, Position::GT}) {
                if (sym == at_witness) {
                    CompactFace child = face;
                    child.class_pv.push_back(sym);
                    next.push_back(std::move(child));
                    continue;
                }
                std::vector<std::pair<const Hyperplane*, Position>> rows;
                rows.reserve(ci + 1);
                for (size_t k = 0; k < ci; ++k) rows.push_back({&class_planes[k], face.class_pv[k]});
                rows.push_back({&class_planes[ci], sym});
                auto witness = strict_feasible(rows, dim);
                if (!witness) continue;
                CompactFace child;
                child.class_pv = face.class_pv;
                child.class_pv.push_back(sym);
                child.witness = std::move(*witness);
                next.push_back(std::move(child));
            }
        }
        arr.faces_ = std::move(next);
        if (static_cast<long>(arr.faces_.size()) > options.face_budget)
            fail(ErrorCode::FaceBudgetExceeded, "arrangement exceeded the face budget");
    }
    return arr;
}

Position CompactArrangement::position(int face, int hyperplane_index) const {
    const HyperplaneRef& ref = refs_[static_cast<size_t>(hyperplane_index)];
    if (ref.class_id < 0) return ref.fixed;
    Position p = faces_[static_cast<size_t>(face)].class_pv[static_cast<size_t>(ref.class_id)];
    return ref.flipped ? flip_position(p) : p;
}

PositionVector CompactArrangement::expand(int face) const {
    PositionVector pv(refs_.size());
    for (size_t i = 0; i < refs_.size(); ++i) pv[i] = position(face, static_cast<int>(i));
    return pv;
}

Arrangement enumerate_faces(const std::vector<Hyperplane>& hs, const ArrangementOptions& options) {
    int dim = hs.empty() ? 0 : static_cast<int>(hs.front().a.size());
    CompactArrangement compact = CompactArrangement::build(hs, dim, options);
    Arrangement out;
    out.hyperplanes = hs;
    out.faces.reserve(static_cast<size_t>(compact.num_faces()));
    for (int f = 0; f < compact.num_faces(); ++f)
        out.faces.push_back({compact.expand(f), compact.face(f).witness});
    return out;
}

Hyperplane preimage_hyperplane(const Hyperplane& h, const IntMatrix& c, const IntVector& b) {
    if (h.a.size() != c.rows() || b.size() != c.rows())
        fail(ErrorCode::DimensionMismatch, "preimage dimensions inconsistent");
    Hyperplane out;
    out.a = RatVector::Constant(c.cols(), Rational(0));
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        Rational v(0);
        for (Eigen::Index i = 0; i < c.rows(); ++i)
            if (!h.a(i).is_zero() && !c(i, j).is_zero()) v -= h.a(i) * Rational(c(i, j));
        out.a(j) = std::move(v);
    }
    Rational beta = h.beta;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        if (!h.a(i).is_zero()) beta -= h.a(i) * Rational(b(i));
    out.beta = std::move(beta);
    return out;
}

PositionVector induced_brick_position(const PositionVector& lifted_pv, int brick, int per_brick) {
    PositionVector pv(static_cast<size_t>(per_brick));
    for (int j = 0; j < per_brick; ++j)
        pv[static_cast<size_t>(j)] = lifted_pv[static_cast<size_t>(brick * per_brick + j)];
    return pv;
}

std::string position_vector_str(const PositionVector& pv) {
    std::string s;
    s.reserve(pv.size());
    for (Position p : pv) s += position_char(p);
    return s;
}

}  // namespace fourblock
