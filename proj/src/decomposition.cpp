#include "fourblock/decomposition.hpp"

namespace fourblock {

std::string DecompositionScheme::basis_key(const IntMatrix& m) {
    std::string key;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) key += m(i, j).str() + ",";
    return key;
}

int DecompositionScheme::find_basis(const IntMatrix& m) const {
    auto it = basis_index_by_key.find(basis_key(m));
    if (it == basis_index_by_key.end())
        fail(ErrorCode::DomainViolation, "basis is not part of the scheme enumeration");
    return it->second;
}

DecompositionScheme build_scheme(int d, long delta, long t_dec,
                                 std::optional<BigInt> modulus_override, const ConeParams& params) {
    if (d < 1 || delta < 1 || t_dec < 1)
        fail(ErrorCode::DomainViolation, "build_scheme needs d, delta, t_dec >= 1");
    DecompositionScheme s;
    s.d = d;
    s.delta = delta;
    s.t_dec = t_dec;
    s.delta_bases = enumerate_bases(d, delta, params);
    s.psi = compute_psi(s.delta_bases);
    s.phi = compute_phi(d, delta, params);
    if (!s.phi.fits_long()) fail(ErrorCode::ParamsTooLarge, "phi out of range");
    s.basis_list = enumerate_bases(d, s.phi.to_long(), params);

    std::vector<BigInt> dets;
    dets.reserve(s.basis_list.bases.size());
    for (const auto& vbar : s.basis_list.bases) dets.push_back(abs(det(vbar)));
    s.modulus = modulus_override ? *modulus_override : BigInt(t_dec) * s.psi * lcm_all(dets);
    if (s.modulus.sign() <= 0) fail(ErrorCode::DomainViolation, "modulus must be positive");

    Rational plus_offset = Rational(BigInt(t_dec) * s.psi);
    s.hyperplanes.reserve(s.basis_list.bases.size() * 2 * static_cast<size_t>(d));
    for (size_t bi = 0; bi < s.basis_list.bases.size(); ++bi) {
        const IntMatrix& vbar = s.basis_list.bases[bi];
        s.basis_index_by_key.emplace(DecompositionScheme::basis_key(vbar), static_cast<int>(bi));
        RatMatrix inv = inverse(vbar);
        for (int i = 0; i < d; ++i) {
            RatVector normal = inv.row(i).transpose();
            s.hyperplanes.push_back({static_cast<int>(bi), i, SchemeKind::Zero, {normal, Rational(0)}});
            s.hyperplanes.push_back({static_cast<int>(bi), i, SchemeKind::Plus, {normal, plus_offset}});
        }
    }
    return s;
}

std::optional<AffineDecomposition> build_affine_map(const DecompositionScheme& scheme,
                                                    const IntVector& r,
                                                    const PositionLookup& positions,
                                                    const RatVector& witness) {
    const int d = scheme.d;
    auto gen = generating_bases(witness, scheme.delta_bases);
    GeneratorSet p = intersection_generators(gen);
    CaratheodorySelection sel = caratheodory_select(p, witness);
    const int ell = static_cast<int>(sel.v.size());

    AffineDecomposition map;
    map.ell = ell;
    IntMatrix vbar = extend_to_basis(sel.v, d);
    map.wbar = vbar * scheme.psi;
    RatMatrix wbar_inv = inverse(map.wbar);

    Rational t(BigInt(scheme.t_dec));
    RatVector wr = wbar_inv * to_rational(r);
    map.alpha = RatVector::Constant(ell, Rational(0));
    map.gamma = RatVector::Constant(ell, Rational(0));
    int scheme_basis = scheme.find_basis(vbar);
    RatVector q = RatVector::Constant(d, Rational(0));
    std::vector<int> deep;
    for (int i = 0; i < ell; ++i) {
        map.alpha(i) = rat_mod(wr(i), t);
        Position at_plus = positions(scheme_basis, i, SchemeKind::Plus);
        RatVector w_i = to_rational(IntVector(map.wbar.col(i)));
        if (at_plus == Position::LT) {
            map.s_set.push_back(i);
            q += map.alpha(i) * w_i;
        } else {
            map.gamma(i) = t + map.alpha(i);
            deep.push_back(i);
            q += map.gamma(i) * w_i;
        }
    }
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (!q(i).is_integer()) return std::nullopt;  // (r, F) domain is empty

    map.support.push_back(to_integral(q));
    for (int i : deep) map.support.push_back(IntVector(map.wbar.col(i)));

    const int rows = static_cast<int>(map.support.size());
    map.lambda = RatMatrix::Constant(rows, d, Rational(0));
    map.mu = RatVector::Constant(rows, Rational(0));
    map.mu(0) = Rational(1);
    for (int k = 0; k < static_cast<int>(deep.size()); ++k) {
        int i = deep[static_cast<size_t>(k)];
        map.lambda.row(k + 1) = wbar_inv.row(i);
        map.mu(k + 1) = -map.gamma(i);
    }
    return map;
}

std::optional<AffineDecomposition> build_affine_map_at(const DecompositionScheme& scheme,
                                                       const IntVector& r, const IntVector& b) {
    RatVector witness = to_rational(b);
    PositionLookup lookup = [&scheme, &witness](int basis_index, int row, SchemeKind kind) {
        int idx = scheme.hyperplane_index(basis_index, row, kind);
        return position_of(witness, scheme.hyperplanes[static_cast<size_t>(idx)].h);
    };
    return build_affine_map(scheme, r, lookup, witness);
}

IntVector evaluate(const AffineDecomposition& map, const IntVector& b) {
    RatVector values = map.lambda * to_rational(b) + map.mu;
    IntVector mult(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (!values(k).is_integer() || values(k).sign() < 0)
            fail(ErrorCode::DomainViolation,
                 "evaluate outside the (r, F) domain: multiplicity " + values(k).str());
        mult(k) = values(k).num();
    }
    IntVector sum = IntVector::Constant(b.size(), BigInt(0));
    for (Eigen::Index k = 0; k < mult.size(); ++k)
        sum += map.support[static_cast<size_t>(k)] * mult(k);
    if (sum != b) fail(ErrorCode::DomainViolation, "decomposition does not re-sum to b");
    return mult;
}

BigInt decomposition_order(const AffineDecomposition& map) {
    BigInt order(0);
    for (const auto& v : map.support) {
        BigInt n = linf_norm(v);
        if (n > order) order = n;
    }
    return order;
}

}  // namespace fourblock
