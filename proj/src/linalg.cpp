#include "fourblock/linalg.hpp"

#include <sstream>

namespace fourblock {

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
    return r;
}

RatVector to_rational(const IntVector& v) {
    RatVector r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = Rational(v(i));
    return r;
}

IntMatrix to_integral(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_integer();
    return r;
}

IntVector to_integral(const RatVector& v) {
    IntVector r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i).to_integer();
    return r;
}

namespace {

// Fraction-free elimination on an integer working copy; returns the
// determinant. Row swaps tracked through the sign.
BigInt bareiss_det(IntMatrix m) {
    const Eigen::Index n = m.rows();
    if (n == 0) return BigInt(1);
    BigInt prev(1);
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            Eigen::Index pivot = -1;
            for (Eigen::Index i = k + 1; i < n; ++i)
                if (!m(i, k).is_zero()) { pivot = i; break; }
            if (pivot < 0) return BigInt(0);
            m.row(k).swap(m.row(pivot));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j)
                m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
            m(i, k) = BigInt(0);
        }
        prev = m(k, k);
    }
    BigInt d = m(n - 1, n - 1);
    return sign < 0 ? -d : d;
}

}  // namespace

BigInt det(const IntMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "det of non-square matrix");
    return bareiss_det(m);
}

Rational det(const RatMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "det of non-square matrix");
    const Eigen::Index n = m.rows();
    // Clear denominators row by row, then run the integer elimination.
    IntMatrix w(n, n);
    Rational scale(1);
    for (Eigen::Index i = 0; i < n; ++i) {
        BigInt l(1);
        for (Eigen::Index j = 0; j < n; ++j) l = lcm(l, m(i, j).den());
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = (m(i, j) * Rational(l)).to_integer();
        scale /= Rational(l);
    }
    return Rational(bareiss_det(std::move(w))) * scale;
}

namespace {

BigInt checked_div(const BigInt& a, const BigInt& b) {
    if (mpz_divisible_p(a.raw().get_mpz_t(), b.raw().get_mpz_t()) == 0)
        fail(ErrorCode::DomainViolation, "fraction-free step produced a non-exact division");
    return a / b;
}

}  // namespace

RatMatrix inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
    const Eigen::Index n = m.rows();
    if (n == 0) return RatMatrix(0, 0);
    // Clear denominators per row; inverse(S*M) * S = inverse(M).
    IntMatrix w(n, 2 * n);
    std::vector<BigInt> row_scale(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        BigInt l(1);
        for (Eigen::Index j = 0; j < n; ++j) l = lcm(l, m(i, j).den());
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = (m(i, j) * Rational(l)).to_integer();
        for (Eigen::Index j = 0; j < n; ++j) w(i, n + j) = BigInt(i == j ? 1 : 0);
        row_scale[static_cast<size_t>(i)] = l;
    }
    // Fraction-free Gauss-Jordan (Montante); every intermediate stays integral
    // and the left block ends as p*I for the shared final pivot p.
    BigInt prev(1);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = k; i < n; ++i)
            if (!w(i, k).is_zero()) { pivot = i; break; }
        if (pivot < 0) fail(ErrorCode::Singular, "matrix has zero determinant");
        if (pivot != k) w.row(k).swap(w.row(pivot));
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == k) continue;
            for (Eigen::Index j = 0; j < 2 * n; ++j) {
                if (j == k) continue;
                w(i, j) = checked_div(w(k, k) * w(i, j) - w(i, k) * w(k, j), prev);
            }
            w(i, k) = BigInt(0);
        }
        prev = w(k, k);
    }
    RatMatrix inv(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            inv(i, j) = Rational(w(i, n + j), w(i, i)) * Rational(row_scale[static_cast<size_t>(j)]);
    return inv;
}

IntMatrix adjugate(const IntMatrix& m) {
    BigInt d = det(m);
    if (d.is_zero()) fail(ErrorCode::Singular, "adjugate of singular matrix unsupported");
    RatMatrix adj = inverse(to_rational(m)) * Rational(d);
    return to_integral(adj);
}

IntVector primitive(const IntVector& v) {
    BigInt g(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
    if (g.is_zero()) fail(ErrorCode::ZeroVector, "primitive of zero vector");
    IntVector r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i) / g;
    return r;
}

BigInt lcm_all(const std::vector<BigInt>& xs) {
    BigInt l(1);
    for (const BigInt& x : xs) {
        if (x.sign() <= 0) fail(ErrorCode::DomainViolation, "lcm_all requires positive integers");
        l = lcm(l, x);
    }
    return l;
}

int rank(const RatMatrix& m) {
    RatMatrix w = m;
    int r = 0;
    for (Eigen::Index col = 0; col < w.cols() && r < w.rows(); ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = r; i < w.rows(); ++i)
            if (!w(i, col).is_zero()) { pivot = i; break; }
        if (pivot < 0) continue;
        if (pivot != r) w.row(r).swap(w.row(pivot));
        Rational inv_p = Rational(1) / w(r, col);
        for (Eigen::Index j = col; j < w.cols(); ++j) w(r, j) *= inv_p;
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            if (i == r || w(i, col).is_zero()) continue;
            Rational f = w(i, col);
            for (Eigen::Index j = col; j < w.cols(); ++j) w(i, j) -= f * w(r, j);
        }
        ++r;
    }
    return r;
}

std::optional<RatVector> solve_full_column_rank(const RatMatrix& a, const RatVector& b) {
    const Eigen::Index rows = a.rows(), cols = a.cols();
    RatMatrix w(rows, cols + 1);
    w.block(0, 0, rows, cols) = a;
    w.col(cols) = b;
    Eigen::Index r = 0;
    std::vector<Eigen::Index> pivot_col;
    for (Eigen::Index col = 0; col < cols && r < rows; ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = r; i < rows; ++i)
            if (!w(i, col).is_zero()) { pivot = i; break; }
        if (pivot < 0) continue;
        if (pivot != r) w.row(r).swap(w.row(pivot));
        Rational inv_p = Rational(1) / w(r, col);
        for (Eigen::Index j = col; j <= cols; ++j) w(r, j) *= inv_p;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || w(i, col).is_zero()) continue;
            Rational f = w(i, col);
            for (Eigen::Index j = col; j <= cols; ++j) w(i, j) -= f * w(r, j);
        }
        pivot_col.push_back(col);
        ++r;
    }
    // Inconsistent row: 0 = nonzero.
    for (Eigen::Index i = r; i < rows; ++i)
        if (!w(i, cols).is_zero()) return std::nullopt;
    RatVector x = RatVector::Constant(cols, Rational(0));
    for (Eigen::Index k = 0; k < r; ++k) x(pivot_col[static_cast<size_t>(k)]) = w(k, cols);
    return x;
}

BigInt linf_norm(const IntVector& v) {
    BigInt m(0);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (abs(v(i)) > m) m = abs(v(i));
    return m;
}

Rational linf_norm(const RatVector& v) {
    Rational m(0);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (abs(v(i)) > m) m = abs(v(i));
    return m;
}

std::string format_vector(const IntVector& v) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
    os << ")";
    return os.str();
}

std::string format_vector(const RatVector& v) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
    os << ")";
    return os.str();
}

void integerize_row(const RatVector& a, const Rational& beta, IntVector* a_out, BigInt* beta_out) {
    BigInt l = beta.den();
    for (Eigen::Index i = 0; i < a.size(); ++i) l = lcm(l, a(i).den());
    IntVector ai(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) ai(i) = (a(i) * Rational(l)).to_integer();
    BigInt bi = (beta * Rational(l)).to_integer();
    BigInt g = abs(bi);
    for (Eigen::Index i = 0; i < ai.size(); ++i) g = gcd(g, ai(i));
    if (!g.is_zero() && g != BigInt(1)) {
        for (Eigen::Index i = 0; i < ai.size(); ++i) ai(i) = ai(i) / g;
        bi = bi / g;
    }
    *a_out = std::move(ai);
    *beta_out = std::move(bi);
}

}  // namespace fourblock

namespace fourblock {
const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError: return "PARSE_ERROR";
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::NonIntegerEntry: return "NON_INTEGER_ENTRY";
        case ErrorCode::Singular: return "SINGULAR";
        case ErrorCode::ZeroVector: return "ZERO_VECTOR";
        case ErrorCode::ParamsTooLarge: return "PARAMS_TOO_LARGE";
        case ErrorCode::FaceBudgetExceeded: return "FACE_BUDGET_EXCEEDED";
        case ErrorCode::NodeBudgetExceeded: return "NODE_BUDGET_EXCEEDED";
        case ErrorCode::BoundTooSmall: return "BOUND_TOO_SMALL";
        case ErrorCode::NotIntegral: return "NOT_INTEGRAL";
        case ErrorCode::NotInCone: return "NOT_IN_CONE";
        case ErrorCode::DomainViolation: return "DOMAIN_VIOLATION";
        case ErrorCode::SearchBudgetExceeded: return "SEARCH_BUDGET_EXCEEDED";
        case ErrorCode::BoxTooLarge: return "BOX_TOO_LARGE";
        case ErrorCode::ReconstructionMismatch: return "RECONSTRUCTION_MISMATCH";
        case ErrorCode::EmptyCone: return "EMPTY_CONE";
        case ErrorCode::Usage: return "USAGE";
    }
    return "UNKNOWN";
}
}  // namespace fourblock
