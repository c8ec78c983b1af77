#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "fourblock/rational.hpp"

namespace fourblock {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = DenseMatrix<BigInt>;
using IntVector = DenseVector<BigInt>;
using RatMatrix = DenseMatrix<Rational>;
using RatVector = DenseVector<Rational>;

RatMatrix to_rational(const IntMatrix& m);
RatVector to_rational(const IntVector& v);

// Rounds an exactly-integral rational matrix/vector back to integers.
IntMatrix to_integral(const RatMatrix& m);
IntVector to_integral(const RatVector& v);

// Exact determinant via fraction-free (Bareiss) elimination.
BigInt det(const IntMatrix& m);
Rational det(const RatMatrix& m);

// Exact inverse; throws Singular when det = 0.
RatMatrix inverse(const RatMatrix& m);
inline RatMatrix inverse(const IntMatrix& m) { return inverse(to_rational(m)); }

// adj(M) = det(M) * M^{-1}, integral for integral M (also valid for singular
// M only in dimension <= 1; we never need that case).
IntMatrix adjugate(const IntMatrix& m);

// v / gcd(entries), direction preserved; throws ZeroVector on v = 0.
IntVector primitive(const IntVector& v);

// lcm of positive integers, 1 for the empty list.
BigInt lcm_all(const std::vector<BigInt>& xs);

// Column rank by exact elimination.
int rank(const RatMatrix& m);

// Unique solution of A x = b when A has full column rank and the system is
// consistent; nullopt when inconsistent. Precondition: full column rank.
std::optional<RatVector> solve_full_column_rank(const RatMatrix& a, const RatVector& b);

BigInt linf_norm(const IntVector& v);
Rational linf_norm(const RatVector& v);

std::string format_vector(const IntVector& v);
std::string format_vector(const RatVector& v);

// Scales (a, beta) by a positive rational so all entries become coprime
// integers; orientation (and hence the sign of a^T x - beta) is preserved.
void integerize_row(const RatVector& a, const Rational& beta, IntVector* a_out, BigInt* beta_out);

}  // namespace fourblock
