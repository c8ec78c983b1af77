#include "fourblock/graver.hpp"

#include <algorithm>

namespace fourblock {

namespace {

long power_cap(long base, long exponent, long cap) {
    long v = 1;
    for (long i = 0; i < exponent; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

struct LongMatrix {
    int rows = 0, cols = 0;
    std::vector<long> entries;
    long at(int r, int c) const { return entries[static_cast<size_t>(r * cols + c)]; }
};

LongMatrix to_long_matrix(const IntMatrix& m) {
    LongMatrix out;
    out.rows = static_cast<int>(m.rows());
    out.cols = static_cast<int>(m.cols());
    out.entries.resize(static_cast<size_t>(out.rows * out.cols));
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) {
            const BigInt& e = m(r, c);
            if (!e.fits_long()) fail(ErrorCode::ParamsTooLarge, "matrix entry out of range");
            out.entries[static_cast<size_t>(r * out.cols + c)] = e.to_long();
        }
    return out;
}

IntVector to_int_vector(const std::vector<long>& v) {
    IntVector out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = BigInt(v[i]);
    return out;
}

// Enumerates integer vectors with per-column ranges [lo_j, hi_j], l1 budget,
// and D g = target, pruning by per-row achievable suffix intervals.
class KernelEnumerator {
public:
    KernelEnumerator(const LongMatrix& d, std::vector<long> lo, std::vector<long> hi, long l1_budget,
                     std::vector<long> target, long work_cap)
        : d_(d), lo_(std::move(lo)), hi_(std::move(hi)), l1_(l1_budget),
          target_(std::move(target)), work_cap_(work_cap) {
        suffix_min_.assign(static_cast<size_t>((d_.cols + 1) * d_.rows), 0);
        suffix_max_.assign(static_cast<size_t>((d_.cols + 1) * d_.rows), 0);
        for (int j = d_.cols - 1; j >= 0; --j)
            for (int r = 0; r < d_.rows; ++r) {
                long c = d_.at(r, j);
                long vlo = std::min(c * lo_[static_cast<size_t>(j)], c * hi_[static_cast<size_t>(j)]);
                long vhi = std::max(c * lo_[static_cast<size_t>(j)], c * hi_[static_cast<size_t>(j)]);
                smin(j, r) = smin(j + 1, r) + vlo;
                smax(j, r) = smax(j + 1, r) + vhi;
            }
    }

    std::vector<std::vector<long>> run() {
        current_.assign(static_cast<size_t>(d_.cols), 0);
        partial_.assign(static_cast<size_t>(d_.rows), 0);
        recurse(0, l1_);
        return std::move(found_);
    }

private:
    long& smin(int j, int r) { return suffix_min_[static_cast<size_t>(j * d_.rows + r)]; }
    long& smax(int j, int r) { return suffix_max_[static_cast<size_t>(j * d_.rows + r)]; }

    void recurse(int col, long budget) {
        if (++work_ > work_cap_) fail(ErrorCode::ParamsTooLarge, "enumeration work cap exceeded");
        for (int r = 0; r < d_.rows; ++r) {
            long rest = target_[static_cast<size_t>(r)] - partial_[static_cast<size_t>(r)];
            if (rest < smin(col, r) || rest > smax(col, r)) return;
        }
        if (col == d_.cols) {
            found_.push_back(current_);
            return;
        }
        for (long v = lo_[static_cast<size_t>(col)]; v <= hi_[static_cast<size_t>(col)]; ++v) {
            long use = std::abs(v);
            if (use > budget) {
                if (v < 0) { v = -budget - 1; continue; }  // skip to the in-budget block
                break;
            }
            current_[static_cast<size_t>(col)] = v;
            for (int r = 0; r < d_.rows; ++r) partial_[static_cast<size_t>(r)] += d_.at(r, col) * v;
            recurse(col + 1, budget - use);
            for (int r = 0; r < d_.rows; ++r) partial_[static_cast<size_t>(r)] -= d_.at(r, col) * v;
        }
        current_[static_cast<size_t>(col)] = 0;
    }

    const LongMatrix& d_;
    std::vector<long> lo_, hi_;
    long l1_;
    std::vector<long> target_;
    long work_cap_;
    std::vector<long> suffix_min_, suffix_max_;
    std::vector<long> current_, partial_;
    std::vector<std::vector<long>> found_;
    long work_ = 0;
};

bool conformal_long(const std::vector<long>& x, const std::vector<long>& y) {
    for (size_t j = 0; j < x.size(); ++j) {
        if (x[j] > 0 && (y[j] < x[j])) return false;
        if (x[j] < 0 && (y[j] > x[j])) return false;
    }
    return true;
}

bool is_zero(const std::vector<long>& x) {
    for (long v : x)
        if (v != 0) return false;
    return true;
}

std::vector<IntVector> minimal_filter(const std::vector<std::vector<long>>& kernel) {
    std::vector<IntVector> out;
    for (size_t i = 0; i < kernel.size(); ++i) {
        if (is_zero(kernel[i])) continue;
        bool minimal = true;
        for (size_t k = 0; k < kernel.size() && minimal; ++k) {
            if (k == i || is_zero(kernel[k])) continue;
            if (kernel[k] != kernel[i] && conformal_long(kernel[k], kernel[i])) minimal = false;
        }
        if (minimal) out.push_back(to_int_vector(kernel[i]));
    }
    return out;
}

}  // namespace

bool conformal(const IntVector& x, const IntVector& y) {
    if (x.size() != y.size()) fail(ErrorCode::DimensionMismatch, "conformal on different lengths");
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (x(j) * y(j) < BigInt(0)) return false;
        if (abs(x(j)) > abs(y(j))) return false;
    }
    return true;
}

GraverBasis graver_basis(const IntMatrix& d_matrix, long delta, const GraverParams& params) {
    const int d = static_cast<int>(d_matrix.rows());
    const int t = static_cast<int>(d_matrix.cols());
    long l1 = power_cap(2 * d * std::max(delta, 1L) + 1, d, 1000000000L);
    LongMatrix dm = to_long_matrix(d_matrix);
    std::vector<long> lo(static_cast<size_t>(t), -l1), hi(static_cast<size_t>(t), l1);
    KernelEnumerator en(dm, std::move(lo), std::move(hi), l1,
                        std::vector<long>(static_cast<size_t>(d), 0), params.work_cap);
    GraverBasis out;
    out.matrix = d_matrix;
    out.elements = minimal_filter(en.run());
    return out;
}

std::vector<IntVector> nonneg_graver(const IntMatrix& d_matrix, long delta,
                                     const GraverParams& params) {
    const int d = static_cast<int>(d_matrix.rows());
    const int t = static_cast<int>(d_matrix.cols());
    long l1 = power_cap(2 * d * std::max(delta, 1L) + 1, d, 1000000000L);
    LongMatrix dm = to_long_matrix(d_matrix);
    std::vector<long> lo(static_cast<size_t>(t), 0), hi(static_cast<size_t>(t), l1);
    KernelEnumerator en(dm, std::move(lo), std::move(hi), l1,
                        std::vector<long>(static_cast<size_t>(d), 0), params.work_cap);
    return minimal_filter(en.run());
}

namespace {

// Fixpoint per-column upper bounds implied by rows with a dominant sign;
// columns never touched by any row keep the hard cutoff, zero columns are 0
// (they are always reducible).
std::vector<long> column_bounds(const LongMatrix& d, const std::vector<long>& rhs, long cutoff) {
    const int t = d.cols;
    std::vector<long> ub(static_cast<size_t>(t), cutoff);
    for (int j = 0; j < t; ++j) {
        bool zero_col = true;
        for (int r = 0; r < d.rows; ++r)
            if (d.at(r, j) != 0) zero_col = false;
        if (zero_col) ub[static_cast<size_t>(j)] = 0;
    }
    for (int round = 0; round < 4; ++round) {
        for (int r = 0; r < d.rows; ++r) {
            for (int j = 0; j < t; ++j) {
                long c = d.at(r, j);
                if (c == 0) continue;
                // x_j <= (rhs_r - min contribution of the others) / c  (c > 0)
                long others_min = 0, others_max = 0;
                bool overflow = false;
                for (int k = 0; k < t; ++k) {
                    if (k == j) continue;
                    long ck = d.at(r, k);
                    long u = ub[static_cast<size_t>(k)];
                    if (u > 0 && std::abs(ck) > (1L << 50) / u) { overflow = true; break; }
                    if (ck > 0)
                        others_max += ck * u;
                    else
                        others_min += ck * u;
                }
                if (overflow) continue;
                long bound;
                if (c > 0)
                    bound = (rhs[static_cast<size_t>(r)] - others_min) / c;
                else
                    bound = (others_max - rhs[static_cast<size_t>(r)]) / (-c);
                if (bound < 0) bound = 0;
                ub[static_cast<size_t>(j)] = std::min(ub[static_cast<size_t>(j)], bound);
            }
        }
    }
    return ub;
}

}  // namespace

BaseSolutionSet base_solutions(const IntMatrix& d_matrix, const IntVector& rhs, long delta,
                               const GraverParams& params) {
    const int d = static_cast<int>(d_matrix.rows());
    const int t = static_cast<int>(d_matrix.cols());
    BigInt norm = linf_norm(rhs);
    if (!norm.fits_long()) fail(ErrorCode::ParamsTooLarge, "right-hand side out of range");
    long cutoff = power_cap(2 * std::max(d, 1) * (std::max(delta, 1L) + norm.to_long()) + 1,
                            std::max(d, 1) + 1, 2000000000L);
    LongMatrix dm = to_long_matrix(d_matrix);
    std::vector<long> target(static_cast<size_t>(d));
    for (int r = 0; r < d; ++r) {
        if (!rhs(r).fits_long()) fail(ErrorCode::ParamsTooLarge, "right-hand side out of range");
        target[static_cast<size_t>(r)] = rhs(r).to_long();
    }
    std::vector<long> ub = column_bounds(dm, target, cutoff);
    long l1 = 0;
    for (long u : ub) {
        if (u > 2000000000L - l1) { l1 = 2000000000L; break; }
        l1 += u;
    }
    KernelEnumerator en(dm, std::vector<long>(static_cast<size_t>(t), 0), ub, l1, target,
                        params.work_cap);
    std::vector<std::vector<long>> sols = en.run();

    BaseSolutionSet out;
    out.matrix = d_matrix;
    out.rhs = rhs;
    for (size_t i = 0; i < sols.size(); ++i) {
        bool minimal = true;
        for (size_t k = 0; k < sols.size() && minimal; ++k) {
            if (k == i) continue;
            bool leq = true, strict = false;
            for (int j = 0; j < t && leq; ++j) {
                if (sols[k][static_cast<size_t>(j)] > sols[i][static_cast<size_t>(j)]) leq = false;
                if (sols[k][static_cast<size_t>(j)] < sols[i][static_cast<size_t>(j)]) strict = true;
            }
            if (leq && strict) minimal = false;
        }
        if (!minimal) continue;
        for (int j = 0; j < t; ++j)
            if (sols[i][static_cast<size_t>(j)] >= cutoff)
                fail(ErrorCode::BoundTooSmall, "a minimal solution touched the search cutoff");
        out.solutions.push_back(to_int_vector(sols[i]));
    }
    return out;
}

SolutionDecomposition decompose_solution(const IntMatrix& d_matrix, const IntVector& x,
                                         const IntVector& rhs, long delta,
                                         const GraverParams& params) {
    IntVector check = d_matrix * x;
    if (check != rhs) fail(ErrorCode::DomainViolation, "decompose_solution: D x != rhs");
    for (Eigen::Index j = 0; j < x.size(); ++j)
        if (x(j).sign() < 0) fail(ErrorCode::DomainViolation, "decompose_solution: x not nonnegative");

    std::vector<IntVector> gs = nonneg_graver(d_matrix, delta, params);
    SolutionDecomposition out;
    out.base = x;
    std::vector<BigInt> counts(gs.size(), BigInt(0));
    // every subtraction strictly lowers ||x||_1, so the passes terminate
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t gi = 0; gi < gs.size(); ++gi) {
            const IntVector& g = gs[gi];
            while (true) {
                bool fits = true;
                for (Eigen::Index j = 0; j < out.base.size() && fits; ++j)
                    if (out.base(j) < g(j)) fits = false;
                if (!fits) break;
                out.base -= g;
                counts[gi] += BigInt(1);
                changed = true;
            }
        }
    }
    for (size_t gi = 0; gi < gs.size(); ++gi)
        if (counts[gi].sign() > 0) out.graver_multiset.push_back({gs[gi], counts[gi]});
    return out;
}

}  // namespace fourblock
