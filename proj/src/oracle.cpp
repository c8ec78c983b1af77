#include "fourblock/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace fourblock {

namespace {

struct LongMatrix {
    int rows = 0, cols = 0;
    std::vector<long> e;
    long at(int r, int c) const { return e[static_cast<size_t>(r * cols + c)]; }
};

LongMatrix long_matrix(const IntMatrix& m, long limit) {
    LongMatrix out;
    out.rows = static_cast<int>(m.rows());
    out.cols = static_cast<int>(m.cols());
    out.e.resize(static_cast<size_t>(out.rows * out.cols));
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) {
            const BigInt& x = m(r, c);
            if (!x.fits_long() || std::abs(x.to_long()) > limit)
                fail(ErrorCode::BoxTooLarge, "oracle inputs out of the supported range");
            out.e[static_cast<size_t>(r * out.cols + c)] = x.to_long();
        }
    return out;
}

std::vector<long> long_vector(const IntVector& v, long limit) {
    std::vector<long> out(static_cast<size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!v(i).fits_long() || std::abs(v(i).to_long()) > limit)
            fail(ErrorCode::BoxTooLarge, "oracle inputs out of the supported range");
        out[static_cast<size_t>(i)] = v(i).to_long();
    }
    return out;
}

// Column-by-column enumeration with per-row achievable suffix intervals.
void enumerate_impl(const LongMatrix& d, const std::vector<long>& target, long bound,
                    std::vector<std::vector<long>>* out) {
    const int t = d.cols, rows = d.rows;
    std::vector<long> smin(static_cast<size_t>((t + 1) * std::max(rows, 1)), 0);
    std::vector<long> smax(static_cast<size_t>((t + 1) * std::max(rows, 1)), 0);
    auto mn = [&](int j, int r) -> long& { return smin[static_cast<size_t>(j * std::max(rows, 1) + r)]; };
    auto mx = [&](int j, int r) -> long& { return smax[static_cast<size_t>(j * std::max(rows, 1) + r)]; };
    for (int j = t - 1; j >= 0; --j)
        for (int r = 0; r < rows; ++r) {
            long c = d.at(r, j);
            mn(j, r) = mn(j + 1, r) + std::min(0L, c * bound);
            mx(j, r) = mx(j + 1, r) + std::max(0L, c * bound);
        }
    std::vector<long> cur(static_cast<size_t>(t), 0), partial(static_cast<size_t>(rows), 0);
    std::function<void(int)> rec = [&](int col) {
        for (int r = 0; r < rows; ++r) {
            long rest = target[static_cast<size_t>(r)] - partial[static_cast<size_t>(r)];
            if (rest < mn(col, r) || rest > mx(col, r)) return;
        }
        if (col == t) {
            out->push_back(cur);
            return;
        }
        for (long v = 0; v <= bound; ++v) {
            cur[static_cast<size_t>(col)] = v;
            for (int r = 0; r < rows; ++r) partial[static_cast<size_t>(r)] += d.at(r, col) * v;
            rec(col + 1);
            for (int r = 0; r < rows; ++r) partial[static_cast<size_t>(r)] -= d.at(r, col) * v;
        }
        cur[static_cast<size_t>(col)] = 0;
    };
    rec(0);
}

constexpr long kEntryLimit = 1L << 20;

}  // namespace

std::vector<IntVector> enumerate_solutions(const IntMatrix& d_matrix, const IntVector& b,
                                           long bound) {
    if (bound < 0) fail(ErrorCode::BoxTooLarge, "negative bound");
    LongMatrix d = long_matrix(d_matrix, kEntryLimit);
    std::vector<long> target = long_vector(b, 1L << 40);
    std::vector<std::vector<long>> raw;
    enumerate_impl(d, target, bound, &raw);
    std::vector<IntVector> out;
    out.reserve(raw.size());
    for (const auto& r : raw) {
        IntVector v(static_cast<Eigen::Index>(r.size()));
        for (size_t j = 0; j < r.size(); ++j) v(static_cast<Eigen::Index>(j)) = BigInt(r[j]);
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

struct BrickSolutions {
    std::vector<std::vector<long>> xs;       // brick solutions
    std::vector<std::vector<long>> b_image;  // B_i * x per solution (length m)
    std::vector<long> cost;                  // c_i . x per solution
};

}  // namespace

OracleReport brute_force_solve(const FourBlockInstance& inst, long box,
                               const OracleParams& params) {
    inst.validate();
    if (box < 0 || box > params.box_cap) fail(ErrorCode::BoxTooLarge, "oracle box outside cap");
    const int s = inst.s, m = inst.m, n = inst.n, t = inst.t;
    LongMatrix a = long_matrix(inst.a, kEntryLimit);
    std::vector<LongMatrix> bmat, cmat, dmat;
    for (int i = 0; i < n; ++i) {
        bmat.push_back(long_matrix(inst.b_block(i), kEntryLimit));
        cmat.push_back(long_matrix(inst.c_blocks[static_cast<size_t>(i)], kEntryLimit));
        dmat.push_back(long_matrix(inst.d_blocks[static_cast<size_t>(i)], kEntryLimit));
    }
    std::vector<long> b0 = long_vector(inst.b0, 1L << 40);
    std::vector<std::vector<long>> b_bricks, c_bricks;
    for (int i = 0; i < n; ++i) {
        b_bricks.push_back(long_vector(inst.b_bricks[static_cast<size_t>(i)], 1L << 40));
        c_bricks.push_back(long_vector(inst.c_bricks[static_cast<size_t>(i)], kEntryLimit));
    }

    // brick solution lists are cached per (brick, local rhs)
    std::vector<std::map<std::vector<long>, BrickSolutions>> cache(static_cast<size_t>(n));
    long enumerated = 0, work = 0;

    OracleReport report;
    std::optional<long> best;
    std::vector<long> best_x0;
    std::vector<int> best_choice;

    std::vector<long> x0(static_cast<size_t>(s), 0);
    while (true) {
        ++enumerated;
        if (++work > params.work_cap) fail(ErrorCode::BoxTooLarge, "oracle work cap exceeded");

        // per-brick solution sets for this x0
        bool brick_empty = false;
        std::vector<const BrickSolutions*> sols(static_cast<size_t>(n), nullptr);
        for (int i = 0; i < n && !brick_empty; ++i) {
            std::vector<long> rhs(b_bricks[static_cast<size_t>(i)]);
            for (int r = 0; r < inst.d; ++r)
                for (int j = 0; j < s; ++j)
                    rhs[static_cast<size_t>(r)] -= cmat[static_cast<size_t>(i)].at(r, j) * x0[static_cast<size_t>(j)];
            auto& slot = cache[static_cast<size_t>(i)];
            auto it = slot.find(rhs);
            if (it == slot.end()) {
                BrickSolutions bs;
                enumerate_impl(dmat[static_cast<size_t>(i)], rhs, box, &bs.xs);
                for (const auto& x : bs.xs) {
                    std::vector<long> img(static_cast<size_t>(m), 0);
                    long cost = 0;
                    for (int r = 0; r < m; ++r)
                        for (int j = 0; j < t; ++j)
                            img[static_cast<size_t>(r)] += bmat[static_cast<size_t>(i)].at(r, j) * x[static_cast<size_t>(j)];
                    for (int j = 0; j < t; ++j) cost += c_bricks[static_cast<size_t>(i)][static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
                    bs.b_image.push_back(std::move(img));
                    bs.cost.push_back(cost);
                }
                it = slot.emplace(std::move(rhs), std::move(bs)).first;
            }
            sols[static_cast<size_t>(i)] = &it->second;
            if (it->second.xs.empty()) brick_empty = true;
        }
        if (!brick_empty) {
            // remaining target for the global rows
            std::vector<long> target(b0);
            for (int r = 0; r < m; ++r)
                for (int j = 0; j < s; ++j) target[static_cast<size_t>(r)] -= a.at(r, j) * x0[static_cast<size_t>(j)];

            // per-suffix achievable ranges for pruning
            std::vector<std::vector<long>> suf_min(static_cast<size_t>(n + 1)), suf_max(static_cast<size_t>(n + 1));
            suf_min[static_cast<size_t>(n)] = std::vector<long>(static_cast<size_t>(m), 0);
            suf_max[static_cast<size_t>(n)] = std::vector<long>(static_cast<size_t>(m), 0);
            for (int i = n - 1; i >= 0; --i) {
                suf_min[static_cast<size_t>(i)] = suf_min[static_cast<size_t>(i + 1)];
                suf_max[static_cast<size_t>(i)] = suf_max[static_cast<size_t>(i + 1)];
                for (int r = 0; r < m; ++r) {
                    long lo = 0, hi = 0;
                    bool first = true;
                    for (const auto& img : sols[static_cast<size_t>(i)]->b_image) {
                        long v = img[static_cast<size_t>(r)];
                        if (first) { lo = hi = v; first = false; }
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                    suf_min[static_cast<size_t>(i)][static_cast<size_t>(r)] += lo;
                    suf_max[static_cast<size_t>(i)][static_cast<size_t>(r)] += hi;
                }
            }

            // DP over bricks: partial global sum -> (cost, predecessor)
            struct State {
                long cost;
                long prev;  // index into previous level's states
                int choice;
            };
            std::vector<std::map<std::vector<long>, long>> level_index(static_cast<size_t>(n + 1));
            std::vector<std::vector<std::pair<std::vector<long>, State>>> levels(static_cast<size_t>(n + 1));
            levels[0].push_back({std::vector<long>(static_cast<size_t>(m), 0), {0, -1, -1}});
            level_index[0].emplace(levels[0][0].first, 0);
            bool dead = false;
            for (int i = 0; i < n && !dead; ++i) {
                auto& next = levels[static_cast<size_t>(i + 1)];
                auto& next_index = level_index[static_cast<size_t>(i + 1)];
                const auto& bs = *sols[static_cast<size_t>(i)];
                for (long si = 0; si < static_cast<long>(levels[static_cast<size_t>(i)].size()); ++si) {
                    const auto& [sum, st] = levels[static_cast<size_t>(i)][static_cast<size_t>(si)];
                    for (int k = 0; k < static_cast<int>(bs.xs.size()); ++k) {
                        if (++work > params.work_cap)
                            fail(ErrorCode::BoxTooLarge, "oracle work cap exceeded");
                        std::vector<long> nsum(sum);
                        bool ok = true;
                        for (int r = 0; r < m; ++r) {
                            nsum[static_cast<size_t>(r)] += bs.b_image[static_cast<size_t>(k)][static_cast<size_t>(r)];
                            long rest = target[static_cast<size_t>(r)] - nsum[static_cast<size_t>(r)];
                            if (rest < suf_min[static_cast<size_t>(i + 1)][static_cast<size_t>(r)] ||
                                rest > suf_max[static_cast<size_t>(i + 1)][static_cast<size_t>(r)])
                                ok = false;
                        }
                        if (!ok) continue;
                        long ncost = st.cost + bs.cost[static_cast<size_t>(k)];
                        auto it = next_index.find(nsum);
                        if (it == next_index.end()) {
                            next_index.emplace(nsum, static_cast<long>(next.size()));
                            next.push_back({std::move(nsum), {ncost, si, k}});
                        } else if (ncost < next[static_cast<size_t>(it->second)].second.cost) {
                            next[static_cast<size_t>(it->second)].second = {ncost, si, k};
                        }
                    }
                }
                if (next.empty()) dead = true;
            }
            if (!dead) {
                auto it = level_index[static_cast<size_t>(n)].find(target);
                if (it != level_index[static_cast<size_t>(n)].end()) {
                    long x0_cost = 0;
                    for (int j = 0; j < s; ++j) {
                        if (!inst.c0(j).fits_long()) fail(ErrorCode::BoxTooLarge, "cost out of range");
                        x0_cost += inst.c0(j).to_long() * x0[static_cast<size_t>(j)];
                    }
                    long total = x0_cost + levels[static_cast<size_t>(n)][static_cast<size_t>(it->second)].second.cost;
                    if (!best || total < *best) {
                        best = total;
                        best_x0 = x0;
                        // walk the predecessors to recover the choices
                        best_choice.assign(static_cast<size_t>(n), -1);
                        long at = it->second;
                        for (int i = n - 1; i >= 0; --i) {
                            const State& st = levels[static_cast<size_t>(i + 1)][static_cast<size_t>(at)].second;
                            best_choice[static_cast<size_t>(i)] = st.choice;
                            at = st.prev;
                        }
                        // stash the chosen solutions now; the cache can grow but
                        // entries are stable
                        report.witness = Solution{};
                        report.witness->x0 = IntVector(s);
                        for (int j = 0; j < s; ++j) report.witness->x0(j) = BigInt(x0[static_cast<size_t>(j)]);
                        report.witness->x_bricks.clear();
                        for (int i = 0; i < n; ++i) {
                            const auto& x = sols[static_cast<size_t>(i)]->xs[static_cast<size_t>(best_choice[static_cast<size_t>(i)])];
                            IntVector xi(t);
                            for (int j = 0; j < t; ++j) xi(j) = BigInt(x[static_cast<size_t>(j)]);
                            report.witness->x_bricks.push_back(std::move(xi));
                        }
                    }
                }
            }
        }

        // odometer over x0
        int pos = s - 1;
        while (pos >= 0 && x0[static_cast<size_t>(pos)] == box) {
            x0[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++x0[static_cast<size_t>(pos)];
    }

    report.enumerated = enumerated;
    if (best) {
        report.outcome = SolveOutcome::Optimal;
        report.objective = BigInt(*best);
        report.witness->objective = BigInt(*best);
        CheckReport check = check_solution(inst, *report.witness);
        if (!check.ok)
            fail(ErrorCode::ReconstructionMismatch, "oracle witness failed verification: " + check.violation);
    } else {
        report.outcome = SolveOutcome::Infeasible;
    }
    return report;
}

namespace {

long pack(const std::vector<long>& x, long stride) {
    long key = 0;
    for (long v : x) key = key * stride + v;
    return key;
}

}  // namespace

bool check_faithful(const std::vector<std::pair<IntVector, BigInt>>& parts,
                    const IntMatrix& d_matrix, const IntVector& b, long bound,
                    const OracleParams& params) {
    std::vector<IntVector> targets = enumerate_solutions(d_matrix, b, bound);
    if (targets.empty()) return true;
    const int t = static_cast<int>(d_matrix.cols());
    const long stride = bound + 1;
    if (t * std::log2(static_cast<double>(stride)) > 61)
        fail(ErrorCode::SearchBudgetExceeded, "state space too large to pack");

    // down-closure of the target set, for pruning partial sums
    std::unordered_set<long> closure;
    {
        std::vector<long> cur(static_cast<size_t>(t), 0);
        for (const auto& x : targets) {
            std::function<void(int)> grow = [&](int j) {
                if (j == t) {
                    closure.insert(pack(cur, stride));
                    return;
                }
                for (long v = 0; v <= x(j).to_long(); ++v) {
                    cur[static_cast<size_t>(j)] = v;
                    grow(j + 1);
                }
            };
            grow(0);
            if (closure.size() > static_cast<size_t>(params.work_cap / 1000))
                fail(ErrorCode::SearchBudgetExceeded, "faithfulness closure too large");
        }
    }

    std::unordered_set<long> reachable;
    reachable.insert(0);
    long work = 0;
    std::map<std::string, std::vector<std::vector<long>>> part_solutions;
    auto solutions_for = [&](const IntVector& piece) -> const std::vector<std::vector<long>>& {
        std::string key;
        for (Eigen::Index i = 0; i < piece.size(); ++i) key += piece(i).str() + ",";
        auto it = part_solutions.find(key);
        if (it != part_solutions.end()) return it->second;
        std::vector<std::vector<long>> sols;
        for (const auto& x : enumerate_solutions(d_matrix, piece, bound)) {
            std::vector<long> v(static_cast<size_t>(t));
            for (int j = 0; j < t; ++j) v[static_cast<size_t>(j)] = x(j).to_long();
            sols.push_back(std::move(v));
        }
        return part_solutions.emplace(std::move(key), std::move(sols)).first->second;
    };

    for (const auto& [piece, mult] : parts) {
        if (mult.sign() == 0) continue;
        if (!mult.fits_long())
            fail(ErrorCode::SearchBudgetExceeded, "part multiplicity out of range");
        const auto& sols = solutions_for(piece);
        for (long rep = 0; rep < mult.to_long(); ++rep) {
            std::unordered_set<long> next;
            for (long key : reachable) {
                std::vector<long> base(static_cast<size_t>(t));
                long k = key;
                for (int j = t - 1; j >= 0; --j) {
                    base[static_cast<size_t>(j)] = k % stride;
                    k /= stride;
                }
                for (const auto& sol : sols) {
                    if (++work > params.work_cap)
                        fail(ErrorCode::SearchBudgetExceeded, "faithfulness search budget exhausted");
                    long nkey = 0;
                    bool ok = true;
                    for (int j = 0; j < t && ok; ++j) {
                        long v = base[static_cast<size_t>(j)] + sol[static_cast<size_t>(j)];
                        if (v > bound) ok = false;
                        nkey = nkey * stride + v;
                    }
                    if (ok && closure.count(nkey)) next.insert(nkey);
                }
            }
            reachable = std::move(next);
            if (reachable.empty()) return false;
        }
    }
    for (const auto& x : targets) {
        std::vector<long> v(static_cast<size_t>(t));
        for (int j = 0; j < t; ++j) v[static_cast<size_t>(j)] = x(j).to_long();
        if (!reachable.count(pack(v, stride))) return false;
    }
    return true;
}

std::optional<std::vector<IntVector>> extract_split(
    const std::vector<std::pair<IntVector, BigInt>>& parts, const IntMatrix& d_matrix,
    const IntVector& x, const OracleParams& params) {
    const int t = static_cast<int>(d_matrix.cols());
    long bound = 0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (!x(j).fits_long() || x(j).sign() < 0)
            fail(ErrorCode::DomainViolation, "extract_split needs a small nonnegative solution");
        bound = std::max(bound, x(j).to_long());
    }
    const long stride = bound + 1;
    if (t * std::log2(static_cast<double>(stride)) > 61)
        fail(ErrorCode::SearchBudgetExceeded, "state space too large to pack");
    std::vector<long> goal(static_cast<size_t>(t));
    for (int j = 0; j < t; ++j) goal[static_cast<size_t>(j)] = x(j).to_long();

    struct Back {
        long prev_key;
        int sol;
    };
    // expanded part sequence with per-level solution lists
    std::vector<std::vector<std::vector<long>>> level_sols;
    for (const auto& [piece, mult] : parts) {
        if (mult.sign() == 0) continue;
        if (!mult.fits_long()) fail(ErrorCode::SearchBudgetExceeded, "multiplicity out of range");
        std::vector<std::vector<long>> sols;
        for (const auto& sx : enumerate_solutions(d_matrix, piece, bound)) {
            std::vector<long> v(static_cast<size_t>(t));
            bool fits = true;
            for (int j = 0; j < t; ++j) {
                v[static_cast<size_t>(j)] = sx(j).to_long();
                if (v[static_cast<size_t>(j)] > goal[static_cast<size_t>(j)]) fits = false;
            }
            if (fits) sols.push_back(std::move(v));
        }
        for (long rep = 0; rep < mult.to_long(); ++rep) level_sols.push_back(sols);
    }

    std::vector<std::unordered_map<long, Back>> levels(level_sols.size() + 1);
    levels[0].emplace(0L, Back{-1, -1});
    long work = 0;
    for (size_t lvl = 0; lvl < level_sols.size(); ++lvl) {
        for (const auto& [key, back] : levels[lvl]) {
            std::vector<long> base(static_cast<size_t>(t));
            long k = key;
            for (int j = t - 1; j >= 0; --j) {
                base[static_cast<size_t>(j)] = k % stride;
                k /= stride;
            }
            for (int si = 0; si < static_cast<int>(level_sols[lvl].size()); ++si) {
                if (++work > params.work_cap)
                    fail(ErrorCode::SearchBudgetExceeded, "split search budget exhausted");
                const auto& sol = level_sols[lvl][static_cast<size_t>(si)];
                long nkey = 0;
                bool ok = true;
                for (int j = 0; j < t && ok; ++j) {
                    long v = base[static_cast<size_t>(j)] + sol[static_cast<size_t>(j)];
                    if (v > goal[static_cast<size_t>(j)]) ok = false;
                    nkey = nkey * stride + v;
                }
                if (!ok) continue;
                levels[lvl + 1].emplace(nkey, Back{key, si});
            }
        }
        if (levels[lvl + 1].empty()) return std::nullopt;
    }
    long goal_key = pack(goal, stride);
    if (!levels.back().count(goal_key)) return std::nullopt;

    std::vector<IntVector> split(level_sols.size(), IntVector::Constant(t, BigInt(0)));
    long at = goal_key;
    for (size_t lvl = level_sols.size(); lvl-- > 0;) {
        const Back& back = levels[lvl + 1].at(at);
        const auto& sol = level_sols[lvl][static_cast<size_t>(back.sol)];
        for (int j = 0; j < t; ++j) split[lvl](j) = BigInt(sol[static_cast<size_t>(j)]);
        at = back.prev_key;
    }
    return split;
}

}  // namespace fourblock
