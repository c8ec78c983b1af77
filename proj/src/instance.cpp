#include "fourblock/instance.hpp"

#include <json.hpp>

#include "fourblock/rng.hpp"

namespace fourblock {

namespace {

using nlohmann::ordered_json;

long max_abs_entry(const IntMatrix& m, long acc) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            BigInt a = abs(m(i, j));
            if (!a.fits_long()) fail(ErrorCode::ParamsTooLarge, "coefficient out of range");
            if (a.to_long() > acc) acc = a.to_long();
        }
    return acc;
}

}  // namespace

long FourBlockInstance::delta() const {
    long acc = 0;
    for (const auto& blk : d_blocks) acc = max_abs_entry(blk, acc);
    return acc;
}

long FourBlockInstance::delta_bar() const {
    long acc = max_abs_entry(a, 0);
    for (const auto& blk : b_blocks) acc = max_abs_entry(blk, acc);
    for (const auto& blk : c_blocks) acc = max_abs_entry(blk, acc);
    for (const auto& blk : d_blocks) acc = max_abs_entry(blk, acc);
    return acc;
}

bool FourBlockInstance::is_b_uniform() const {
    if (b_uniform || n <= 1) return true;
    for (size_t i = 1; i < b_blocks.size(); ++i)
        if (b_blocks[i] != b_blocks[0]) return false;
    return true;
}

void FourBlockInstance::validate() const {
    if (n < 1) fail(ErrorCode::DimensionMismatch, "n must be at least 1");
    if (s < 0 || t < 0 || d < 0 || m < 0) fail(ErrorCode::DimensionMismatch, "negative dimension");
    auto check = [](const IntMatrix& mat, int rows, int cols, const std::string& what) {
        if (mat.rows() != rows || mat.cols() != cols)
            fail(ErrorCode::DimensionMismatch, what + " has wrong shape");
    };
    check(a, m, s, "A");
    if (b_uniform) {
        if (b_blocks.size() != 1) fail(ErrorCode::DimensionMismatch, "uniform B must be a single block");
    } else if (static_cast<int>(b_blocks.size()) != n) {
        fail(ErrorCode::DimensionMismatch, "B_list length != n");
    }
    for (const auto& blk : b_blocks) check(blk, m, t, "B");
    if (static_cast<int>(c_blocks.size()) != n) fail(ErrorCode::DimensionMismatch, "C_list length != n");
    if (static_cast<int>(d_blocks.size()) != n) fail(ErrorCode::DimensionMismatch, "D_list length != n");
    for (const auto& blk : c_blocks) check(blk, d, s, "C");
    for (const auto& blk : d_blocks) check(blk, d, t, "D");
    if (b0.size() != m) fail(ErrorCode::DimensionMismatch, "|b0| != m");
    if (static_cast<int>(b_bricks.size()) != n) fail(ErrorCode::DimensionMismatch, "b_list length != n");
    for (const auto& v : b_bricks)
        if (v.size() != d) fail(ErrorCode::DimensionMismatch, "|b_i| != d");
    if (c0.size() != s) fail(ErrorCode::DimensionMismatch, "|c0| != s");
    if (static_cast<int>(c_bricks.size()) != n) fail(ErrorCode::DimensionMismatch, "c_list length != n");
    for (const auto& v : c_bricks)
        if (v.size() != t) fail(ErrorCode::DimensionMismatch, "|c_i| != t");
}

namespace {

BigInt json_int(const ordered_json& j, const std::string& where) {
    if (!j.is_number_integer())
        fail(ErrorCode::NonIntegerEntry, "non-integer entry in " + where);
    return BigInt(j.get<long long>());
}

IntMatrix json_matrix(const ordered_json& j, const std::string& where) {
    if (!j.is_array()) fail(ErrorCode::ParseError, where + " must be an array of rows");
    int rows = static_cast<int>(j.size());
    int cols = rows == 0 ? 0 : -1;
    for (const auto& row : j) {
        if (!row.is_array()) fail(ErrorCode::ParseError, where + " rows must be arrays");
        if (cols < 0)
            cols = static_cast<int>(row.size());
        else if (static_cast<int>(row.size()) != cols)
            fail(ErrorCode::DimensionMismatch, where + " has ragged rows");
    }
    IntMatrix m(rows, cols < 0 ? 0 : cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < m.cols(); ++c)
            m(i, c) = json_int(j[static_cast<size_t>(i)][static_cast<size_t>(c)], where);
    return m;
}

IntVector json_vector(const ordered_json& j, const std::string& where) {
    if (!j.is_array()) fail(ErrorCode::ParseError, where + " must be an array");
    IntVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = json_int(j[static_cast<size_t>(i)], where);
    return v;
}

ordered_json matrix_json(const IntMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!m(i, j).fits_long()) fail(ErrorCode::ParamsTooLarge, "entry too large for the format");
            row.push_back(m(i, j).to_long());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json vector_json(const IntVector& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!v(i).fits_long()) fail(ErrorCode::ParamsTooLarge, "entry too large for the format");
        out.push_back(v(i).to_long());
    }
    return out;
}

// An empty row list carries no shape; adopt the declared one, but only when
// the declared shape is itself degenerate.
IntMatrix reshape_empty(IntMatrix m, int rows, int cols) {
    if (m.size() == 0 && (rows == 0 || cols == 0) && rows >= 0 && cols >= 0)
        return IntMatrix::Constant(rows, cols, BigInt(0));
    return m;
}

}  // namespace

FourBlockInstance parse_instance(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, e.what());
    }
    FourBlockInstance inst;
    for (const char* key : {"s", "t", "d", "m", "n"})
        if (!j.contains(key)) fail(ErrorCode::ParseError, std::string("missing key ") + key);
    inst.s = static_cast<int>(json_int(j["s"], "s").to_long());
    inst.t = static_cast<int>(json_int(j["t"], "t").to_long());
    inst.d = static_cast<int>(json_int(j["d"], "d").to_long());
    inst.m = static_cast<int>(json_int(j["m"], "m").to_long());
    inst.n = static_cast<int>(json_int(j["n"], "n").to_long());
    if (!j.contains("A")) fail(ErrorCode::ParseError, "missing key A");
    inst.a = reshape_empty(json_matrix(j["A"], "A"), inst.m, inst.s);
    if (j.contains("B")) {
        inst.b_uniform = true;
        inst.b_blocks.push_back(reshape_empty(json_matrix(j["B"], "B"), inst.m, inst.t));
    } else if (j.contains("B_list")) {
        inst.b_uniform = false;
        for (const auto& blk : j["B_list"])
            inst.b_blocks.push_back(reshape_empty(json_matrix(blk, "B_list"), inst.m, inst.t));
    } else {
        fail(ErrorCode::ParseError, "missing key B or B_list");
    }
    for (const char* key : {"C_list", "D_list", "b0", "b_list", "c0", "c_list"})
        if (!j.contains(key)) fail(ErrorCode::ParseError, std::string("missing key ") + key);
    for (const auto& blk : j["C_list"])
        inst.c_blocks.push_back(reshape_empty(json_matrix(blk, "C_list"), inst.d, inst.s));
    for (const auto& blk : j["D_list"])
        inst.d_blocks.push_back(reshape_empty(json_matrix(blk, "D_list"), inst.d, inst.t));
    inst.b0 = json_vector(j["b0"], "b0");
    for (const auto& v : j["b_list"]) inst.b_bricks.push_back(json_vector(v, "b_list"));
    inst.c0 = json_vector(j["c0"], "c0");
    for (const auto& v : j["c_list"]) inst.c_bricks.push_back(json_vector(v, "c_list"));
    inst.validate();
    return inst;
}

std::string serialize_instance(const FourBlockInstance& inst) {
    ordered_json j;
    j["s"] = inst.s;
    j["t"] = inst.t;
    j["d"] = inst.d;
    j["m"] = inst.m;
    j["n"] = inst.n;
    j["A"] = matrix_json(inst.a);
    if (inst.b_uniform) {
        j["B"] = matrix_json(inst.b_blocks.front());
    } else {
        ordered_json list = ordered_json::array();
        for (const auto& blk : inst.b_blocks) list.push_back(matrix_json(blk));
        j["B_list"] = std::move(list);
    }
    ordered_json c_list = ordered_json::array(), d_list = ordered_json::array();
    for (const auto& blk : inst.c_blocks) c_list.push_back(matrix_json(blk));
    for (const auto& blk : inst.d_blocks) d_list.push_back(matrix_json(blk));
    j["C_list"] = std::move(c_list);
    j["D_list"] = std::move(d_list);
    j["b0"] = vector_json(inst.b0);
    ordered_json b_list = ordered_json::array(), c_bricks = ordered_json::array();
    for (const auto& v : inst.b_bricks) b_list.push_back(vector_json(v));
    for (const auto& v : inst.c_bricks) c_bricks.push_back(vector_json(v));
    j["b_list"] = std::move(b_list);
    j["c0"] = vector_json(inst.c0);
    j["c_list"] = std::move(c_bricks);
    return j.dump(2);
}

BigInt solution_objective(const FourBlockInstance& inst, const IntVector& x0,
                          const std::vector<IntVector>& x_bricks) {
    BigInt obj(0);
    for (int j = 0; j < inst.s; ++j) obj += inst.c0(j) * x0(j);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.t; ++j)
            obj += inst.c_bricks[static_cast<size_t>(i)](j) * x_bricks[static_cast<size_t>(i)](j);
    return obj;
}

CheckReport check_solution(const FourBlockInstance& inst, const Solution& sol) {
    if (sol.x0.size() != inst.s || static_cast<int>(sol.x_bricks.size()) != inst.n)
        fail(ErrorCode::DimensionMismatch, "solution shape does not match the instance");
    for (const auto& xb : sol.x_bricks)
        if (xb.size() != inst.t) fail(ErrorCode::DimensionMismatch, "brick solution has wrong length");

    for (int j = 0; j < inst.s; ++j)
        if (sol.x0(j).sign() < 0) return {false, "negative x0[" + std::to_string(j) + "]"};
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.t; ++j)
            if (sol.x_bricks[static_cast<size_t>(i)](j).sign() < 0)
                return {false, "negative x" + std::to_string(i + 1) + "[" + std::to_string(j) + "]"};

    for (int row = 0; row < inst.m; ++row) {
        BigInt lhs(0);
        for (int j = 0; j < inst.s; ++j) lhs += inst.a(row, j) * sol.x0(j);
        for (int i = 0; i < inst.n; ++i) {
            const IntMatrix& b = inst.b_block(i);
            for (int j = 0; j < inst.t; ++j) lhs += b(row, j) * sol.x_bricks[static_cast<size_t>(i)](j);
        }
        if (lhs != inst.b0(row)) return {false, "global row " + std::to_string(row)};
    }
    for (int i = 0; i < inst.n; ++i) {
        for (int row = 0; row < inst.d; ++row) {
            BigInt lhs(0);
            for (int j = 0; j < inst.s; ++j) lhs += inst.c_blocks[static_cast<size_t>(i)](row, j) * sol.x0(j);
            for (int j = 0; j < inst.t; ++j)
                lhs += inst.d_blocks[static_cast<size_t>(i)](row, j) * sol.x_bricks[static_cast<size_t>(i)](j);
            if (lhs != inst.b_bricks[static_cast<size_t>(i)](row))
                return {false, "brick " + std::to_string(i) + " row " + std::to_string(row)};
        }
    }
    if (solution_objective(inst, sol.x0, sol.x_bricks) != sol.objective)
        return {false, "objective mismatch"};
    return {true, ""};
}

namespace {

// odometer over [-bound, bound]^len, last coordinate fastest
std::vector<std::vector<long>> pattern_space(long bound, int len) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur(static_cast<size_t>(len), -bound);
    while (true) {
        out.push_back(cur);
        int pos = len - 1;
        while (pos >= 0 && cur[static_cast<size_t>(pos)] == bound) {
            cur[static_cast<size_t>(pos)] = -bound;
            --pos;
        }
        if (pos < 0) break;
        ++cur[static_cast<size_t>(pos)];
    }
    if (len == 0) out.assign(1, {});
    return out;
}

}  // namespace

ReductionResult reduce_to_b_uniform(const FourBlockInstance& inst) {
    inst.validate();
    const long bound = inst.delta_bar();
    const auto p_patterns = pattern_space(bound, inst.m);
    const auto q_patterns = pattern_space(bound, inst.d);
    const int t_new = static_cast<int>(p_patterns.size() * q_patterns.size());
    const int d_new = inst.d + 1;
    if (t_new > 100000) fail(ErrorCode::ParamsTooLarge, "reduction would create too many columns");

    ReductionResult out;
    FourBlockInstance& red = out.instance;
    red.s = inst.s;
    red.t = t_new;
    red.d = d_new;
    red.m = inst.m;
    red.n = inst.n;
    red.a = inst.a;
    red.b0 = inst.b0;
    red.c0 = inst.c0;
    red.b_uniform = true;

    IntMatrix b_new(inst.m, t_new);
    {
        int col = 0;
        for (const auto& p : p_patterns)
            for (size_t qi = 0; qi < q_patterns.size(); ++qi) {
                for (int row = 0; row < inst.m; ++row) b_new(row, col) = BigInt(p[static_cast<size_t>(row)]);
                ++col;
            }
    }
    red.b_blocks.push_back(std::move(b_new));

    out.back_map.resize(static_cast<size_t>(inst.n));
    for (int i = 0; i < inst.n; ++i) {
        IntMatrix d_i(d_new, t_new);
        IntVector c_cost = IntVector::Constant(t_new, BigInt(0));
        auto& back = out.back_map[static_cast<size_t>(i)];
        back.assign(static_cast<size_t>(t_new), ColumnOrigin{});
        int col = 0;
        for (const auto& p : p_patterns) {
            for (const auto& q : q_patterns) {
                // cheapest original column carrying exactly this (p, q) pattern
                int best = -1;
                for (int j = 0; j < inst.t; ++j) {
                    bool match = true;
                    for (int row = 0; row < inst.m && match; ++row)
                        if (inst.b_block(i)(row, j) != BigInt(p[static_cast<size_t>(row)])) match = false;
                    for (int row = 0; row < inst.d && match; ++row)
                        if (inst.d_blocks[static_cast<size_t>(i)](row, j) != BigInt(q[static_cast<size_t>(row)]))
                            match = false;
                    if (!match) continue;
                    if (best < 0 ||
                        inst.c_bricks[static_cast<size_t>(i)](j) < inst.c_bricks[static_cast<size_t>(i)](best))
                        best = j;
                }
                d_i(0, col) = BigInt(best >= 0 ? 0 : 1);
                for (int row = 0; row < inst.d; ++row) d_i(row + 1, col) = BigInt(q[static_cast<size_t>(row)]);
                if (best >= 0) {
                    c_cost(col) = inst.c_bricks[static_cast<size_t>(i)](best);
                    back[static_cast<size_t>(col)] = {i, best};
                } else {
                    back[static_cast<size_t>(col)] = {i, -1};
                }
                ++col;
            }
        }
        red.d_blocks.push_back(std::move(d_i));
        red.c_bricks.push_back(std::move(c_cost));

        IntMatrix c_i(d_new, inst.s);
        for (int j = 0; j < inst.s; ++j) c_i(0, j) = BigInt(0);
        for (int row = 0; row < inst.d; ++row)
            for (int j = 0; j < inst.s; ++j) c_i(row + 1, j) = inst.c_blocks[static_cast<size_t>(i)](row, j);
        red.c_blocks.push_back(std::move(c_i));

        IntVector b_i(d_new);
        b_i(0) = BigInt(0);
        for (int row = 0; row < inst.d; ++row) b_i(row + 1) = inst.b_bricks[static_cast<size_t>(i)](row);
        red.b_bricks.push_back(std::move(b_i));
    }
    red.validate();
    return out;
}

Solution lift_reduced_solution(const FourBlockInstance& original, const ReductionResult& red,
                               const Solution& reduced_sol) {
    Solution out;
    out.x0 = reduced_sol.x0;
    out.x_bricks.assign(static_cast<size_t>(original.n),
                        IntVector::Constant(original.t, BigInt(0)));
    for (int i = 0; i < original.n; ++i) {
        const auto& back = red.back_map[static_cast<size_t>(i)];
        const IntVector& xr = reduced_sol.x_bricks[static_cast<size_t>(i)];
        for (int col = 0; col < red.instance.t; ++col) {
            if (xr(col).is_zero()) continue;
            const ColumnOrigin& origin = back[static_cast<size_t>(col)];
            if (origin.column < 0)
                fail(ErrorCode::ReconstructionMismatch, "synthetic column carries positive value");
            out.x_bricks[static_cast<size_t>(i)](origin.column) += xr(col);
        }
    }
    out.objective = solution_objective(original, out.x0, out.x_bricks);
    if (out.objective != reduced_sol.objective)
        fail(ErrorCode::ReconstructionMismatch, "objective changed across the reduction lift");
    return out;
}

GeneratedInstance random_instance(const GeneratorParams& p, std::uint64_t seed) {
    if (p.n < 1 || p.t < 1 || p.d < 1 || p.m < 0 || p.s < 0)
        fail(ErrorCode::DimensionMismatch, "generator dimensions out of range");
    if (p.s > 0 && p.m < 1)
        fail(ErrorCode::DimensionMismatch, "s > 0 needs a global row to box x0");
    Rng rng(seed);
    FourBlockInstance inst;
    inst.s = p.s;
    inst.t = p.t;
    inst.d = p.d;
    inst.m = p.m;
    inst.n = p.n;

    const int slack_col = p.t - 1;   // zero cost, carries the mass rows
    const int box_row = p.d - 1;     // per-brick mass row
    const bool global_box = p.s > 0; // row 0 boxes x0 through the shared slack column

    inst.a = IntMatrix::Constant(p.m, p.s, BigInt(0));
    inst.b0 = IntVector::Constant(p.m, BigInt(0));
    for (int row = 0; row < p.m; ++row) {
        if (global_box && row == 0) {
            for (int j = 0; j < p.s; ++j) inst.a(row, j) = BigInt(1);
            inst.b0(row) = BigInt(p.box_bound);
        } else {
            for (int j = 0; j < p.s; ++j) inst.a(row, j) = BigInt(rng.range(-p.delta_bar, p.delta_bar));
            inst.b0(row) = BigInt(rng.range(-p.rhs_bound * p.n, p.rhs_bound * p.n));
        }
    }

    auto make_b = [&]() {
        IntMatrix b = IntMatrix::Constant(p.m, p.t, BigInt(0));
        for (int row = 0; row < p.m; ++row) {
            if (global_box && row == 0) {
                b(row, slack_col) = BigInt(1);
            } else {
                for (int j = 0; j < p.t; ++j)
                    if (j != slack_col) b(row, j) = BigInt(rng.range(-p.delta_bar, p.delta_bar));
            }
        }
        return b;
    };
    if (p.uniform_b) {
        inst.b_uniform = true;
        inst.b_blocks.push_back(make_b());
    } else {
        inst.b_uniform = false;
        for (int i = 0; i < p.n; ++i) inst.b_blocks.push_back(make_b());
    }

    for (int i = 0; i < p.n; ++i) {
        IntMatrix c_i = IntMatrix::Constant(p.d, p.s, BigInt(0));
        IntMatrix d_i = IntMatrix::Constant(p.d, p.t, BigInt(0));
        IntVector b_i = IntVector::Constant(p.d, BigInt(0));
        for (int row = 0; row < p.d; ++row) {
            if (row == box_row) {
                for (int j = 0; j < p.t; ++j) d_i(row, j) = BigInt(1);
                // nonnegative coupling keeps every brick variable below the box
                for (int j = 0; j < p.s; ++j) c_i(row, j) = BigInt(static_cast<long>(rng.below(2)));
                b_i(row) = BigInt(p.box_bound);
            } else {
                for (int j = 0; j < p.s; ++j) c_i(row, j) = BigInt(rng.range(-p.delta_bar, p.delta_bar));
                for (int j = 0; j < p.t; ++j)
                    if (j != slack_col) d_i(row, j) = BigInt(rng.range(-p.delta, p.delta));
                b_i(row) = BigInt(rng.range(-p.rhs_bound, p.rhs_bound));
            }
        }
        inst.c_blocks.push_back(std::move(c_i));
        inst.d_blocks.push_back(std::move(d_i));
        inst.b_bricks.push_back(std::move(b_i));
    }

    inst.c0 = IntVector::Constant(p.s, BigInt(0));
    for (int j = 0; j < p.s; ++j) inst.c0(j) = BigInt(rng.range(-p.cost_bound, p.cost_bound));
    for (int i = 0; i < p.n; ++i) {
        IntVector c_i = IntVector::Constant(p.t, BigInt(0));
        for (int j = 0; j < p.t; ++j)
            if (j != slack_col) c_i(j) = BigInt(rng.range(-p.cost_bound, p.cost_bound));
        inst.c_bricks.push_back(std::move(c_i));
    }

    inst.validate();
    return {std::move(inst), p.box_bound};
}

}  // namespace fourblock
