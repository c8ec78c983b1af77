#include "fourblock/instance.hpp"

#include "doctest.h"
#include "fourblock/rng.hpp"

using namespace fourblock;

namespace {

IntVector iv(std::initializer_list<long> xs) {
    IntVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = BigInt(x);
    return v;
}

const char* kMinimalNfold = R"({
  "s": 0, "t": 2, "d": 1, "m": 1, "n": 1,
  "A": [[]],
  "B": [[1, 0]],
  "C_list": [[[]]],
  "D_list": [[[1, -1]]],
  "b0": [2],
  "b_list": [[1]],
  "c0": [],
  "c_list": [[1, 1]]
})";

}  // namespace

TEST_CASE("minimal n-fold document round-trips and derives delta") {
    FourBlockInstance inst = parse_instance(kMinimalNfold);
    CHECK(inst.s == 0);
    CHECK(inst.n == 1);
    CHECK(inst.delta() == 1);
    CHECK(inst.is_b_uniform());
    FourBlockInstance again = parse_instance(serialize_instance(inst));
    CHECK(serialize_instance(again) == serialize_instance(inst));
}

TEST_CASE("dimension mismatch and non-integer entries are rejected") {
    std::string bad_b0 = kMinimalNfold;
    bad_b0.replace(bad_b0.find("\"b0\": [2]"), 9, "\"b0\": [2, 3]");
    CHECK_THROWS_WITH_AS(parse_instance(bad_b0), doctest::Contains("DIMENSION_MISMATCH"), Error);

    std::string frac = kMinimalNfold;
    frac.replace(frac.find("\"b0\": [2]"), 9, "\"b0\": [1.5]");
    CHECK_THROWS_WITH_AS(parse_instance(frac), doctest::Contains("NON_INTEGER_ENTRY"), Error);
}

TEST_CASE("check_solution accepts zero on zero data and reports first violation") {
    FourBlockInstance inst = parse_instance(kMinimalNfold);
    Solution zero;
    zero.x0 = IntVector(0);
    zero.x_bricks = {iv({0, 0})};
    zero.objective = BigInt(0);
    CheckReport rep = check_solution(inst, zero);
    CHECK(!rep.ok);
    CHECK(rep.violation == "global row 0");

    // all-zero right-hand sides accept the zero solution
    FourBlockInstance z = inst;
    z.b0 = iv({0});
    z.b_bricks = {iv({0})};
    rep = check_solution(z, zero);
    CHECK(rep.ok);

    Solution good;
    good.x0 = IntVector(0);
    good.x_bricks = {iv({2, 1})};
    good.objective = BigInt(3);
    rep = check_solution(inst, good);
    CHECK(rep.ok);
    good.objective = BigInt(4);
    rep = check_solution(inst, good);
    CHECK(!rep.ok);
    CHECK(rep.violation == "objective mismatch");
}

TEST_CASE("generator is deterministic per seed and honors bounds") {
    GeneratorParams params;
    params.s = 1;
    params.t = 3;
    params.d = 2;
    params.m = 2;
    params.n = 3;
    GeneratedInstance a = random_instance(params, 1);
    GeneratedInstance b = random_instance(params, 1);
    CHECK(serialize_instance(a.instance) == serialize_instance(b.instance));
    GeneratedInstance c = random_instance(params, 2);
    CHECK(serialize_instance(a.instance) != serialize_instance(c.instance));
    CHECK(a.instance.delta() == 1);
    CHECK(a.instance.delta_bar() == 1);

    params.d = 1;
    params.delta = 1;
    GeneratedInstance d1 = random_instance(params, 9);
    for (const auto& blk : d1.instance.d_blocks)
        for (Eigen::Index i = 0; i < blk.rows(); ++i)
            for (Eigen::Index j = 0; j < blk.cols(); ++j) REQUIRE(abs(blk(i, j)) <= BigInt(1));
}

TEST_CASE("parse o serialize is the identity on random instances") {
    Rng rng(555);
    for (int rep = 0; rep < 100; ++rep) {
        GeneratorParams params;
        params.s = static_cast<int>(rng.below(3));
        params.m = params.s > 0 ? 1 + static_cast<int>(rng.below(2)) : static_cast<int>(rng.below(3));
        params.t = 1 + static_cast<int>(rng.below(3));
        params.d = 1 + static_cast<int>(rng.below(2));
        params.n = 1 + static_cast<int>(rng.below(4));
        params.uniform_b = rng.chance(1, 2);
        FourBlockInstance inst = random_instance(params, 1000 + rep).instance;
        std::string text = serialize_instance(inst);
        FourBlockInstance back = parse_instance(text);
        REQUIRE(serialize_instance(back) == text);
    }
}

TEST_CASE("reduction shape: m=1, d=1, deltabar=1 gives t'=9, d'=2") {
    GeneratorParams params;
    params.s = 0;
    params.m = 1;
    params.d = 1;
    params.t = 2;
    params.n = 2;
    params.uniform_b = false;
    FourBlockInstance inst = random_instance(params, 77).instance;
    REQUIRE(inst.delta_bar() == 1);
    ReductionResult red = reduce_to_b_uniform(inst);
    CHECK(red.instance.t == 9);
    CHECK(red.instance.d == 2);
    CHECK(red.instance.is_b_uniform());
    CHECK(red.instance.b_uniform);
    red.instance.validate();

    // flag row: synthetic columns carry 1, real ones 0, and real columns
    // reproduce the cheapest matching original column.
    for (int i = 0; i < red.instance.n; ++i) {
        for (int col = 0; col < red.instance.t; ++col) {
            const ColumnOrigin& origin = red.back_map[static_cast<size_t>(i)][static_cast<size_t>(col)];
            const BigInt& flag = red.instance.d_blocks[static_cast<size_t>(i)](0, col);
            if (origin.column < 0) {
                CHECK(flag == BigInt(1));
                CHECK(red.instance.c_bricks[static_cast<size_t>(i)](col) == BigInt(0));
            } else {
                CHECK(flag == BigInt(0));
                CHECK(red.instance.b_blocks[0].col(col) == inst.b_block(i).col(origin.column));
                CHECK(red.instance.d_blocks[static_cast<size_t>(i)](1, col) ==
                      inst.d_blocks[static_cast<size_t>(i)](0, origin.column));
            }
        }
    }
}

TEST_CASE("reduced instances keep the original C and b inside the new rows") {
    GeneratorParams params;
    params.s = 1;
    params.m = 1;
    params.d = 1;
    params.t = 2;
    params.n = 2;
    params.uniform_b = false;
    FourBlockInstance inst = random_instance(params, 31).instance;
    ReductionResult red = reduce_to_b_uniform(inst);
    for (int i = 0; i < inst.n; ++i) {
        CHECK(red.instance.b_bricks[static_cast<size_t>(i)](0) == BigInt(0));
        CHECK(red.instance.b_bricks[static_cast<size_t>(i)](1) == inst.b_bricks[static_cast<size_t>(i)](0));
        for (int j = 0; j < inst.s; ++j) {
            CHECK(red.instance.c_blocks[static_cast<size_t>(i)](0, j) == BigInt(0));
            CHECK(red.instance.c_blocks[static_cast<size_t>(i)](1, j) ==
                  inst.c_blocks[static_cast<size_t>(i)](0, j));
        }
    }
    CHECK(red.instance.a == inst.a);
    CHECK(red.instance.b0 == inst.b0);
}
