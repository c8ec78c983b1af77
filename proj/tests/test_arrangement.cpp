#include "fourblock/arrangement.hpp"

#include <set>

#include "doctest.h"
#include "fourblock/rng.hpp"

using namespace fourblock;

namespace {

Hyperplane hp(std::initializer_list<long> a, long beta) {
    Hyperplane h;
    h.a = RatVector(static_cast<Eigen::Index>(a.size()));
    Eigen::Index i = 0;
    for (long x : a) h.a(i++) = Rational(x);
    h.beta = Rational(beta);
    return h;
}

RatVector pt(std::initializer_list<long> xs) {
    RatVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = Rational(x);
    return v;
}

}  // namespace

TEST_CASE("position_of basics") {
    CHECK(position_of(pt({9, 18}), hp({1, 0}, 0)) == Position::GT);
    CHECK(position_of(pt({0, 5}), hp({1, 0}, 0)) == Position::EQ);
    // degenerate: 0 < 1 always
    CHECK(position_of(pt({3, -7}), hp({0, 0}, 1)) == Position::LT);
}

TEST_CASE("face_feasible finds strict witnesses and rejects impossible signs") {
    std::vector<Hyperplane> axes = {hp({1, 0}, 0), hp({0, 1}, 0)};
    auto w = face_feasible({Position::GT, Position::GT}, axes);
    REQUIRE(w.has_value());
    CHECK((*w)(0).sign() > 0);
    CHECK((*w)(1).sign() > 0);

    std::vector<Hyperplane> parallel = {hp({1, 0}, 0), hp({1, 0}, 1)};
    CHECK(!face_feasible({Position::EQ, Position::EQ}, parallel).has_value());
}

TEST_CASE("two axes give nine faces; a single hyperplane gives three") {
    Arrangement arr = enumerate_faces({hp({1, 0}, 0), hp({0, 1}, 0)});
    CHECK(arr.faces.size() == 9);
    Arrangement one = enumerate_faces({hp({1, 2}, 3)});
    CHECK(one.faces.size() == 3);
}

TEST_CASE("witnesses reproduce their position vectors exactly") {
    std::vector<Hyperplane> hs = {hp({1, 0}, 0), hp({0, 1}, 0), hp({1, 1}, 2), hp({1, -1}, 1)};
    Arrangement arr = enumerate_faces(hs);
    for (const auto& face : arr.faces)
        for (size_t i = 0; i < hs.size(); ++i)
            REQUIRE(position_of(face.witness, hs[i]) == face.pv[i]);
}

TEST_CASE("duplicate and flipped hyperplanes stay consistent") {
    std::vector<Hyperplane> hs = {hp({1, 0}, 0), hp({-2, 0}, 0), hp({1, 0}, 0)};
    Arrangement arr = enumerate_faces(hs);
    CHECK(arr.faces.size() == 3);
    for (const auto& face : arr.faces) {
        CHECK(face.pv[0] == flip_position(face.pv[1]));
        CHECK(face.pv[0] == face.pv[2]);
    }
}

TEST_CASE("random arrangements match the exhaustive position-vector scan") {
    Rng rng(99);
    for (int rep = 0; rep < 6; ++rep) {
        int dim = 1 + static_cast<int>(rng.below(2));
        int hcount = 1 + static_cast<int>(rng.below(4));
        std::vector<Hyperplane> hs;
        for (int i = 0; i < hcount; ++i) {
            Hyperplane h;
            h.a = RatVector(dim);
            for (int j = 0; j < dim; ++j) h.a(j) = Rational(rng.range(-3, 3));
            h.beta = Rational(rng.range(-3, 3));
            hs.push_back(std::move(h));
        }
        Arrangement arr = enumerate_faces(hs);
        std::set<std::string> got;
        for (const auto& f : arr.faces) got.insert(position_vector_str(f.pv));
        REQUIRE(got.size() == arr.faces.size());

        std::set<std::string> expect;
        PositionVector pv(static_cast<size_t>(hcount));
        std::function<void(int)> walk = [&](int at) {
            if (at == hcount) {
                if (face_feasible(pv, hs)) expect.insert(position_vector_str(pv));
                return;
            }
            for (Position p : {Position::LT, Position::EQ, Position::GT}) {
                pv[static_cast<size_t>(at)] = p;
                walk(at + 1);
            }
        };
        walk(0);
        REQUIRE(got == expect);

        // sampled points always land in an enumerated face
        for (int s = 0; s < 50; ++s) {
            RatVector x(dim);
            for (int j = 0; j < dim; ++j)
                x(j) = Rational(BigInt(rng.range(-40, 40)), BigInt(rng.range(1, 7)));
            PositionVector where(static_cast<size_t>(hcount));
            for (int i = 0; i < hcount; ++i) where[static_cast<size_t>(i)] = position_of(x, hs[static_cast<size_t>(i)]);
            REQUIRE(expect.count(position_vector_str(where)) == 1);
        }
    }
}

TEST_CASE("preimage hyperplane formula") {
    // C = 0: degenerate with constant position
    IntMatrix c0 = IntMatrix::Constant(2, 2, BigInt(0));
    IntVector b(2);
    b << BigInt(1), BigInt(2);
    Hyperplane h = hp({1, 1}, 5);
    Hyperplane lifted = preimage_hyperplane(h, c0, b);
    CHECK(lifted.a(0) == Rational(0));
    CHECK(lifted.beta == Rational(2));  // 5 - (1+2)

    // C = identity, b = 0: lifted = (-a, beta)
    IntMatrix id = IntMatrix::Constant(2, 2, BigInt(0));
    id(0, 0) = BigInt(1);
    id(1, 1) = BigInt(1);
    IntVector zero = IntVector::Constant(2, BigInt(0));
    lifted = preimage_hyperplane(h, id, zero);
    CHECK(lifted.a(0) == Rational(-1));
    CHECK(lifted.a(1) == Rational(-1));
    CHECK(lifted.beta == Rational(5));
}

TEST_CASE("preimage positions agree with direct evaluation on random data") {
    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        int d = 1 + static_cast<int>(rng.below(2));
        int s = 1 + static_cast<int>(rng.below(2));
        IntMatrix c(d, s);
        IntVector b(d);
        Hyperplane h;
        h.a = RatVector(d);
        for (int i = 0; i < d; ++i) {
            b(i) = BigInt(rng.range(-4, 4));
            h.a(i) = Rational(rng.range(-3, 3));
            for (int j = 0; j < s; ++j) c(i, j) = BigInt(rng.range(-3, 3));
        }
        h.beta = Rational(rng.range(-4, 4));
        Hyperplane lifted = preimage_hyperplane(h, c, b);
        RatVector x0(s);
        for (int j = 0; j < s; ++j) x0(j) = Rational(BigInt(rng.range(-9, 9)), BigInt(rng.range(1, 4)));
        RatVector image(d);
        for (int i = 0; i < d; ++i) {
            Rational v(b(i));
            for (int j = 0; j < s; ++j) v -= Rational(c(i, j)) * x0(j);
            image(i) = std::move(v);
        }
        REQUIRE(position_of(image, h) == position_of(x0, lifted));
    }
}

TEST_CASE("induced brick positions slice the lifted vector") {
    PositionVector lifted = {Position::LT, Position::EQ, Position::GT, Position::GT};
    PositionVector brick1 = induced_brick_position(lifted, 1, 2);
    CHECK(brick1.size() == 2);
    CHECK(brick1[0] == Position::GT);
    CHECK(brick1[1] == Position::GT);
}

TEST_CASE("s = 0 ambient space falls out of the same path") {
    std::vector<Hyperplane> hs;
    Hyperplane h;
    h.a = RatVector(0);
    h.beta = Rational(3);
    hs.push_back(h);  // 0 = 3: position always LT
    h.beta = Rational(0);
    hs.push_back(h);  // 0 = 0: position always EQ
    Arrangement arr = enumerate_faces(hs);
    REQUIRE(arr.faces.size() == 1);
    CHECK(arr.faces[0].pv[0] == Position::LT);
    CHECK(arr.faces[0].pv[1] == Position::EQ);
    CHECK(arr.faces[0].witness.size() == 0);
}
