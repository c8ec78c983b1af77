#include "fourblock/decomposition.hpp"

#include <set>

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

IntVector mod_vector(const IntVector& b, const BigInt& m) {
    IntVector r(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) r(i) = fmod(b(i), m);
    return r;
}

}  // namespace

TEST_CASE("d=1 scheme: two bases, four hyperplanes, modulus 3") {
    DecompositionScheme s = build_scheme(1, 1, 3);
    CHECK(s.psi == BigInt(1));
    CHECK(s.phi == BigInt(1));
    CHECK(s.modulus == BigInt(3));
    REQUIRE(s.hyperplanes.size() == 4);
    std::multiset<std::pair<std::string, std::string>> got;
    for (const auto& sh : s.hyperplanes)
        got.insert({sh.h.a(0).str(), sh.h.beta.str()});
    std::multiset<std::pair<std::string, std::string>> expect = {
        {"1", "0"}, {"1", "3"}, {"-1", "0"}, {"-1", "3"}};
    CHECK(got == expect);
}

TEST_CASE("d=2 scheme: psi 2, modulus divisible by 4, M*inv(W) lands in t_dec * Z") {
    DecompositionScheme s = build_scheme(2, 1, 2);
    CHECK(s.psi == BigInt(2));
    CHECK(fmod(s.modulus, BigInt(4)) == BigInt(0));
    Rational t(BigInt(s.t_dec));
    for (const auto& vbar : s.basis_list.bases) {
        IntMatrix wbar = vbar * s.psi;
        RatMatrix scaled = inverse(wbar) * Rational(s.modulus);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) {
                Rational quotient = scaled(i, j) / t;
                REQUIRE(quotient.is_integer());
            }
    }
    // uniform-modulus divisibility by t_dec * psi * |det|
    for (const auto& vbar : s.basis_list.bases) {
        BigInt unit = BigInt(s.t_dec) * s.psi * abs(det(vbar));
        REQUIRE(fmod(s.modulus, unit) == BigInt(0));
    }
}

TEST_CASE("worked example map: d=2, t_dec=2, modulus override 4, r=(1,2), b=(9,18)") {
    DecompositionScheme s = build_scheme(2, 1, 2, BigInt(4));
    IntVector r = iv({1, 2});
    IntVector b = iv({9, 18});
    auto map = build_affine_map_at(s, r, b);
    REQUIRE(map.has_value());
    CHECK(map->ell == 2);
    CHECK(map->s_set.empty());
    REQUIRE(map->support.size() == 3);
    CHECK(map->support[0] == iv({5, 10}));
    CHECK(map->support[1] == iv({0, 2}));
    CHECK(map->support[2] == iv({2, 2}));
    CHECK(map->gamma(0) == Rational(BigInt(5), BigInt(2)));
    CHECK(map->gamma(1) == Rational(BigInt(5), BigInt(2)));
    CHECK(map->alpha(0) == Rational(BigInt(1), BigInt(2)));
    CHECK(map->alpha(1) == Rational(BigInt(1), BigInt(2)));

    IntVector mult = evaluate(*map, b);
    CHECK(mult(0) == BigInt(1));
    CHECK(mult(1) == BigInt(2));
    CHECK(mult(2) == BigInt(2));
    CHECK(decomposition_order(*map) == BigInt(10));

    // same lattice translate, same face: b = q + 4*w1
    IntVector b2 = iv({5, 18});
    bool same_face = true;
    for (const auto& sh : s.hyperplanes)
        if (position_of(to_rational(b2), sh.h) != position_of(to_rational(b), sh.h)) {
            same_face = false;
            break;
        }
    REQUIRE(same_face);
    IntVector mult2 = evaluate(*map, b2);
    CHECK(mult2(0) == BigInt(1));
    CHECK(mult2(1) == BigInt(4));
    CHECK(mult2(2) == BigInt(0));
}

TEST_CASE("origin apex: q = 0 and the map is the constant singleton") {
    DecompositionScheme s = build_scheme(2, 1, 2);
    IntVector zero = iv({0, 0});
    auto map = build_affine_map_at(s, zero, zero);
    REQUIRE(map.has_value());
    REQUIRE(map->support.size() == 1);
    CHECK(linf_norm(map->support[0]) == BigInt(0));
    IntVector mult = evaluate(*map, zero);
    CHECK(mult(0) == BigInt(1));
    CHECK(decomposition_order(*map) == BigInt(0));
}

TEST_CASE("b = q evaluates to the singleton multiset") {
    DecompositionScheme s = build_scheme(2, 1, 2, BigInt(4));
    auto map = build_affine_map_at(s, iv({1, 2}), iv({9, 18}));
    REQUIRE(map.has_value());
    IntVector q = map->support[0];
    // q = (5,10) lies in the same face and translate; its multiset is {q: 1}
    IntVector mult = evaluate(*map, q);
    CHECK(mult(0) == BigInt(1));
    for (Eigen::Index k = 1; k < mult.size(); ++k) CHECK(mult(k) == BigInt(0));
}

TEST_CASE("identity, conformality and divisibility over random d=1 and d=2 inputs") {
    Rng rng(77);
    for (long t_dec : {2L, 3L}) {
        for (int d : {1, 2}) {
            DecompositionScheme s = build_scheme(d, 1, t_dec);
            REQUIRE(s.modulus.fits_long());
            for (int rep = 0; rep < 50; ++rep) {
                IntVector b(d);
                for (int i = 0; i < d; ++i) b(i) = BigInt(rng.range(-60, 60));
                IntVector r = mod_vector(b, s.modulus);
                auto map = build_affine_map_at(s, r, b);
                REQUIRE(map.has_value());
                IntVector mult = evaluate(*map, b);  // identity sum asserted inside
                CHECK(mult(0) == BigInt(1));
                for (Eigen::Index k = 1; k < mult.size(); ++k)
                    CHECK(fmod(mult(k), BigInt(t_dec)) == BigInt(0));
                // conformality of every support vector, multiplicity 0 included
                for (const auto& piece : map->support)
                    for (int j = 0; j < d; ++j) {
                        CHECK(piece(j) * b(j) >= BigInt(0));
                        CHECK(abs(piece(j)) <= abs(b(j)));
                    }
            }
        }
    }
}

TEST_CASE("lambda residues are constant across the (r, F) domain") {
    Rng rng(123);
    DecompositionScheme s = build_scheme(2, 1, 2);
    REQUIRE(s.modulus.fits_long());
    long m = s.modulus.to_long();
    int checked = 0;
    for (int rep = 0; rep < 200 && checked < 20; ++rep) {
        IntVector b(2);
        for (int i = 0; i < 2; ++i) b(i) = BigInt(rng.range(-50, 50));
        // search for a second point of the same face in the same translate
        IntVector b2(2);
        bool found = false;
        for (long k1 = -2; k1 <= 2 && !found; ++k1)
            for (long k2 = -2; k2 <= 2 && !found; ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                b2(0) = b(0) + BigInt(k1 * m);
                b2(1) = b(1) + BigInt(k2 * m);
                bool same = true;
                for (const auto& sh : s.hyperplanes)
                    if (position_of(to_rational(b2), sh.h) != position_of(to_rational(b), sh.h)) {
                        same = false;
                        break;
                    }
                found = same;
            }
        if (!found) continue;
        ++checked;
        auto map = build_affine_map_at(s, mod_vector(b, s.modulus), b);
        REQUIRE(map.has_value());
        RatMatrix wbar_inv = inverse(map->wbar);
        RatVector diff = wbar_inv * to_rational(IntVector(b2 - b));
        for (int i = 0; i < map->ell; ++i) {
            Rational q = diff(i) / Rational(BigInt(s.t_dec));
            REQUIRE(q.is_integer());
        }
        evaluate(*map, b2);  // both points admit valid multisets
    }
    CHECK(checked >= 5);
}

TEST_CASE("evaluate rejects points outside the domain") {
    DecompositionScheme s = build_scheme(1, 1, 3);
    IntVector b = iv({10});
    auto map = build_affine_map_at(s, mod_vector(b, s.modulus), b);
    REQUIRE(map.has_value());
    CHECK_THROWS_AS(evaluate(*map, iv({-10})), Error);
}

TEST_CASE("order bound on all d=1 maps with t_dec=3") {
    DecompositionScheme s = build_scheme(1, 1, 3);
    Rng rng(5);
    BigInt bound = BigInt(2 * 3 * 1) * s.psi * s.phi;  // 2 t d max||w||
    for (int rep = 0; rep < 60; ++rep) {
        IntVector b = iv({rng.range(-60, 60)});
        auto map = build_affine_map_at(s, mod_vector(b, s.modulus), b);
        REQUIRE(map.has_value());
        CHECK(decomposition_order(*map) <= bound);
    }
}
