#include "fourblock/graver.hpp"

#include <set>
#include <string>

#include "doctest.h"
#include "fourblock/rng.hpp"

using namespace fourblock;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    IntMatrix m(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (long x : row) m(i, j++) = BigInt(x);
        ++i;
    }
    return m;
}

IntVector iv(std::initializer_list<long> xs) {
    IntVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = BigInt(x);
    return v;
}

std::string key(const IntVector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i).str() + ",";
    return s;
}

std::set<std::string> keys(const std::vector<IntVector>& vs) {
    std::set<std::string> out;
    for (const auto& v : vs) out.insert(key(v));
    return out;
}

// Independent oracle: box-enumerate kernel vectors with pairwise conformal
// minimality filtering.
std::vector<IntVector> brute_graver(const IntMatrix& d, long box) {
    const int t = static_cast<int>(d.cols());
    std::vector<IntVector> kernel;
    std::vector<long> cur(static_cast<size_t>(t), -box);
    while (true) {
        IntVector x(t);
        for (int j = 0; j < t; ++j) x(j) = BigInt(cur[static_cast<size_t>(j)]);
        IntVector img = d * x;
        bool in_kernel = true, zero = true;
        for (Eigen::Index r = 0; r < img.size(); ++r)
            if (!img(r).is_zero()) in_kernel = false;
        for (int j = 0; j < t; ++j)
            if (!x(j).is_zero()) zero = false;
        if (in_kernel && !zero) kernel.push_back(x);
        int pos = t - 1;
        while (pos >= 0 && cur[static_cast<size_t>(pos)] == box) {
            cur[static_cast<size_t>(pos)] = -box;
            --pos;
        }
        if (pos < 0) break;
        ++cur[static_cast<size_t>(pos)];
    }
    std::vector<IntVector> minimal;
    for (size_t i = 0; i < kernel.size(); ++i) {
        bool keep = true;
        for (size_t k = 0; k < kernel.size() && keep; ++k)
            if (k != i && conformal(kernel[k], kernel[i]) && kernel[k] != kernel[i]) keep = false;
        if (keep) minimal.push_back(kernel[i]);
    }
    return minimal;
}

}  // namespace

TEST_CASE("graver basis of the 1x2 difference, ratio and zero matrices") {
    auto g1 = graver_basis(mat({{1, -1}}), 1);
    CHECK(keys(g1.elements) == keys({iv({1, 1}), iv({-1, -1})}));

    auto g2 = graver_basis(mat({{1, 2}}), 2);
    CHECK(keys(g2.elements) == keys({iv({2, -1}), iv({-2, 1})}));

    auto g3 = graver_basis(mat({{0}}), 1);
    CHECK(keys(g3.elements) == keys({iv({1}), iv({-1})}));
}

TEST_CASE("nonnegative graver elements") {
    CHECK(keys(nonneg_graver(mat({{1, -1}}), 1)) == keys({iv({1, 1})}));
    CHECK(nonneg_graver(mat({{1, 0}, {0, 1}}), 1).empty());
    CHECK(nonneg_graver(mat({{1, 1}}), 1).empty());
}

TEST_CASE("graver equals the box-enumeration brute force on small matrices") {
    // all 1x2 sign matrices
    for (long a = -1; a <= 1; ++a)
        for (long b = -1; b <= 1; ++b) {
            IntMatrix d = mat({{a, b}});
            REQUIRE(keys(graver_basis(d, 1).elements) == keys(brute_graver(d, 3)));
        }
    // all 2x2 sign matrices
    for (long a = -1; a <= 1; ++a)
        for (long b = -1; b <= 1; ++b)
            for (long c = -1; c <= 1; ++c)
                for (long e = -1; e <= 1; ++e) {
                    IntMatrix d = mat({{a, b}, {c, e}});
                    REQUIRE(keys(graver_basis(d, 1).elements) == keys(brute_graver(d, 25)));
                }
}

TEST_CASE("graver equals brute force on random 2x3 matrices") {
    Rng rng(321);
    for (int rep = 0; rep < 20; ++rep) {
        IntMatrix d(2, 3);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) d(i, j) = BigInt(rng.range(-1, 1));
        // box 25 covers the l1 cap for d = 2, delta = 1
        REQUIRE(keys(graver_basis(d, 1).elements) == keys(brute_graver(d, 25)));
    }
}

TEST_CASE("nonneg_graver agrees with filtering the full basis") {
    Rng rng(9);
    for (int rep = 0; rep < 15; ++rep) {
        IntMatrix d(1 + static_cast<int>(rng.below(2)), 2 + static_cast<int>(rng.below(2)));
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            for (Eigen::Index j = 0; j < d.cols(); ++j) d(i, j) = BigInt(rng.range(-1, 1));
        auto full = graver_basis(d, 1);
        std::vector<IntVector> filtered;
        for (const auto& g : full.elements) {
            bool nonneg = true;
            for (Eigen::Index j = 0; j < g.size(); ++j)
                if (g(j).sign() < 0) nonneg = false;
            if (nonneg) filtered.push_back(g);
        }
        REQUIRE(keys(nonneg_graver(d, 1)) == keys(filtered));
    }
}

TEST_CASE("base solutions: difference and sum rows") {
    auto s1 = base_solutions(mat({{1, -1}}), iv({2}), 1);
    CHECK(keys(s1.solutions) == keys({iv({2, 0})}));

    auto s0 = base_solutions(mat({{1, -1}}), iv({0}), 1);
    CHECK(keys(s0.solutions) == keys({iv({0, 0})}));

    auto s2 = base_solutions(mat({{1, 1}}), iv({2}), 1);
    CHECK(keys(s2.solutions) == keys({iv({2, 0}), iv({1, 1}), iv({0, 2})}));

    // no solutions at all
    auto s3 = base_solutions(mat({{0, 0}}), iv({1}), 1);
    CHECK(s3.solutions.empty());
}

TEST_CASE("decompose_solution peels nonnegative graver elements") {
    IntMatrix d = mat({{1, -1}});
    auto dec = decompose_solution(d, iv({3, 1}), iv({2}), 1);
    CHECK(dec.base == iv({2, 0}));
    REQUIRE(dec.graver_multiset.size() == 1);
    CHECK(dec.graver_multiset[0].first == iv({1, 1}));
    CHECK(dec.graver_multiset[0].second == BigInt(1));

    dec = decompose_solution(d, iv({2, 0}), iv({2}), 1);
    CHECK(dec.graver_multiset.empty());

    dec = decompose_solution(d, iv({7, 5}), iv({2}), 1);
    CHECK(dec.base == iv({2, 0}));
    REQUIRE(dec.graver_multiset.size() == 1);
    CHECK(dec.graver_multiset[0].second == BigInt(5));
}

TEST_CASE("every bounded solution is a base solution plus nonnegative graver parts") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        IntMatrix d(1, 3);
        for (int j = 0; j < 3; ++j) d(0, j) = BigInt(rng.range(-1, 1));
        IntVector rhs = iv({rng.range(-3, 3)});
        auto bases = base_solutions(d, rhs, 1);
        std::set<std::string> base_keys = keys(bases.solutions);
        // enumerate all solutions in a box and decompose each
        std::vector<long> cur(3, 0);
        while (true) {
            IntVector x = iv({cur[0], cur[1], cur[2]});
            if (d * x == rhs) {
                auto dec = decompose_solution(d, x, rhs, 1);
                REQUIRE(base_keys.count(key(dec.base)) == 1);
                IntVector sum = dec.base;
                for (const auto& [g, c] : dec.graver_multiset) sum += g * c;
                REQUIRE(sum == x);
            }
            int pos = 2;
            while (pos >= 0 && cur[static_cast<size_t>(pos)] == 15) {
                cur[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++cur[static_cast<size_t>(pos)];
        }
    }
}

TEST_CASE("base solutions stay irreducible") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        // brick-shaped: one free row over a bounding mass row
        IntMatrix d(2, 3);
        for (int j = 0; j < 3; ++j) {
            d(0, j) = BigInt(rng.range(-1, 1));
            d(1, j) = BigInt(1);
        }
        IntVector rhs = iv({rng.range(-2, 2), rng.range(0, 9)});
        auto gs = nonneg_graver(d, 1);
        for (const auto& x : base_solutions(d, rhs, 1).solutions)
            for (const auto& g : gs) {
                bool subtractable = true;
                for (int j = 0; j < 3; ++j)
                    if (x(j) < g(j)) subtractable = false;
                REQUIRE(!subtractable);
            }
    }
}
